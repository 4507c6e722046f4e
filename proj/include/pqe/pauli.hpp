// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pqe {

using cplx = std::complex<double>;

/// Largest register the bitmask representation supports.
inline constexpr int kMaxMaskQubits = 64;

/// A tensor product of single-qubit Paulis in symplectic form.
///
/// Qubit q carries X if only x bit q is set, Z if only z bit q is set and Y if
/// both are set. The string denotes the Hermitian operator
/// i^{|x & z|} X^x Z^z, so Y = iXZ on every qubit where both bits are set.
class PauliString {
 public:
  PauliString() = default;
  PauliString(int num_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  /// Parses "X0 Y3 Z4" (whitespace-separated, order irrelevant). "I" or an
  /// empty string gives the identity.
  static PauliString parse(std::string_view text, int num_qubits);

  int num_qubits() const { return num_qubits_; }
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  int weight() const;
  bool is_identity() const { return (x_ | z_) == 0; }

  /// Number of Y factors; the operator carries the phase i^{num_y()}
  /// relative to X^x Z^z.
  int num_y() const;

  /// Symplectic criterion: two strings commute iff |x1&z2| + |z1&x2| is even.
  bool commutes_with(const PauliString& other) const;

  std::string str() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
    if (auto c = a.x_ <=> b.x_; c != 0) return c;
    return a.z_ <=> b.z_;
  }

 private:
  int num_qubits_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
};

struct PauliProduct {
  cplx phase;  // one of +1, -1, +i, -i
  PauliString string;
};

/// a * b, with the phase accumulated from the single-qubit Pauli table.
PauliProduct multiply(const PauliString& a, const PauliString& b);

/// Weighted sum of Pauli strings on a fixed register.
class QubitOperator {
 public:
  using Term = std::pair<cplx, PauliString>;

  static constexpr double kPruneTolerance = 1e-12;

  QubitOperator() = default;
  explicit QubitOperator(int num_qubits) : num_qubits_(num_qubits) {}

  static QubitOperator identity(int num_qubits, cplx coeff = 1.0);

  int num_qubits() const { return num_qubits_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  void add_term(cplx coeff, const PauliString& p);

  /// Merges equal strings, drops coefficients with magnitude below `tol`
  /// and sorts terms by (x_mask, z_mask).
  QubitOperator& simplify(double tol = kPruneTolerance);

  QubitOperator& operator+=(const QubitOperator& rhs);
  QubitOperator& operator-=(const QubitOperator& rhs);
  QubitOperator& operator*=(cplx scale);
  friend QubitOperator operator+(QubitOperator a, const QubitOperator& b) { return a += b; }
  friend QubitOperator operator-(QubitOperator a, const QubitOperator& b) { return a -= b; }
  friend QubitOperator operator*(QubitOperator a, cplx s) { return a *= s; }
  friend QubitOperator operator*(cplx s, QubitOperator a) { return a *= s; }

  /// Operator product, simplified.
  friend QubitOperator operator*(const QubitOperator& a, const QubitOperator& b);

  QubitOperator adjoint() const;

  bool is_hermitian(double tol = 1e-10) const;
  bool is_anti_hermitian(double tol = 1e-10) const;
  bool terms_pairwise_commute() const;

  /// Sum of |h_l| over non-identity terms.
  double one_norm() const;

  std::string str() const;

 private:
  int num_qubits_ = 0;
  std::vector<Term> terms_;
};

}  // namespace pqe
