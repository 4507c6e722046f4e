// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pqe/pauli.hpp"

namespace pqe {

/// Dense state over 2^n computational basis states. Basis index i has qubit q
/// in state |1> iff bit q of i is set (qubit 0 least significant), which is
/// also the occupation bitstring of a Determinant.
class StateVector {
 public:
  /// 2^20 amplitudes (16 MiB) is the supported ceiling.
  static constexpr int kMaxQubits = 20;

  StateVector() = default;
  /// |0...0>
  explicit StateVector(int num_qubits);
  static StateVector basis_state(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }

  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  cplx* data() { return amps_.data(); }
  const cplx* data() const { return amps_.data(); }

  double norm() const;
  void set_zero();

 private:
  int num_qubits_ = 0;
  std::vector<cplx> amps_;
};

/// <bra|ket>
cplx overlap(const StateVector& bra, const StateVector& ket);

/// state <- P state
void apply_pauli_string(StateVector& state, const PauliString& p);

/// out <- op |in>. `out` is resized and overwritten.
void apply_operator(const QubitOperator& op, const StateVector& in, StateVector& out);

/// <psi|op|psi>. The operator must be Hermitian; the imaginary part of the
/// result is checked against 1e-10 and dropped.
double expectation(const StateVector& state, const QubitOperator& op);

/// exp(t * kappa) for an anti-Hermitian kappa whose strings pairwise commute,
/// preprocessed once so repeated application skips validation. Each string
/// contributes the exact factor cos(t b) + i sin(t b) P for kappa term i b P.
class CommutingExponential {
 public:
  CommutingExponential() = default;
  explicit CommutingExponential(const QubitOperator& kappa);

  int num_qubits() const { return num_qubits_; }
  std::size_t size() const { return terms_.size(); }

  /// state <- exp(t kappa) state
  void apply(StateVector& state, double t) const;
  /// state <- kappa state (the generator itself, used by gradients)
  void apply_generator(const StateVector& in, StateVector& out) const;

 private:
  struct Term {
    std::uint64_t x, z;
    double b;      // kappa coefficient is i b
    cplx phase;    // i^{num_y}, folding Y = i X Z into the kernels
  };
  int num_qubits_ = 0;
  std::vector<Term> terms_;
};

/// Validating one-shot form of CommutingExponential::apply.
void apply_exp_kappa(StateVector& state, const QubitOperator& kappa, double t);

/// Multinomial sample of `shots` computational-basis measurements. Same seed,
/// same counts.
std::map<std::uint64_t, std::uint64_t> sample_basis(const StateVector& state, std::uint64_t shots,
                                                    std::uint64_t seed);

/// First-order Trotter product (prod_l exp(-i dt/steps h_l P_l))^steps.
/// Within a step factors are applied in descending |h_l|, ties broken by
/// ascending (x_mask, z_mask); identity terms contribute their global phase.
void apply_trotter_evolution(StateVector& state, const QubitOperator& h, double dt, int steps);

}  // namespace pqe
