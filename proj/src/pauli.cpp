// SPDX-License-Identifier: Apache-2.0
#include "pqe/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pqe {

namespace {

std::uint64_t register_mask(int num_qubits) {
  return num_qubits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << num_qubits) - 1);
}

constexpr cplx kIPowers[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

}  // namespace

PauliString::PauliString(int num_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
    : num_qubits_(num_qubits), x_(x_mask), z_(z_mask) {
  if (num_qubits < 0 || num_qubits > kMaxMaskQubits) {
    throw std::invalid_argument("PauliString: qubit count out of range");
  }
  const auto mask = register_mask(num_qubits);
  if ((x_mask & ~mask) || (z_mask & ~mask)) {
    throw std::invalid_argument("PauliString: mask exceeds register of " +
                                std::to_string(num_qubits) + " qubits");
  }
}

PauliString PauliString::parse(std::string_view text, int num_qubits) {
  std::uint64_t x = 0, z = 0;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    if (tok == "I") continue;
    if (tok.size() < 2) throw std::invalid_argument("PauliString::parse: bad token '" + tok + "'");
    const int q = std::stoi(tok.substr(1));
    if (q < 0 || q >= num_qubits) throw std::invalid_argument("PauliString::parse: qubit out of range");
    const std::uint64_t bit = std::uint64_t{1} << q;
    if ((x | z) & bit) throw std::invalid_argument("PauliString::parse: repeated qubit " + tok);
    switch (tok[0]) {
      case 'X': x |= bit; break;
      case 'Y': x |= bit; z |= bit; break;
      case 'Z': z |= bit; break;
      default: throw std::invalid_argument("PauliString::parse: bad Pauli '" + tok + "'");
    }
  }
  return PauliString(num_qubits, x, z);
}

int PauliString::weight() const { return std::popcount(x_ | z_); }

int PauliString::num_y() const { return std::popcount(x_ & z_); }

bool PauliString::commutes_with(const PauliString& other) const {
  return ((std::popcount(x_ & other.z_) + std::popcount(z_ & other.x_)) & 1) == 0;
}

std::string PauliString::str() const {
  if (is_identity()) return "I";
  std::string out;
  for (int q = 0; q < num_qubits_; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << q;
    const bool xb = x_ & bit, zb = z_ & bit;
    if (!xb && !zb) continue;
    if (!out.empty()) out += ' ';
    out += xb ? (zb ? 'Y' : 'X') : 'Z';
    out += std::to_string(q);
  }
  return out;
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("multiply: mismatched qubit counts");
  }
  // a b = i^{ya + yb} X^xa Z^za X^xb Z^zb = i^{ya + yb} (-1)^{|za & xb|} X^x Z^z,
  // and the result string itself carries i^{yc}.
  const std::uint64_t x = a.x_mask() ^ b.x_mask();
  const std::uint64_t z = a.z_mask() ^ b.z_mask();
  const int yc = std::popcount(x & z);
  int exponent = a.num_y() + b.num_y() - yc + 2 * std::popcount(a.z_mask() & b.x_mask());
  exponent = ((exponent % 4) + 4) % 4;
  return {kIPowers[exponent], PauliString(a.num_qubits(), x, z)};
}

QubitOperator QubitOperator::identity(int num_qubits, cplx coeff) {
  QubitOperator op(num_qubits);
  op.add_term(coeff, PauliString(num_qubits, 0, 0));
  return op;
}

void QubitOperator::add_term(cplx coeff, const PauliString& p) {
  if (p.num_qubits() != num_qubits_) {
    throw std::invalid_argument("QubitOperator::add_term: qubit count mismatch");
  }
  terms_.emplace_back(coeff, p);
}

QubitOperator& QubitOperator::simplify(double tol) {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.second < b.second; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().second == t.second) {
      merged.back().first += t.first;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [tol](const Term& t) { return std::abs(t.first) < tol; });
  terms_ = std::move(merged);
  return *this;
}

QubitOperator& QubitOperator::operator+=(const QubitOperator& rhs) {
  if (rhs.num_qubits_ != num_qubits_) throw std::invalid_argument("QubitOperator: qubit count mismatch");
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  return simplify();
}

QubitOperator& QubitOperator::operator-=(const QubitOperator& rhs) {
  return *this += rhs * cplx(-1.0);
}

QubitOperator& QubitOperator::operator*=(cplx scale) {
  for (auto& t : terms_) t.first *= scale;
  return *this;
}

QubitOperator operator*(const QubitOperator& a, const QubitOperator& b) {
  if (a.num_qubits_ != b.num_qubits_) throw std::invalid_argument("QubitOperator: qubit count mismatch");
  QubitOperator out(a.num_qubits_);
  out.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ca, pa] : a.terms_) {
    for (const auto& [cb, pb] : b.terms_) {
      auto [phase, p] = multiply(pa, pb);
      out.terms_.emplace_back(ca * cb * phase, p);
    }
  }
  out.simplify();
  return out;
}

QubitOperator QubitOperator::adjoint() const {
  QubitOperator out = *this;
  for (auto& t : out.terms_) t.first = std::conj(t.first);
  return out;
}

bool QubitOperator::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const Term& t) { return std::abs(t.first.imag()) <= tol; });
}

bool QubitOperator::is_anti_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const Term& t) { return std::abs(t.first.real()) <= tol; });
}

bool QubitOperator::terms_pairwise_commute() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      if (!terms_[i].second.commutes_with(terms_[j].second)) return false;
    }
  }
  return true;
}

double QubitOperator::one_norm() const {
  double s = 0.0;
  for (const auto& [c, p] : terms_) {
    if (!p.is_identity()) s += std::abs(c);
  }
  return s;
}

std::string QubitOperator::str() const {
  std::ostringstream os;
  os.precision(12);
  for (const auto& [c, p] : terms_) {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i) [" << p.str() << "]\n";
  }
  return os.str();
}

}  // namespace pqe
