// SPDX-License-Identifier: Apache-2.0
#include "pqe/state_vector.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "pqe/error.hpp"
#include "pqe/kernels.hpp"

namespace pqe {

namespace {

constexpr cplx kIPowers[4] = {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

cplx y_phase(const PauliString& p) { return kIPowers[p.num_y() & 3]; }

void require_same(int a, int b, const char* where) {
  if (a != b) {
    throw std::invalid_argument(std::string(where) + ": qubit count mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 0 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("StateVector: " + std::to_string(num_qubits) +
                                " qubits outside supported range [0, " +
                                std::to_string(kMaxQubits) + "]");
  }
  amps_.assign(std::size_t{1} << num_qubits, cplx(0.0));
  amps_[0] = 1.0;
}

StateVector StateVector::basis_state(int num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  if (index >= s.dim()) throw std::invalid_argument("StateVector::basis_state: index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::norm() const {
  return std::sqrt(kernels::active().inner(amps_.data(), amps_.data(), amps_.size()).real());
}

void StateVector::set_zero() { std::fill(amps_.begin(), amps_.end(), cplx(0.0)); }

cplx overlap(const StateVector& bra, const StateVector& ket) {
  require_same(bra.num_qubits(), ket.num_qubits(), "overlap");
  return kernels::active().inner(bra.data(), ket.data(), bra.dim());
}

void apply_pauli_string(StateVector& state, const PauliString& p) {
  require_same(state.num_qubits(), p.num_qubits(), "apply_pauli_string");
  // c = 0, beta = phase: a pure (signed, permuted) Pauli action.
  kernels::active().pauli_rotate(state.data(), state.dim(), p.x_mask(), p.z_mask(), 0.0, y_phase(p));
}

void apply_operator(const QubitOperator& op, const StateVector& in, StateVector& out) {
  require_same(op.num_qubits(), in.num_qubits(), "apply_operator");
  if (out.num_qubits() != in.num_qubits()) out = StateVector(in.num_qubits());
  out.set_zero();
  const auto& k = kernels::active();
  for (const auto& [c, p] : op.terms()) {
    k.pauli_accumulate(in.data(), out.data(), in.dim(), p.x_mask(), p.z_mask(), c * y_phase(p));
  }
}

double expectation(const StateVector& state, const QubitOperator& op) {
  require_same(state.num_qubits(), op.num_qubits(), "expectation");
  if (!op.is_hermitian()) throw std::invalid_argument("expectation: operator is not Hermitian");
  const auto& k = kernels::active();
  cplx acc = 0.0;
  for (const auto& [c, p] : op.terms()) {
    acc += c * y_phase(p) * k.pauli_expectation(state.data(), state.dim(), p.x_mask(), p.z_mask());
  }
  if (std::abs(acc.imag()) > 1e-10) {
    throw NumericalError("expectation: imaginary part " + std::to_string(acc.imag()) +
                         " exceeds 1e-10");
  }
  return acc.real();
}

CommutingExponential::CommutingExponential(const QubitOperator& kappa)
    : num_qubits_(kappa.num_qubits()) {
  if (!kappa.is_anti_hermitian(1e-12)) {
    throw std::invalid_argument("CommutingExponential: generator is not anti-Hermitian");
  }
  if (!kappa.terms_pairwise_commute()) {
    throw std::invalid_argument("CommutingExponential: generator terms do not commute");
  }
  terms_.reserve(kappa.size());
  for (const auto& [c, p] : kappa.terms()) {
    if (p.is_identity()) {
      throw std::invalid_argument("CommutingExponential: identity term in generator");
    }
    terms_.push_back({p.x_mask(), p.z_mask(), c.imag(), y_phase(p)});
  }
}

void CommutingExponential::apply(StateVector& state, double t) const {
  require_same(state.num_qubits(), num_qubits_, "CommutingExponential::apply");
  if (t == 0.0) return;
  const auto& k = kernels::active();
  for (const auto& term : terms_) {
    const double theta = t * term.b;
    k.pauli_rotate(state.data(), state.dim(), term.x, term.z, std::cos(theta),
                   cplx(0.0, std::sin(theta)) * term.phase);
  }
}

void CommutingExponential::apply_generator(const StateVector& in, StateVector& out) const {
  require_same(in.num_qubits(), num_qubits_, "CommutingExponential::apply_generator");
  if (out.num_qubits() != in.num_qubits()) out = StateVector(in.num_qubits());
  out.set_zero();
  const auto& k = kernels::active();
  for (const auto& term : terms_) {
    k.pauli_accumulate(in.data(), out.data(), in.dim(), term.x, term.z,
                       cplx(0.0, term.b) * term.phase);
  }
}

void apply_exp_kappa(StateVector& state, const QubitOperator& kappa, double t) {
  CommutingExponential(kappa).apply(state, t);
}

std::map<std::uint64_t, std::uint64_t> sample_basis(const StateVector& state, std::uint64_t shots,
                                                    std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("sample_basis: shots must be >= 1");
  std::vector<double> probs(state.dim());
  double total = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) total += probs[i] = std::norm(state[i]);
  if (!(total > 0.0)) throw NumericalError("sample_basis: state has zero norm");
  std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
  std::mt19937_64 rng(seed);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (std::uint64_t s = 0; s < shots; ++s) ++counts[dist(rng)];
  return counts;
}

void apply_trotter_evolution(StateVector& state, const QubitOperator& h, double dt, int steps) {
  require_same(state.num_qubits(), h.num_qubits(), "apply_trotter_evolution");
  if (steps < 1) throw std::invalid_argument("apply_trotter_evolution: steps must be >= 1");
  if (!h.is_hermitian()) throw std::invalid_argument("apply_trotter_evolution: operator is not Hermitian");
  if (dt == 0.0) return;

  std::vector<QubitOperator::Term> order = h.terms();
  std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a.first), mb = std::abs(b.first);
    if (ma != mb) return ma > mb;
    return a.second < b.second;
  });

  const double tau = dt / steps;
  const auto& k = kernels::active();
  cplx global = 1.0;
  for (int s = 0; s < steps; ++s) {
    for (const auto& [c, p] : order) {
      const double theta = tau * c.real();
      if (p.is_identity()) {
        global *= std::polar(1.0, -theta);
        continue;
      }
      // exp(-i theta P) = cos(theta) - i sin(theta) P
      k.pauli_rotate(state.data(), state.dim(), p.x_mask(), p.z_mask(), std::cos(theta),
                     cplx(0.0, -std::sin(theta)) * y_phase(p));
    }
  }
  if (global != cplx(1.0)) {
    for (auto& a : state.amplitudes()) a *= global;
  }
}

}  // namespace pqe
