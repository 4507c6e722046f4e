// SPDX-License-Identifier: Apache-2.0
#include "pqe/pqe_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pqe/diis.hpp"
#include "pqe/error.hpp"

namespace pqe {

double ResidualVector::norm() const {
  return std::sqrt(std::inner_product(values.begin(), values.end(), values.begin(), 0.0));
}

double ResidualVector::one_norm() const {
  double s = 0.0;
  for (double v : values) s += std::abs(v);
  return s;
}

StateVector transformed_reference(const DuccAnsatz& ansatz, const QubitOperator& h) {
  StateVector psi = prepare_state(ansatz);
  StateVector chi;
  apply_operator(h, psi, chi);
  apply_unitary_adjoint(ansatz, chi);
  return chi;
}

namespace {

const PhasedDeterminant& require_target(const DuccAnsatz& ansatz, std::size_t k) {
  const auto& t = ansatz.target(k);
  if (!t) {
    throw std::invalid_argument("residual: operator " + ansatz.op(k).str() +
                                " does not excite the reference (identity metric violated)");
  }
  return *t;
}

}  // namespace

ResidualVector residual_projective(const DuccAnsatz& ansatz, const QubitOperator& h) {
  const StateVector chi = transformed_reference(ansatz, h);
  ResidualVector r;
  r.values.resize(ansatz.size());
  for (std::size_t k = 0; k < ansatz.size(); ++k) {
    const auto& t = require_target(ansatz, k);
    const cplx v = static_cast<double>(t.phase) * chi[t.det.bits];
    if (std::abs(v.imag()) > 1e-10) {
      throw NumericalError("residual_projective: imaginary part " + std::to_string(v.imag()) +
                           " for " + ansatz.op(k).str());
    }
    r.values[k] = v.real();
  }
  return r;
}

double residual_via_expectation(const DuccAnsatz& ansatz, const QubitOperator& h, std::size_t mu) {
  const auto& t = require_target(ansatz, mu);
  const int n = ansatz.num_qubits();

  StateVector omega = StateVector::basis_state(n, ansatz.reference().bits);
  ansatz.exponential(mu).apply(omega, std::numbers::pi / 4);
  apply_unitary(ansatz, omega);

  StateVector excited = StateVector::basis_state(n, t.det.bits);
  apply_unitary(ansatz, excited);

  const StateVector psi = prepare_state(ansatz);
  return expectation(omega, h) - 0.5 * expectation(excited, h) - 0.5 * expectation(psi, h);
}

ResidualVector residual_all_via_expectation(const DuccAnsatz& ansatz, const QubitOperator& h) {
  ResidualVector r;
  r.values.resize(ansatz.size());
  for (std::size_t k = 0; k < ansatz.size(); ++k) r.values[k] = residual_via_expectation(ansatz, h, k);
  return r;
}

std::vector<double> mp_denominators(const std::vector<double>& eps, const DuccAnsatz& ansatz) {
  std::vector<double> d(ansatz.size());
  for (std::size_t k = 0; k < ansatz.size(); ++k) d[k] = mp_denominator(eps, ansatz.op(k));
  return d;
}

std::vector<double> quasi_newton_step(std::span<const double> residual,
                                      std::span<const double> denominators,
                                      std::span<const double> amplitudes) {
  if (residual.size() != denominators.size() || residual.size() != amplitudes.size()) {
    throw std::invalid_argument("quasi_newton_step: length mismatch");
  }
  std::vector<double> out(amplitudes.begin(), amplitudes.end());
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (std::abs(denominators[k]) <= 1e-8) {
      throw NumericalError("quasi_newton_step: vanishing denominator for operator " +
                           std::to_string(k) + " (degenerate orbitals)");
    }
    out[k] += residual[k] / denominators[k];
  }
  return out;
}

std::vector<double> inject_noise(std::vector<double> v, double sigma, std::mt19937_64& rng) {
  if (sigma < 0.0) throw std::invalid_argument("inject_noise: sigma must be >= 0");
  if (sigma == 0.0) return v;
  std::normal_distribution<double> gauss(0.0, sigma);
  for (double& x : v) x += gauss(rng);
  return v;
}

std::vector<double> inject_noise(std::vector<double> v, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return inject_noise(std::move(v), sigma, rng);
}

PqeResult run_pqe(const MolecularProblem& problem, const QubitOperator& h, DuccAnsatz& ansatz,
                  const PqeConfig& config) {
  if (!(config.omega_r > 0.0)) throw std::invalid_argument("run_pqe: omega_r must be positive");
  const std::vector<double> denom = mp_denominators(orbital_energies(problem), ansatz);
  for (std::size_t k = 0; k < denom.size(); ++k) {
    if (std::abs(denom[k]) <= 1e-8) {
      throw NumericalError("run_pqe: vanishing denominator for " + ansatz.op(k).str());
    }
  }
  std::mt19937_64 rng(config.rng_seed);
  Diis diis(config.use_diis ? static_cast<std::size_t>(config.diis_depth) : 0);

  PqeResult res;
  double e_prev = expectation(prepare_state(ansatz), h);
  res.energy = e_prev;
  if (ansatz.empty()) {
    res.converged = true;
    return res;
  }
  for (int it = 1; it <= config.max_micro; ++it) {
    ResidualVector r = config.mode == ResidualMode::kProjective ? residual_projective(ansatz, h)
                                                                : residual_all_via_expectation(ansatz, h);
    ++res.residual_evaluations;
    r.values = inject_noise(std::move(r.values), config.noise_sigma, rng);

    const std::vector<double> t_old = ansatz.amplitudes();
    std::vector<double> t_new = quasi_newton_step(r.values, denom, t_old);
    ansatz.set_amplitudes(t_new);
    const double e = expectation(prepare_state(ansatz), h);
    const double rnorm = r.norm();
    res.trace.push_back({it, e, e - e_prev, res.residual_evaluations, rnorm});
    res.energy = e;
    res.residual_norm = rnorm;
    e_prev = e;
    if (!std::isfinite(e) || !std::isfinite(rnorm)) throw NumericalError("run_pqe: non-finite iterate");
    if (rnorm <= config.omega_r) {
      res.converged = true;
      break;
    }
    if (config.use_diis) {
      std::vector<double> err = r.values;
      if (config.diis_error == DiisError::kStep) {
        for (std::size_t k = 0; k < err.size(); ++k) err[k] = t_new[k] - t_old[k];
      }
      diis.push(std::move(t_new), std::move(err));
      if (static_cast<int>(diis.size()) >= config.diis_start) ansatz.set_amplitudes(diis.extrapolate().amplitudes);
    }
  }
  res.amplitudes = ansatz.amplitudes();
  return res;
}

GershgorinResult gershgorin_radius(const DuccAnsatz& ansatz, const QubitOperator& h,
                                   std::span<const double> spectrum) {
  if (spectrum.empty()) throw std::invalid_argument("gershgorin_radius: empty spectrum");
  const StateVector chi = transformed_reference(ansatz, h);
  GershgorinResult g;
  const auto ref = ansatz.reference().bits;
  for (std::size_t i = 0; i < chi.dim(); ++i) {
    if (i != ref) g.rho += std::abs(chi[i]);
  }
  g.energy = chi[ref].real();
  g.distance = INFINITY;
  for (double e : spectrum) g.distance = std::min(g.distance, std::abs(g.energy - e));
  g.bound_holds = g.distance <= g.rho + 1e-10;
  return g;
}

GershgorinResult gershgorin_radius(const DuccAnsatz& ansatz, const QubitOperator& h,
                                   const MolecularProblem& problem) {
  const FciResult spec = fci_solve(problem, 0);
  return gershgorin_radius(ansatz, h, spec.energies);
}

}  // namespace pqe
