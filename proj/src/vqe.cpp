// SPDX-License-Identifier: Apache-2.0
#include "pqe/vqe.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pqe/error.hpp"

namespace pqe {

double vqe_energy(const DuccAnsatz& ansatz, const QubitOperator& h) {
  return expectation(prepare_state(ansatz), h);
}

std::vector<double> vqe_gradient(const DuccAnsatz& ansatz, const QubitOperator& h, double& energy) {
  StateVector psi = prepare_state(ansatz);
  StateVector lambda, kpsi;
  apply_operator(h, psi, lambda);
  energy = overlap(psi, lambda).real();
  std::vector<double> g(ansatz.size());
  for (std::size_t k = ansatz.size(); k-- > 0;) {
    const auto& e = ansatz.exponential(k);
    e.apply_generator(psi, kpsi);
    g[k] = 2.0 * overlap(lambda, kpsi).real();
    if (k > 0) {
      e.apply(psi, -ansatz.amplitudes()[k]);
      e.apply(lambda, -ansatz.amplitudes()[k]);
    }
  }
  return g;
}

std::vector<double> vqe_gradient(const DuccAnsatz& ansatz, const QubitOperator& h) {
  double e;
  return vqe_gradient(ansatz, h, e);
}

VqeResult run_vqe(const QubitOperator& h, DuccAnsatz& ansatz, const VqeConfig& config) {
  if (!(config.omega_g > 0.0)) throw std::invalid_argument("run_vqe: omega_g must be positive");
  if (config.noise_sigma < 0.0) throw std::invalid_argument("run_vqe: noise_sigma must be >= 0");
  std::mt19937_64 rng(config.rng_seed);
  std::normal_distribution<double> gauss(0.0, config.noise_sigma > 0.0 ? config.noise_sigma : 1.0);
  VqeResult res;
  auto fg = [&](const std::vector<double>& x, std::vector<double>& g) {
    ansatz.set_amplitudes(x);
    double e = 0.0;
    g = vqe_gradient(ansatz, h, e);
    if (config.noise_sigma > 0.0) {
      for (double& v : g) v += gauss(rng);
    }
    if (!std::isfinite(e)) throw NumericalError("run_vqe: non-finite energy");
    return e;
  };
  BfgsOptions opt;
  opt.gtol = config.omega_g;
  opt.max_iterations = config.max_bfgs_iters;
  const std::vector<double> start = ansatz.amplitudes();
  if (start.empty()) {
    res.energy = vqe_energy(ansatz, h);
    res.converged = true;
    return res;
  }
  BfgsResult b = minimize_bfgs(fg, start, opt);
  ansatz.set_amplitudes(b.x);
  res.trace = std::move(b.trace);
  res.converged = b.converged;
  res.line_search_failed = b.line_search_failed;
  res.energy = b.value;
  res.gradient_norm = b.gradient_norm;
  res.gradient_evaluations = b.evaluations;
  res.amplitudes = std::move(b.x);
  return res;
}

std::vector<double> adapt_pool_gradients(const StateVector& state, const std::vector<FermionExcitation>& pool,
                                         const QubitOperator& h) {
  StateVector hpsi, kpsi;
  apply_operator(h, state, hpsi);
  std::vector<double> g(pool.size());
  for (std::size_t k = 0; k < pool.size(); ++k) {
    CommutingExponential(jordan_wigner_excitation(pool[k], state.num_qubits())).apply_generator(state, kpsi);
    g[k] = 2.0 * overlap(hpsi, kpsi).real();
  }
  return g;
}

AdaptResult run_adapt_vqe(const MolecularProblem& problem, const QubitOperator& h, const AdaptConfig& config) {
  const Determinant ref = reference_determinant(problem);
  const int nq = problem.num_spin_orbitals();
  AdaptResult res{{}, DuccAnsatz(nq, ref), 0.0, 0.0, false, false, false};
  DuccAnsatz& ansatz = res.ansatz;

  std::vector<FermionExcitation> pool = enumerate_pool(problem, config.max_rank, config.pool);
  std::vector<CommutingExponential> generators;
  generators.reserve(pool.size());
  for (const auto& e : pool) generators.emplace_back(jordan_wigner_excitation(e, nq));
  std::vector<bool> used(pool.size(), false);

  std::uint64_t n_grad = 0;
  res.energy = vqe_energy(ansatz, h);
  StateVector hpsi, kpsi;
  for (int macro = 1; macro <= config.max_macro; ++macro) {
    if (config.max_parameters && ansatz.size() >= config.max_parameters) {
      res.budget_reached = true;
      break;
    }
    const StateVector psi = prepare_state(ansatz);
    apply_operator(h, psi, hpsi);
    double norm2 = 0.0, best = -1.0;
    std::size_t pick = pool.size();
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (used[k]) continue;
      generators[k].apply_generator(psi, kpsi);
      const double g = 2.0 * overlap(hpsi, kpsi).real();
      norm2 += g * g;
      if (std::abs(g) > best) best = std::abs(g), pick = k;
    }
    n_grad += pool.size();
    res.pool_gradient_norm = std::sqrt(norm2);
    if (res.pool_gradient_norm <= config.epsilon) {
      res.converged = true;
      break;
    }
    if (pick == pool.size() || best < 1e-12) {
      res.stagnated = true;
      break;
    }
    used[pick] = true;
    ansatz.add_operator(pool[pick], 0.0);
    const VqeResult v = run_vqe(h, ansatz, config.micro);
    n_grad += static_cast<std::uint64_t>(v.gradient_evaluations) * ansatz.size();
    res.energy = v.energy;
    res.trace.push_back({macro, pool[pick], best, res.pool_gradient_norm, ansatz.size(), v.energy,
                         v.gradient_evaluations, n_grad, estimate_cnots(ansatz)});
  }
  return res;
}

MeasurementCost measurement_cost_estimates(const QubitOperator& h, std::size_t n_par, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("measurement_cost_estimates: epsilon must be positive");
  const double l1 = h.one_norm();
  const double base = static_cast<double>(n_par) * l1 * l1 / (epsilon * epsilon);
  MeasurementCost c{4.0 * base, 3.0 * base, 0.0};
  c.ratio = c.m_grad > 0.0 ? c.m_res / c.m_grad : 0.75;
  return c;
}

}  // namespace pqe
