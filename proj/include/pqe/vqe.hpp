// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "pqe/ansatz.hpp"
#include "pqe/bfgs.hpp"
#include "pqe/molecular_problem.hpp"

namespace pqe {

struct VqeConfig {
  double omega_g = 1e-5;
  int max_bfgs_iters = 500;
  double noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;
};

/// <Phi0|U^dagger H U|Phi0>
double vqe_energy(const DuccAnsatz& ansatz, const QubitOperator& h);

/// dE/dt_k = 2 Re <H U Phi0| dU/dt_k Phi0>, by one reverse sweep that peels
/// the exponentials off |psi> = U|Phi0> and |lambda> = H U|Phi0>.
std::vector<double> vqe_gradient(const DuccAnsatz& ansatz, const QubitOperator& h);
/// As above, also returning the energy <psi|lambda>.
std::vector<double> vqe_gradient(const DuccAnsatz& ansatz, const QubitOperator& h, double& energy);

struct VqeResult {
  std::vector<BfgsIteration> trace;  // value = energy, evaluations = gradient vectors
  bool converged = false;
  bool line_search_failed = false;
  double energy = 0.0;
  double gradient_norm = 0.0;
  int gradient_evaluations = 0;
  std::vector<double> amplitudes;
};

/// BFGS on the ansatz amplitudes from their current values; the optimum is
/// left in the ansatz. With noise_sigma > 0 every gradient element carries
/// an independent N(0, sigma^2) error.
VqeResult run_vqe(const QubitOperator& h, DuccAnsatz& ansatz, const VqeConfig& config);

/// g_mu = <Psi|[H, kappa_mu]|Psi> = 2 Re <H Psi|kappa_mu Psi> for every pool operator.
std::vector<double> adapt_pool_gradients(const StateVector& state, const std::vector<FermionExcitation>& pool,
                                         const QubitOperator& h);

struct AdaptConfig {
  PoolKind pool = PoolKind::kParticleHoleSD;
  int max_rank = 2;
  double epsilon = 1e-3;          // stop when ||g_pool|| <= epsilon
  std::size_t max_parameters = 0; // stop at this ansatz size (0: no budget)
  int max_macro = 200;
  VqeConfig micro{};
};

struct AdaptMacroIteration {
  int macro_iteration = 0;
  FermionExcitation added;
  double selected_gradient = 0.0;
  double pool_gradient_norm = 0.0;
  std::size_t num_parameters = 0;
  double energy = 0.0;
  int bfgs_gradient_vectors = 0;
  std::uint64_t gradient_element_evaluations = 0;  // cumulative (pool + amplitude gradients)
  std::uint64_t cnots = 0;
};

struct AdaptResult {
  std::vector<AdaptMacroIteration> trace;
  DuccAnsatz ansatz;
  double energy = 0.0;
  double pool_gradient_norm = 0.0;
  bool converged = false;   // pool gradient norm fell below epsilon
  bool budget_reached = false;
  bool stagnated = false;   // largest pool gradient below 1e-12
};

/// ADAPT-VQE: append the pool operator with the largest |g_mu| (first in
/// pool order on ties), re-optimize all amplitudes, repeat.
AdaptResult run_adapt_vqe(const MolecularProblem& problem, const QubitOperator& h, const AdaptConfig& config);

struct MeasurementCost {
  double m_grad = 0.0;  // 4 N_par ||h||_1^2 / eps^2
  double m_res = 0.0;   // 3 N_par ||h||_1^2 / eps^2
  double ratio = 0.0;   // m_res / m_grad
};

MeasurementCost measurement_cost_estimates(const QubitOperator& h, std::size_t n_par, double epsilon);

}  // namespace pqe
