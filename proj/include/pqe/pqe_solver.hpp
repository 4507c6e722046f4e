// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pqe/ansatz.hpp"
#include "pqe/molecular_problem.hpp"

namespace pqe {

struct ResidualVector {
  std::vector<double> values;  // aligned with the ansatz operator order
  double norm() const;
  double one_norm() const;
};

enum class ResidualMode {
  kProjective,   // all elements from one U^dagger H U |Phi0> pipeline
  kExpectation,  // three energy expectations per element (measurement emulation)
};

enum class DiisError {
  kResidual,  // e = r
  kStep,      // e = r / Delta, the amplitude change
};

struct PqeConfig {
  double omega_r = 1e-5;
  int max_micro = 100;
  bool use_diis = true;
  int diis_depth = 8;
  int diis_start = 2;  // history length at which extrapolation starts
  DiisError diis_error = DiisError::kResidual;
  double noise_sigma = 0.0;
  std::uint64_t rng_seed = 0;
  ResidualMode mode = ResidualMode::kProjective;
};

struct PqeIteration {
  int iteration = 0;
  double energy = 0.0;
  double delta_e = 0.0;
  int residual_evaluations = 0;
  double residual_norm = 0.0;
};

struct PqeResult {
  std::vector<PqeIteration> trace;
  bool converged = false;
  double energy = 0.0;
  int residual_evaluations = 0;
  double residual_norm = 0.0;
  std::vector<double> amplitudes;
};

/// U^dagger H U |Phi0>: the projections of this vector onto kappa_mu|Phi0>
/// are the residuals, its reference component is the energy.
StateVector transformed_reference(const DuccAnsatz& ansatz, const QubitOperator& h);

/// r_mu = <Phi0| kappa_mu^dagger U^dagger H U |Phi0>, i.e. <Phi_mu|...> with
/// Phi_mu = kappa_mu Phi0 carrying the fermionic sign.
ResidualVector residual_projective(const DuccAnsatz& ansatz, const QubitOperator& h);

/// The same element from energy expectations only:
/// r_mu = <Omega_mu|H_bar|Omega_mu> - E_mu/2 - E_0/2 with Omega_mu = exp(pi/4 kappa_mu) Phi0.
double residual_via_expectation(const DuccAnsatz& ansatz, const QubitOperator& h, std::size_t mu);

ResidualVector residual_all_via_expectation(const DuccAnsatz& ansatz, const QubitOperator& h);

/// Delta_mu for every ansatz operator.
std::vector<double> mp_denominators(const std::vector<double>& eps, const DuccAnsatz& ansatz);

/// t + r / Delta elementwise. Throws NumericalError naming the excitation
/// index when |Delta_mu| <= 1e-8.
std::vector<double> quasi_newton_step(std::span<const double> residual,
                                      std::span<const double> denominators,
                                      std::span<const double> amplitudes);

/// Adds N(0, sigma^2) draws elementwise.
std::vector<double> inject_noise(std::vector<double> v, double sigma, std::mt19937_64& rng);
std::vector<double> inject_noise(std::vector<double> v, double sigma, std::uint64_t seed);

/// Solves the residual equations of a fixed ansatz, starting from its current
/// amplitudes and leaving the final amplitudes in it. `h` must be the JW
/// image of `problem`.
PqeResult run_pqe(const MolecularProblem& problem, const QubitOperator& h, DuccAnsatz& ansatz,
                  const PqeConfig& config);

struct GershgorinResult {
  double rho = 0.0;       // sum over all non-reference determinants of |<Phi_i|H_bar|Phi0>|
  double energy = 0.0;    // <Phi0|H_bar|Phi0>
  double distance = 0.0;  // min_k |energy - E_k|
  bool bound_holds = false;
};

/// Gershgorin disc of row Phi0 of H_bar against a known spectrum.
GershgorinResult gershgorin_radius(const DuccAnsatz& ansatz, const QubitOperator& h,
                                   std::span<const double> spectrum);
/// Convenience form computing the full sector spectrum densely.
GershgorinResult gershgorin_radius(const DuccAnsatz& ansatz, const QubitOperator& h,
                                   const MolecularProblem& problem);

}  // namespace pqe
