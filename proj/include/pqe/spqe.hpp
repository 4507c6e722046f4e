// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pqe/ansatz.hpp"
#include "pqe/molecular_problem.hpp"
#include "pqe/pqe_solver.hpp"

namespace pqe {

enum class SelectionMode {
  kExact,       // probabilities read from |r~> amplitudes
  kSampled,     // `shots` measurements per macro-iteration
  kFixedShots,  // M_Omega shots, every measured operator is added
};

/// Where each macro-iteration's batch goes in the product. kRenormalize
/// puts the batch in front of the existing operators with the largest
/// residual outermost, so that operator renormalizes H first and the
/// smallest one acts on the reference first. kAppend puts the batch after the
/// existing operators, largest residual first.
enum class SpqeOrdering { kRenormalize, kAppend };

struct SpqeConfig {
  double omega = 1e-1;
  double dt = 0.05;
  int trotter_steps = 1;
  SelectionMode selection = SelectionMode::kExact;
  std::uint64_t shots = 100000;
  /// Highest excitation rank admitted into the ansatz; <= 0 means the
  /// electron count.
  int max_rank = 0;
  SpqeOrdering ordering = SpqeOrdering::kRenormalize;
  PqeConfig micro{};
  int max_macro = 100;
  std::uint64_t rng_seed = 0;
};

/// Estimated squared residuals |r~_mu|^2 keyed by excited determinant, with
/// the total weight they were normalized by (shot count, or 1 when exact).
struct SelectionTally {
  std::map<std::uint64_t, double> weights;
  double total = 1.0;
};

/// |r~> = U^dagger exp(+i dt H) U |Phi0>, with the propagator Trotterized.
StateVector build_residual_state(const DuccAnsatz& ansatz, const QubitOperator& h, double dt,
                                 int steps);

/// Operators ordered for appending: the tally is sorted ascending by
/// estimated |r~_mu|^2 (ties by determinant integer), entries are discarded
/// while their cumulative sum divided by dt^2 stays <= omega^2, and the
/// survivors are returned in descending order. An empty result means
/// convergence. Tally entries must already exclude the reference and
/// operators present in the ansatz.
std::vector<std::uint64_t> select_operators(const SelectionTally& tally, double omega, double dt);

/// M_Omega = ceil(1 / (dt^2 omega^2)). The quotient is rounded to the
/// nearest integer first when it lies within 1e-9 relative of one, so
/// representation error in dt and omega does not add a shot.
std::uint64_t fixed_shot_count(double omega, double dt);

struct SpqeMacroIteration {
  int macro_iteration = 0;
  std::size_t num_added = 0;
  std::size_t num_parameters = 0;
  std::size_t num_high_rank = 0;
  double energy = 0.0;
  double residual_norm = 0.0;
  int micro_iterations = 0;
  bool micro_converged = false;
  std::uint64_t residual_vector_evaluations = 0;  // cumulative
  std::uint64_t residual_element_evaluations = 0; // cumulative, sum of N_par per vector
  std::uint64_t cnots = 0;
};

struct SpqeResult {
  std::vector<SpqeMacroIteration> trace;
  DuccAnsatz ansatz;
  double energy = 0.0;
  bool converged = false;
  /// Fixed-shot mode: the final batch returned only the reference.
  bool all_shots_reference = false;
};

SpqeResult run_spqe(const MolecularProblem& problem, const QubitOperator& h, const SpqeConfig& config);

}  // namespace pqe
