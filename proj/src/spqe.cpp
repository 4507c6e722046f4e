// SPDX-License-Identifier: Apache-2.0
#include "pqe/spqe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pqe/error.hpp"

namespace pqe {

StateVector build_residual_state(const DuccAnsatz& ansatz, const QubitOperator& h, double dt,
                                 int steps) {
  StateVector s = prepare_state(ansatz);
  apply_trotter_evolution(s, h, -dt, steps);  // exp(-i(-dt)H)
  apply_unitary_adjoint(ansatz, s);
  return s;
}

std::vector<std::uint64_t> select_operators(const SelectionTally& tally, double omega, double dt) {
  if (!(omega > 0.0) || !(dt > 0.0)) throw std::invalid_argument("select_operators: omega and dt must be positive");
  std::vector<std::pair<double, std::uint64_t>> order;
  order.reserve(tally.weights.size());
  for (const auto& [det, w] : tally.weights) order.emplace_back(w / tally.total, det);
  // Symmetry-equivalent determinants have equal residuals up to rounding;
  // compare on a relative 1e-10 grid so their order follows the tie rule.
  double vmax = 0.0;
  for (const auto& e : order) vmax = std::max(vmax, e.first);
  auto grid = [vmax](double v) { return vmax > 0.0 ? std::llround(v / vmax * 1e10) : 0LL; };
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    const auto ga = grid(a.first), gb = grid(b.first);
    if (ga != gb) return ga < gb;
    return a.second < b.second;
  });

  const double budget = omega * omega * dt * dt;
  double discarded = 0.0;
  std::size_t first_kept = 0;
  while (first_kept < order.size() && discarded + order[first_kept].first <= budget) {
    discarded += order[first_kept].first;
    ++first_kept;
  }
  std::vector<std::uint64_t> out;
  for (std::size_t k = order.size(); k-- > first_kept;) out.push_back(order[k].second);
  return out;
}

std::uint64_t fixed_shot_count(double omega, double dt) {
  if (!(omega > 0.0) || !(dt > 0.0)) throw std::invalid_argument("fixed_shot_count: omega and dt must be positive");
  const double m = 1.0 / (dt * dt * omega * omega);
  const double nearest = std::round(m);
  if (std::abs(m - nearest) <= 1e-9 * nearest) return static_cast<std::uint64_t>(nearest);
  return static_cast<std::uint64_t>(std::ceil(m));
}

namespace {

// Candidate determinants: right particle number and spin, not the
// reference, not already generated by an ansatz operator, rank in range.
bool admissible(Determinant det, const DuccAnsatz& ansatz, const std::vector<std::uint64_t>& present,
                int nelec, int ms2, int max_rank) {
  const auto ref = ansatz.reference();
  if (det == ref || det.num_electrons() != nelec || det.ms2() != ms2) return false;
  if (std::binary_search(present.begin(), present.end(), det.bits)) return false;
  const auto exc = excitation_between(ref, det);
  return exc && exc->rank() <= max_rank;
}

}  // namespace

SpqeResult run_spqe(const MolecularProblem& problem, const QubitOperator& h, const SpqeConfig& config) {
  if (!(config.omega > 0.0) || !(config.dt > 0.0)) throw std::invalid_argument("run_spqe: omega and dt must be positive");
  const Determinant ref = reference_determinant(problem);
  const int max_rank = config.max_rank > 0 ? config.max_rank : problem.num_electrons();
  SpqeResult res{{}, DuccAnsatz(problem.num_spin_orbitals(), ref), 0.0, false, false};
  DuccAnsatz& ansatz = res.ansatz;
  std::mt19937_64 rng(config.rng_seed);
  std::uint64_t n_vec = 0, n_elem = 0;
  res.energy = expectation(prepare_state(ansatz), h);

  for (int macro = 1; macro <= config.max_macro; ++macro) {
    std::vector<std::uint64_t> present;
    for (std::size_t k = 0; k < ansatz.size(); ++k) {
      present.push_back(ref.bits ^ ansatz.op(k).hole_mask() ^ ansatz.op(k).particle_mask());
    }
    std::sort(present.begin(), present.end());

    const StateVector rt = build_residual_state(ansatz, h, config.dt, config.trotter_steps);
    SelectionTally tally;
    std::vector<std::uint64_t> chosen;
    bool reference_only = false;
    auto ok = [&](std::uint64_t bits) {
      return admissible(Determinant{bits}, ansatz, present, problem.num_electrons(), problem.ms2(), max_rank);
    };

    if (config.selection == SelectionMode::kExact) {
      for (std::size_t i = 0; i < rt.dim(); ++i) {
        if (ok(i)) tally.weights[i] = std::norm(rt[i]);
      }
      chosen = select_operators(tally, config.omega, config.dt);
    } else {
      const std::uint64_t shots = config.selection == SelectionMode::kFixedShots
                                      ? fixed_shot_count(config.omega, config.dt)
                                      : config.shots;
      const auto counts = sample_basis(rt, shots, rng());
      reference_only = counts.size() == 1 && counts.begin()->first == ref.bits;
      tally.total = static_cast<double>(shots);
      for (const auto& [bits, n] : counts) {
        if (ok(bits)) tally.weights[bits] = static_cast<double>(n);
      }
      if (config.selection == SelectionMode::kSampled) {
        chosen = select_operators(tally, config.omega, config.dt);
      } else {
        // Every measured operator, most frequent first.
        std::vector<std::pair<double, std::uint64_t>> order;
        for (const auto& [bits, n] : tally.weights) order.emplace_back(-n, bits);
        std::sort(order.begin(), order.end());
        for (const auto& [n, bits] : order) chosen.push_back(bits);
      }
    }

    if (chosen.empty()) {
      res.converged = true;
      res.all_shots_reference = reference_only;
      break;
    }
    for (auto bits : chosen) {
      const auto exc = *excitation_between(ref, Determinant{bits});
      if (config.ordering == SpqeOrdering::kAppend) ansatz.add_operator(exc, 0.0);
      else ansatz.prepend_operator(exc, 0.0);
    }

    const PqeResult micro = run_pqe(problem, h, ansatz, config.micro);
    n_vec += static_cast<std::uint64_t>(micro.residual_evaluations);
    n_elem += static_cast<std::uint64_t>(micro.residual_evaluations) * ansatz.size();
    res.energy = micro.energy;
    res.trace.push_back({macro, chosen.size(), ansatz.size(), count_high_rank(ansatz), micro.energy,
                         micro.residual_norm, static_cast<int>(micro.trace.size()), micro.converged, n_vec,
                         n_elem, estimate_cnots(ansatz)});
  }
  return res;
}

}  // namespace pqe
