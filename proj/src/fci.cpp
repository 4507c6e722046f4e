// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "pqe/error.hpp"
#include "pqe/molecular_problem.hpp"

namespace pqe {

std::vector<Determinant> sector_determinants(const MolecularProblem& problem) {
  const int n = problem.num_spatial();
  auto strings = [n](int count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      if (std::popcount(s) == count) out.push_back(s);
    }
    return out;
  };
  // Spread a spatial occupation string onto the even (alpha) or odd (beta) qubits.
  auto spread = [n](std::uint64_t s, int spin) {
    std::uint64_t bits = 0;
    for (int p = 0; p < n; ++p) {
      if ((s >> p) & 1u) bits |= std::uint64_t{1} << (2 * p + spin);
    }
    return bits;
  };
  std::vector<Determinant> dets;
  for (auto a : strings(problem.num_alpha())) {
    for (auto b : strings(problem.num_beta())) dets.push_back({spread(a, 0) | spread(b, 1)});
  }
  std::sort(dets.begin(), dets.end());
  return dets;
}

Eigen::SparseMatrix<double> determinant_hamiltonian(const MolecularProblem& problem,
                                                    const std::vector<Determinant>& basis) {
  const int m = problem.num_spin_orbitals();
  std::unordered_map<std::uint64_t, int> where;
  where.reserve(basis.size() * 2);
  for (std::size_t k = 0; k < basis.size(); ++k) where.emplace(basis[k].bits, static_cast<int>(k));

  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const Determinant det = basis[col];
    std::unordered_map<int, double> column;
    column[static_cast<int>(col)] += problem.core_energy();
    auto deposit = [&](const std::optional<PhasedDeterminant>& out, double v) {
      if (!out) return;
      auto it = where.find(out->det.bits);
      if (it == where.end()) return;  // leaves the sector; cannot happen for N/Sz conserving H
      column[it->second] += out->phase * v;
    };
    // sum_pq h_pq a+_p a_q
    for (int q = 0; q < m; ++q) {
      if (!det.occupied(q)) continue;
      auto after = apply_ladder({1, det}, q, false);
      for (int p = (q & 1); p < m; p += 2) {
        const double v = problem.h_spin(p, q);
        if (v == 0.0) continue;
        deposit(apply_ladder(*after, p, true), v);
      }
    }
    // sum_{p<q, r<s} <pq||rs> a+_p a+_q a_s a_r
    for (int r = 0; r < m; ++r) {
      if (!det.occupied(r)) continue;
      auto d1 = apply_ladder({1, det}, r, false);
      for (int s = r + 1; s < m; ++s) {
        if (!det.occupied(s)) continue;
        auto d2 = apply_ladder(*d1, s, false);
        for (int q = 0; q < m; ++q) {
          if (d2->det.occupied(q)) continue;
          auto d3 = apply_ladder(*d2, q, true);
          for (int p = 0; p < q; ++p) {
            if (d3->det.occupied(p)) continue;
            const double v = problem.antisym(p, q, r, s);
            if (v == 0.0) continue;
            deposit(apply_ladder(*d3, p, true), v);
          }
        }
      }
    }
    for (const auto& [row, v] : column) {
      if (v != 0.0) trip.emplace_back(row, static_cast<int>(col), v);
    }
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::SparseMatrix<double> H(dim, dim);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

namespace {

// Block Davidson with diagonal preconditioning for the lowest `roots` pairs.
void davidson(const Eigen::SparseMatrix<double>& H, int roots, double tol, FciResult& out) {
  const Eigen::Index dim = H.rows();
  const Eigen::VectorXd diag = H.diagonal();
  const int max_space = std::min<Eigen::Index>(dim, std::max(8 * roots, 40));
  std::vector<Eigen::Index> order(dim);
  for (Eigen::Index i = 0; i < dim; ++i) order[i] = i;
  std::partial_sort(order.begin(), order.begin() + roots, order.end(),
                    [&](auto a, auto b) { return diag[a] < diag[b]; });

  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(dim, roots);
  for (int k = 0; k < roots; ++k) V(order[k], k) = 1.0;
  Eigen::MatrixXd HV = H * V;

  for (int iter = 0; iter < 1000; ++iter) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(V.transpose() * HV);
    const Eigen::MatrixXd X = V * small.eigenvectors().leftCols(roots);
    const Eigen::MatrixXd HX = HV * small.eigenvectors().leftCols(roots);
    std::vector<Eigen::VectorXd> corrections;
    double worst = 0.0;
    for (int k = 0; k < roots; ++k) {
      const double e = small.eigenvalues()[k];
      Eigen::VectorXd res = HX.col(k) - e * X.col(k);
      worst = std::max(worst, res.norm());
      if (res.norm() < tol) continue;
      for (Eigen::Index i = 0; i < dim; ++i) {
        const double d = e - diag[i];
        res[i] /= std::abs(d) > 1e-8 ? d : 1e-8;
      }
      corrections.push_back(std::move(res));
    }
    if (worst < tol) {
      out.energies.assign(small.eigenvalues().data(), small.eigenvalues().data() + roots);
      out.ground = X.col(0);
      return;
    }
    if (V.cols() + static_cast<Eigen::Index>(corrections.size()) > max_space) {
      V = X;
      HV = HX;
    }
    for (auto& c : corrections) {
      for (int pass = 0; pass < 2; ++pass) c -= V * (V.transpose() * c);
      const double nrm = c.norm();
      if (nrm < 1e-10) continue;
      c /= nrm;
      V.conservativeResize(Eigen::NoChange, V.cols() + 1);
      V.col(V.cols() - 1) = c;
      HV.conservativeResize(Eigen::NoChange, HV.cols() + 1);
      HV.col(HV.cols() - 1) = H * c;
    }
  }
  throw NumericalError("fci_solve: Davidson iteration did not converge");
}

}  // namespace

FciResult fci_solve(const MolecularProblem& problem, int roots, FciOptions options) {
  FciResult out;
  out.determinants = sector_determinants(problem);
  const auto dim = out.determinants.size();
  if (dim == 0) throw std::invalid_argument("fci_solve: empty determinant space");
  const Eigen::SparseMatrix<double> H = determinant_hamiltonian(problem, out.determinants);
  const bool dense = dim <= options.dense_ceiling;
  if (roots <= 0) {
    if (!dense) throw std::invalid_argument("fci_solve: full spectrum requested above dense ceiling");
    roots = static_cast<int>(dim);
  }
  roots = std::min<int>(roots, static_cast<int>(dim));

  if (dense) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es{Eigen::MatrixXd(H)};
    if (es.info() != Eigen::Success) throw NumericalError("fci_solve: dense eigensolver failed");
    out.energies.assign(es.eigenvalues().data(), es.eigenvalues().data() + roots);
    out.ground = es.eigenvectors().col(0);
  } else if (options.iterative) {
    davidson(H, roots, options.residual_tol, out);
  } else {
    throw std::invalid_argument("fci_solve: determinant space of " + std::to_string(dim) +
                                " exceeds the dense ceiling " + std::to_string(options.dense_ceiling) +
                                " and iterative mode is off");
  }
  const double res = (H * out.ground - out.energies[0] * out.ground).norm();
  if (res > options.residual_tol) {
    throw NumericalError("fci_solve: ground-state residual " + std::to_string(res) + " above tolerance");
  }
  return out;
}

}  // namespace pqe
