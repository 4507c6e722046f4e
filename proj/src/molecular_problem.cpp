// SPDX-License-Identifier: Apache-2.0
#include "pqe/molecular_problem.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pqe {

MolecularProblem::MolecularProblem(int num_spatial, int num_electrons, int ms2, double core_energy)
    : n_(num_spatial), nelec_(num_electrons), ms2_(ms2), core_(core_energy) {
  if (num_spatial < 1 || 2 * num_spatial > kMaxMaskQubits) {
    throw std::invalid_argument("MolecularProblem: orbital count out of range");
  }
  if (num_electrons < 0 || num_electrons > 2 * num_spatial) {
    throw std::invalid_argument("MolecularProblem: electron count out of range");
  }
  if ((num_electrons + ms2) % 2 != 0 || std::abs(ms2) > num_electrons ||
      (num_electrons + ms2) / 2 > num_spatial || (num_electrons - ms2) / 2 > num_spatial) {
    throw std::invalid_argument("MolecularProblem: inconsistent NELEC/MS2");
  }
  h_ = Eigen::MatrixXd::Zero(n_, n_);
  eri_.assign(static_cast<std::size_t>(n_) * n_ * n_ * n_, 0.0);
}

void MolecularProblem::set_h(int p, int q, double v) {
  h_(p, q) = v;
  h_(q, p) = v;
}

void MolecularProblem::set_eri(int p, int q, int r, int s, double v) {
  for (auto [a, b, c, d] : {std::array{p, q, r, s}, std::array{q, p, r, s}, std::array{p, q, s, r},
                            std::array{q, p, s, r}, std::array{r, s, p, q}, std::array{s, r, p, q},
                            std::array{r, s, q, p}, std::array{s, r, q, p}}) {
    eri_[index(a, b, c, d)] = v;
  }
}

double MolecularProblem::h_spin(int p, int q) const {
  if ((p & 1) != (q & 1)) return 0.0;
  return h_(p >> 1, q >> 1);
}

double MolecularProblem::antisym(int p, int q, int r, int s) const {
  const int sp = p & 1, sq = q & 1, sr = r & 1, ss = s & 1;
  const int P = p >> 1, Q = q >> 1, R = r >> 1, S = s >> 1;
  double v = 0.0;
  if (sp == sr && sq == ss) v += eri(P, R, Q, S);
  if (sp == ss && sq == sr) v -= eri(P, S, Q, R);
  return v;
}

std::vector<double> fock_diagonal(const MolecularProblem& problem, Determinant occupied) {
  const int m = problem.num_spin_orbitals();
  std::vector<double> eps(m);
  for (int p = 0; p < m; ++p) {
    double e = problem.h_spin(p, p);
    for (int i = 0; i < m; ++i) {
      if (occupied.occupied(i)) e += problem.antisym(p, i, p, i);
    }
    eps[p] = e;
  }
  return eps;
}

namespace {

// Lowest `count` spin orbitals of one spin by energy, ties by index.
std::uint64_t fill_spin(const std::vector<double>& eps, int spin, int count) {
  std::vector<int> orbs;
  for (int q = spin; q < static_cast<int>(eps.size()); q += 2) orbs.push_back(q);
  std::stable_sort(orbs.begin(), orbs.end(), [&](int a, int b) { return eps[a] < eps[b]; });
  std::uint64_t bits = 0;
  for (int k = 0; k < count; ++k) bits |= std::uint64_t{1} << orbs[k];
  return bits;
}

void check_frontier(const std::vector<double>& eps, Determinant det, int spin) {
  double homo = -INFINITY, lumo = INFINITY;
  int ih = -1, il = -1;
  for (int q = spin; q < static_cast<int>(eps.size()); q += 2) {
    if (det.occupied(q)) {
      if (eps[q] > homo) homo = eps[q], ih = q;
    } else if (eps[q] < lumo) {
      lumo = eps[q], il = q;
    }
  }
  if (ih >= 0 && il >= 0 && std::abs(lumo - homo) < 1e-8) {
    throw std::invalid_argument("reference_determinant: degenerate frontier orbitals " +
                                std::to_string(ih) + " and " + std::to_string(il) + " (eps = " +
                                std::to_string(homo) + "), Aufbau filling is ambiguous");
  }
}

void combinations(const std::vector<int>& pool, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
      cur.push_back(pool[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

int alpha_count(const std::vector<int>& v) {
  return static_cast<int>(std::count_if(v.begin(), v.end(), [](int q) { return is_alpha(q); }));
}

bool symmetric(const MolecularProblem& problem, const FermionExcitation& e) {
  const auto& sym = problem.orbsym();
  int irrep = 0;
  for (int q : e.holes()) irrep ^= sym[spatial_index(q)];
  for (int q : e.particles()) irrep ^= sym[spatial_index(q)];
  return irrep == 0;
}

}  // namespace

Determinant reference_determinant(const MolecularProblem& problem) {
  Determinant det{fill_spin(std::vector<double>(problem.num_spin_orbitals(), 0.0), 0,
                            problem.num_alpha()) |
                  fill_spin(std::vector<double>(problem.num_spin_orbitals(), 0.0), 1,
                            problem.num_beta())};
  std::vector<double> eps;
  for (int iter = 0; iter < 32; ++iter) {
    eps = fock_diagonal(problem, det);
    Determinant next{fill_spin(eps, 0, problem.num_alpha()) | fill_spin(eps, 1, problem.num_beta())};
    if (next == det) break;
    det = next;
  }
  check_frontier(eps, det, 0);
  check_frontier(eps, det, 1);
  return det;
}

std::vector<double> orbital_energies(const MolecularProblem& problem) {
  return fock_diagonal(problem, reference_determinant(problem));
}

double mp_denominator(const std::vector<double>& eps, const FermionExcitation& exc) {
  double d = 0.0;
  for (int i : exc.holes()) d += eps.at(i);
  for (int a : exc.particles()) d -= eps.at(a);
  return d;
}

double determinant_energy(const MolecularProblem& problem, Determinant det) {
  double e = problem.core_energy();
  const int m = problem.num_spin_orbitals();
  for (int i = 0; i < m; ++i) {
    if (!det.occupied(i)) continue;
    e += problem.h_spin(i, i);
    for (int j = i + 1; j < m; ++j) {
      if (det.occupied(j)) e += problem.antisym(i, j, i, j);
    }
  }
  return e;
}

std::vector<FermionExcitation> enumerate_pool(const MolecularProblem& problem, int max_rank,
                                              PoolKind kind, PoolOptions options) {
  if (options.point_group &&
      static_cast<int>(problem.orbsym().size()) != problem.num_spatial()) {
    throw std::invalid_argument("enumerate_pool: point-group filter requested but ORBSYM is missing");
  }
  std::vector<FermionExcitation> pool;
  if (max_rank <= 0) return pool;
  const int m = problem.num_spin_orbitals();
  auto keep = [&](const FermionExcitation& e) {
    return e.conserves_sz() && (!options.point_group || symmetric(problem, e));
  };

  if (kind == PoolKind::kGeneralizedSD) {
    std::vector<int> all(m);
    std::iota(all.begin(), all.end(), 0);
    for (int rank = 1; rank <= std::min(max_rank, 2); ++rank) {
      std::vector<std::vector<int>> tuples;
      combinations(all, rank, tuples);
      for (std::size_t a = 0; a < tuples.size(); ++a) {
        for (std::size_t b = a + 1; b < tuples.size(); ++b) {
          if (alpha_count(tuples[a]) != alpha_count(tuples[b])) continue;
          FermionExcitation e(tuples[a], tuples[b]);
          if (keep(e)) pool.push_back(std::move(e));
        }
      }
    }
    return pool;
  }

  const Determinant ref = reference_determinant(problem);
  std::vector<int> occ, virt;
  for (int q = 0; q < m; ++q) (ref.occupied(q) ? occ : virt).push_back(q);
  int top = kind == PoolKind::kParticleHoleSD ? std::min(max_rank, 2) : max_rank;
  top = std::min({top, static_cast<int>(occ.size()), static_cast<int>(virt.size())});
  for (int rank = 1; rank <= top; ++rank) {
    std::vector<std::vector<int>> hs, ps;
    combinations(occ, rank, hs);
    combinations(virt, rank, ps);
    for (const auto& h : hs) {
      for (const auto& p : ps) {
        if (alpha_count(h) != alpha_count(p)) continue;
        FermionExcitation e(h, p);
        if (keep(e)) pool.push_back(std::move(e));
      }
    }
  }
  auto excited = [&](const FermionExcitation& e) {
    return ref.bits ^ e.hole_mask() ^ e.particle_mask();
  };
  std::sort(pool.begin(), pool.end(), [&](const auto& a, const auto& b) {
    return excited(a) < excited(b);
  });
  return pool;
}

std::vector<int> orbital_fragments(const MolecularProblem& problem, double tol) {
  const int n = problem.num_spatial();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      if (std::abs(problem.h(p, q)) > tol || std::abs(problem.eri(p, q, p, q)) > tol) {
        parent[find(q)] = find(p);
      }
    }
  }
  std::vector<int> label(n, -1), root_label(n, -1);
  int next = 0;
  for (int p = 0; p < n; ++p) {
    const int r = find(p);
    if (root_label[r] < 0) root_label[r] = next++;
    label[p] = root_label[r];
  }
  return label;
}

}  // namespace pqe
