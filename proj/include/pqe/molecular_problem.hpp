// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <istream>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pqe/fermion.hpp"
#include "pqe/pauli.hpp"

namespace pqe {

/// Electronic Hamiltonian in a spatial orbital basis, as read from an FCIDUMP.
/// Spin-orbital quantities are derived with the interleaved convention of
/// Determinant (spin orbital q = 2 * spatial + spin).
class MolecularProblem {
 public:
  MolecularProblem() = default;
  MolecularProblem(int num_spatial, int num_electrons, int ms2, double core_energy);

  int num_spatial() const { return n_; }
  int num_spin_orbitals() const { return 2 * n_; }
  int num_electrons() const { return nelec_; }
  int ms2() const { return ms2_; }
  int num_alpha() const { return (nelec_ + ms2_) / 2; }
  int num_beta() const { return (nelec_ - ms2_) / 2; }
  double core_energy() const { return core_; }

  /// Spatial one-electron integral h_pq.
  double h(int p, int q) const { return h_(p, q); }
  /// Spatial two-electron integral (pq|rs), chemists' notation.
  double eri(int p, int q, int r, int s) const { return eri_[index(p, q, r, s)]; }

  /// Sets h_pq and h_qp.
  void set_h(int p, int q, double v);
  /// Sets (pq|rs) and its seven symmetry images.
  void set_eri(int p, int q, int r, int s, double v);
  void set_core_energy(double e) { core_ = e; }

  /// Point-group irrep label per spatial orbital (0-based, XOR product
  /// table). Empty when the source did not provide one.
  const std::vector<int>& orbsym() const { return orbsym_; }
  void set_orbsym(std::vector<int> s) { orbsym_ = std::move(s); }

  /// Spin-orbital one-electron integral (zero across spins).
  double h_spin(int p, int q) const;
  /// <pq||rs> = <pq|rs> - <pq|sr> over spin orbitals, with
  /// <pq|rs> = (pr|qs) when spin(p) == spin(r) and spin(q) == spin(s).
  double antisym(int p, int q, int r, int s) const;

 private:
  std::size_t index(int p, int q, int r, int s) const {
    return ((static_cast<std::size_t>(p) * n_ + q) * n_ + r) * n_ + s;
  }

  int n_ = 0;
  int nelec_ = 0;
  int ms2_ = 0;
  double core_ = 0.0;
  Eigen::MatrixXd h_;
  std::vector<double> eri_;
  std::vector<int> orbsym_;
};

/// Parses FCIDUMP text. The namelist header must give NORB and NELEC (MS2
/// defaults to 0, ORBSYM is optional); body lines are "value i j k l" with
/// 1-based indices: all four nonzero for (ij|kl), "i j 0 0" for h_ij and
/// "0 0 0 0" for the core energy. Fortran 'D' exponents are accepted. A
/// repeated entry with a different value is an error.
MolecularProblem parse_fcidump(std::istream& in);
MolecularProblem parse_fcidump_text(std::string_view text);
MolecularProblem load_fcidump(const std::filesystem::path& path);

/// Diagonal Fock elements eps_p = h_pp + sum_{i in occ} <pi||pi>, per spin
/// orbital, for the occupation of `occupied`.
std::vector<double> fock_diagonal(const MolecularProblem& problem, Determinant occupied);

/// Aufbau reference. Orbital energies and the occupation are iterated to
/// self-consistency, starting from the lowest-index orbitals. Throws
/// std::invalid_argument when the highest occupied and lowest unoccupied
/// spin orbitals of either spin are degenerate (within 1e-8).
Determinant reference_determinant(const MolecularProblem& problem);

/// Orbital energies of the reference occupation.
std::vector<double> orbital_energies(const MolecularProblem& problem);

/// Delta_mu = sum eps_holes - sum eps_particles.
double mp_denominator(const std::vector<double>& eps, const FermionExcitation& exc);

/// <Phi|H|Phi> for a single determinant by direct contraction.
double determinant_energy(const MolecularProblem& problem, Determinant det);

enum class PoolKind {
  kParticleHoleSD,    // singles and doubles out of the reference
  kParticleHoleFull,  // all ranks 1..max_rank out of the reference
  kGeneralizedSD,     // generalized singles and doubles, one of each (tau, tau^dagger) pair
};

struct PoolOptions {
  /// Keep only totally symmetric excitations (XOR of ORBSYM labels of all
  /// indices equals zero). Requires ORBSYM.
  bool point_group = false;
};

/// Sz-conserving excitation pool. Particle-hole pools are ordered by the
/// integer of the excited determinant; the generalized pool by (rank, holes,
/// particles).
std::vector<FermionExcitation> enumerate_pool(const MolecularProblem& problem, int max_rank,
                                              PoolKind kind, PoolOptions options = {});

/// Label per spatial orbital grouping orbitals that are coupled through h_pq
/// or exchange-type integrals (pq|pq) above `tol`; far-separated fragments
/// come out as separate labels, numbered from 0 by lowest orbital.
std::vector<int> orbital_fragments(const MolecularProblem& problem, double tol = 1e-8);

/// Qubit Hamiltonian core + sum h_pq a+_p a_q + sum_{p<q, r<s} <pq||rs> a+_p a+_q a_s a_r,
/// simplified, with real coefficients.
QubitOperator jordan_wigner_hamiltonian(const MolecularProblem& problem);

// ---- FCI -----------------------------------------------------------------

struct FciOptions {
  /// Largest determinant space diagonalized densely.
  std::size_t dense_ceiling = 5000;
  /// Allow Davidson iteration above the ceiling.
  bool iterative = false;
  double residual_tol = 1e-9;
};

struct FciResult {
  std::vector<double> energies;            // ascending, total (core included)
  std::vector<Determinant> determinants;   // basis, ascending by bits
  Eigen::VectorXd ground;                  // coefficients over `determinants`
};

/// Determinants with the problem's electron count and MS2, ascending.
std::vector<Determinant> sector_determinants(const MolecularProblem& problem);

/// Sparse Hamiltonian in the determinant basis (core energy on the diagonal).
Eigen::SparseMatrix<double> determinant_hamiltonian(const MolecularProblem& problem,
                                                    const std::vector<Determinant>& basis);

/// Lowest `roots` eigenvalues in the problem's N/MS2 sector. roots <= 0 asks
/// for the full spectrum (dense only).
FciResult fci_solve(const MolecularProblem& problem, int roots = 1, FciOptions options = {});

}  // namespace pqe
