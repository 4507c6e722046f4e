// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pqe/pauli.hpp"

namespace pqe {

/// Occupation bitstring over spin orbitals. Spin orbital q is qubit q; even
/// qubits carry alpha spin, odd qubits beta spin (q = 2 * spatial + spin).
/// Bit q set means spin orbital q is occupied. As a state-vector index the
/// bitstring is read with qubit 0 as the least significant bit.
struct Determinant {
  std::uint64_t bits = 0;

  int num_electrons() const;
  bool occupied(int q) const { return (bits >> q) & 1u; }
  /// Twice the spin projection: (#alpha - #beta).
  int ms2() const;

  friend auto operator<=>(const Determinant&, const Determinant&) = default;
};

inline constexpr bool is_alpha(int spin_orbital) { return (spin_orbital & 1) == 0; }
inline constexpr int spatial_index(int spin_orbital) { return spin_orbital >> 1; }

/// Multi-index ((i, j, ...), (a, b, ...)) of the operator
/// tau = a+_a a+_b ... a_j a_i and of its anti-Hermitian combination
/// kappa = tau - tau^dagger. Holes and particles are each strictly ascending
/// and of equal length.
class FermionExcitation {
 public:
  FermionExcitation() = default;
  FermionExcitation(std::vector<int> holes, std::vector<int> particles);

  const std::vector<int>& holes() const { return holes_; }
  const std::vector<int>& particles() const { return particles_; }
  int rank() const { return static_cast<int>(holes_.size()); }

  /// True when no index appears both as a hole and as a particle.
  bool is_particle_hole() const;
  /// Number of alpha holes equals number of alpha particles.
  bool conserves_sz() const;

  std::uint64_t hole_mask() const;
  std::uint64_t particle_mask() const;

  std::string str() const;

  friend auto operator<=>(const FermionExcitation&, const FermionExcitation&) = default;

 private:
  std::vector<int> holes_;
  std::vector<int> particles_;
};

struct PhasedDeterminant {
  int phase = 1;
  Determinant det;
};

/// a_q (creation == false) or a+_q (creation == true) acting on a basis
/// determinant. Returns nullopt when the result vanishes. The sign is
/// (-1)^{# occupied spin orbitals below q}, the Jordan-Wigner convention.
std::optional<PhasedDeterminant> apply_ladder(const PhasedDeterminant& in, int q, bool creation);

/// tau_mu |det>, with the operator product applied right to left.
std::optional<PhasedDeterminant> apply_excitation(Determinant det, const FermionExcitation& exc);

/// tau_mu^dagger |det>.
std::optional<PhasedDeterminant> apply_deexcitation(Determinant det, const FermionExcitation& exc);

/// Particle-hole excitation that maps `from` onto `to`, if they have the same
/// particle count. Holes are from & ~to, particles are to & ~from.
std::optional<FermionExcitation> excitation_between(Determinant from, Determinant to);

// ---- Jordan-Wigner -------------------------------------------------------

struct LadderOp {
  int index;
  bool creation;
};

/// a_p -> Z_0 ... Z_{p-1} (X_p + i Y_p) / 2, a+_p -> Z_0 ... Z_{p-1} (X_p - i Y_p) / 2.
QubitOperator jordan_wigner_ladder(LadderOp op, int num_qubits);

/// Qubit image of the ordered product ops[0] ops[1] ... ops[k-1].
QubitOperator jordan_wigner_product(std::span<const LadderOp> ops, int num_qubits);

/// Qubit image of kappa = tau - tau^dagger. For a rank-n particle-hole
/// excitation this has 2^{2n-1} mutually commuting strings with purely
/// imaginary coefficients.
QubitOperator jordan_wigner_excitation(const FermionExcitation& exc, int num_qubits);

}  // namespace pqe
