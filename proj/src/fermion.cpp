// SPDX-License-Identifier: Apache-2.0
#include "pqe/fermion.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace pqe {

namespace {

constexpr std::uint64_t kAlphaMask = 0x5555555555555555ULL;

std::uint64_t mask_of(const std::vector<int>& idx) {
  std::uint64_t m = 0;
  for (int q : idx) m |= std::uint64_t{1} << q;
  return m;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace

int Determinant::num_electrons() const { return std::popcount(bits); }

int Determinant::ms2() const {
  return std::popcount(bits & kAlphaMask) - std::popcount(bits & ~kAlphaMask);
}

FermionExcitation::FermionExcitation(std::vector<int> holes, std::vector<int> particles)
    : holes_(std::move(holes)), particles_(std::move(particles)) {
  if (holes_.size() != particles_.size()) {
    throw std::invalid_argument("FermionExcitation: holes and particles differ in length");
  }
  auto check = [](const std::vector<int>& v, const char* what) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0 || v[i] >= kMaxMaskQubits) {
        throw std::invalid_argument(std::string("FermionExcitation: ") + what + " index out of range");
      }
      if (i > 0 && v[i] <= v[i - 1]) {
        throw std::invalid_argument(std::string("FermionExcitation: ") + what +
                                    " must be strictly ascending (repeated index?)");
      }
    }
  };
  check(holes_, "hole");
  check(particles_, "particle");
  if (!holes_.empty() && holes_ == particles_) {
    throw std::invalid_argument("FermionExcitation: holes equal particles (number operator)");
  }
}

bool FermionExcitation::is_particle_hole() const { return (hole_mask() & particle_mask()) == 0; }

bool FermionExcitation::conserves_sz() const {
  return std::popcount(hole_mask() & kAlphaMask) == std::popcount(particle_mask() & kAlphaMask);
}

std::uint64_t FermionExcitation::hole_mask() const { return mask_of(holes_); }
std::uint64_t FermionExcitation::particle_mask() const { return mask_of(particles_); }

std::string FermionExcitation::str() const { return join(holes_) + "->" + join(particles_); }

std::optional<PhasedDeterminant> apply_ladder(const PhasedDeterminant& in, int q, bool creation) {
  const std::uint64_t bit = std::uint64_t{1} << q;
  const bool occ = in.det.bits & bit;
  if (occ == creation) return std::nullopt;
  const int below = std::popcount(in.det.bits & (bit - 1));
  PhasedDeterminant out{(below & 1) ? -in.phase : in.phase, Determinant{in.det.bits ^ bit}};
  return out;
}

std::optional<PhasedDeterminant> apply_excitation(Determinant det, const FermionExcitation& exc) {
  std::optional<PhasedDeterminant> cur = PhasedDeterminant{1, det};
  for (int h : exc.holes()) {
    cur = apply_ladder(*cur, h, false);
    if (!cur) return std::nullopt;
  }
  const auto& p = exc.particles();
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    cur = apply_ladder(*cur, *it, true);
    if (!cur) return std::nullopt;
  }
  return cur;
}

std::optional<PhasedDeterminant> apply_deexcitation(Determinant det, const FermionExcitation& exc) {
  std::optional<PhasedDeterminant> cur = PhasedDeterminant{1, det};
  for (int a : exc.particles()) {
    cur = apply_ladder(*cur, a, false);
    if (!cur) return std::nullopt;
  }
  const auto& h = exc.holes();
  for (auto it = h.rbegin(); it != h.rend(); ++it) {
    cur = apply_ladder(*cur, *it, true);
    if (!cur) return std::nullopt;
  }
  return cur;
}

std::optional<FermionExcitation> excitation_between(Determinant from, Determinant to) {
  const std::uint64_t holes = from.bits & ~to.bits;
  const std::uint64_t parts = to.bits & ~from.bits;
  if (holes == 0 || std::popcount(holes) != std::popcount(parts)) return std::nullopt;
  std::vector<int> h, p;
  for (int q = 0; q < 64; ++q) {
    if ((holes >> q) & 1u) h.push_back(q);
    if ((parts >> q) & 1u) p.push_back(q);
  }
  return FermionExcitation(std::move(h), std::move(p));
}

QubitOperator jordan_wigner_ladder(LadderOp op, int num_qubits) {
  if (op.index < 0 || op.index >= num_qubits) {
    throw std::invalid_argument("jordan_wigner_ladder: index " + std::to_string(op.index) +
                                " outside register of " + std::to_string(num_qubits));
  }
  const std::uint64_t bit = std::uint64_t{1} << op.index;
  const std::uint64_t chain = bit - 1;
  QubitOperator out(num_qubits);
  // X_p and Y_p, each preceded by the parity string on lower qubits.
  out.add_term(0.5, PauliString(num_qubits, bit, chain));
  out.add_term(cplx(0.0, op.creation ? -0.5 : 0.5), PauliString(num_qubits, bit, chain | bit));
  return out;
}

QubitOperator jordan_wigner_product(std::span<const LadderOp> ops, int num_qubits) {
  QubitOperator acc = QubitOperator::identity(num_qubits);
  for (const auto& op : ops) acc = acc * jordan_wigner_ladder(op, num_qubits);
  return acc;
}

QubitOperator jordan_wigner_excitation(const FermionExcitation& exc, int num_qubits) {
  std::vector<LadderOp> ops;
  ops.reserve(2 * exc.holes().size());
  for (int a : exc.particles()) {
    if (a >= num_qubits) throw std::invalid_argument("jordan_wigner_excitation: index out of range");
    ops.push_back({a, true});
  }
  for (auto it = exc.holes().rbegin(); it != exc.holes().rend(); ++it) {
    if (*it >= num_qubits) throw std::invalid_argument("jordan_wigner_excitation: index out of range");
    ops.push_back({*it, false});
  }
  QubitOperator tau = jordan_wigner_product(ops, num_qubits);
  // Pauli strings are Hermitian, so tau - tau^dagger keeps 2i Im(c) per string.
  QubitOperator kappa(num_qubits);
  for (const auto& [c, p] : tau.terms()) kappa.add_term(cplx(0.0, 2.0 * c.imag()), p);
  kappa.simplify();
  return kappa;
}

}  // namespace pqe
