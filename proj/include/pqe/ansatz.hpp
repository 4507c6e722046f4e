// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pqe/fermion.hpp"
#include "pqe/state_vector.hpp"

namespace pqe {

/// Disentangled UCC trial state U(t)|Phi0> = ... exp(t_2 k_2) exp(t_1 k_1) |Phi0>.
/// List order is application order: operator 0 acts on the reference first.
class DuccAnsatz {
 public:
  DuccAnsatz() = default;
  DuccAnsatz(int num_qubits, Determinant reference);

  int num_qubits() const { return num_qubits_; }
  Determinant reference() const { return reference_; }
  std::size_t size() const { return ops_.size(); }
  bool empty() const { return ops_.empty(); }

  /// Appends an operator (cached JW image). Throws on a repeated operator.
  void add_operator(const FermionExcitation& exc, double amplitude = 0.0);
  /// Inserts an operator at position 0, so it acts on the reference first.
  void prepend_operator(const FermionExcitation& exc, double amplitude = 0.0);
  bool contains(const FermionExcitation& exc) const;

  const FermionExcitation& op(std::size_t k) const { return ops_[k].exc; }
  const QubitOperator& kappa(std::size_t k) const { return ops_[k].kappa; }
  const CommutingExponential& exponential(std::size_t k) const { return ops_[k].exp; }
  /// kappa_k |Phi0> = phase |Phi_k> when the operator excites the reference.
  const std::optional<PhasedDeterminant>& target(std::size_t k) const { return ops_[k].target; }

  std::vector<FermionExcitation> operators() const;
  const std::vector<double>& amplitudes() const { return t_; }
  std::vector<double>& amplitudes() { return t_; }
  void set_amplitudes(std::span<const double> t);

 private:
  struct Entry {
    FermionExcitation exc;
    QubitOperator kappa;
    CommutingExponential exp;
    std::optional<PhasedDeterminant> target;
  };
  int num_qubits_ = 0;
  Determinant reference_;
  std::vector<Entry> ops_;
  std::vector<double> t_;

  Entry make_entry(const FermionExcitation& exc) const;
};

/// state <- U(t) state
void apply_unitary(const DuccAnsatz& ansatz, StateVector& state);
/// state <- U(t)^dagger state
void apply_unitary_adjoint(const DuccAnsatz& ansatz, StateVector& state);
/// U(t)|Phi0>
StateVector prepare_state(const DuccAnsatz& ansatz);

/// max |S - I| over S_ij = <Phi0| k_i^dagger k_j |Phi0>, evaluated on
/// determinants. Zero for distinct particle-hole excitations of the reference.
double metric_deviation(std::span<const FermionExcitation> ops, Determinant reference);
double check_metric(const DuccAnsatz& ansatz);

/// Unoptimized CNOT count: every Pauli string of weight w in every kappa costs
/// 2 (w - 1) in a CNOT staircase.
std::uint64_t estimate_cnots(const DuccAnsatz& ansatz);

/// Number of operators of rank >= 3.
std::size_t count_high_rank(const DuccAnsatz& ansatz);

/// Sorts by the integer of the excited determinant reference ^ holes ^ particles.
std::vector<FermionExcitation> ordering_for_fixed_ansatz(std::vector<FermionExcitation> pool,
                                                         Determinant reference);

/// Text form: comment header naming the qubit convention, "qubits N",
/// "reference BITS", then one "holes;particles;amplitude" line per operator.
void save_ansatz(std::ostream& out, const DuccAnsatz& ansatz);
DuccAnsatz load_ansatz(std::istream& in);

}  // namespace pqe
