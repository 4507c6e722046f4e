// SPDX-License-Identifier: Apache-2.0
#include "pqe/ansatz.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pqe {

DuccAnsatz::DuccAnsatz(int num_qubits, Determinant reference)
    : num_qubits_(num_qubits), reference_(reference) {
  if (num_qubits < 1 || num_qubits > StateVector::kMaxQubits) {
    throw std::invalid_argument("DuccAnsatz: qubit count out of range");
  }
  if (reference.bits >> num_qubits) throw std::invalid_argument("DuccAnsatz: reference outside register");
}

DuccAnsatz::Entry DuccAnsatz::make_entry(const FermionExcitation& exc) const {
  if (contains(exc)) throw std::invalid_argument("DuccAnsatz: repeated operator " + exc.str());
  QubitOperator kappa = jordan_wigner_excitation(exc, num_qubits_);
  CommutingExponential exp(kappa);
  std::optional<PhasedDeterminant> target;
  if (exc.is_particle_hole()) target = apply_excitation(reference_, exc);
  return {exc, std::move(kappa), std::move(exp), target};
}

void DuccAnsatz::add_operator(const FermionExcitation& exc, double amplitude) {
  ops_.push_back(make_entry(exc));
  t_.push_back(amplitude);
}

void DuccAnsatz::prepend_operator(const FermionExcitation& exc, double amplitude) {
  ops_.insert(ops_.begin(), make_entry(exc));
  t_.insert(t_.begin(), amplitude);
}

bool DuccAnsatz::contains(const FermionExcitation& exc) const {
  return std::any_of(ops_.begin(), ops_.end(), [&](const Entry& e) { return e.exc == exc; });
}

std::vector<FermionExcitation> DuccAnsatz::operators() const {
  std::vector<FermionExcitation> out;
  out.reserve(ops_.size());
  for (const auto& e : ops_) out.push_back(e.exc);
  return out;
}

void DuccAnsatz::set_amplitudes(std::span<const double> t) {
  if (t.size() != t_.size()) throw std::invalid_argument("DuccAnsatz: amplitude count mismatch");
  t_.assign(t.begin(), t.end());
}

void apply_unitary(const DuccAnsatz& ansatz, StateVector& state) {
  for (std::size_t k = 0; k < ansatz.size(); ++k) ansatz.exponential(k).apply(state, ansatz.amplitudes()[k]);
}

void apply_unitary_adjoint(const DuccAnsatz& ansatz, StateVector& state) {
  for (std::size_t k = ansatz.size(); k-- > 0;) ansatz.exponential(k).apply(state, -ansatz.amplitudes()[k]);
}

StateVector prepare_state(const DuccAnsatz& ansatz) {
  StateVector s = StateVector::basis_state(ansatz.num_qubits(), ansatz.reference().bits);
  apply_unitary(ansatz, s);
  return s;
}

double metric_deviation(std::span<const FermionExcitation> ops, Determinant reference) {
  // kappa|Phi0> = tau|Phi0> - tau^dagger|Phi0> as a sparse determinant expansion.
  std::vector<std::map<std::uint64_t, double>> images;
  images.reserve(ops.size());
  for (const auto& e : ops) {
    std::map<std::uint64_t, double> v;
    if (auto up = apply_excitation(reference, e)) v[up->det.bits] += up->phase;
    if (auto dn = apply_deexcitation(reference, e)) v[dn->det.bits] -= dn->phase;
    images.push_back(std::move(v));
  }
  double dev = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t j = i; j < ops.size(); ++j) {
      double s = 0.0;
      for (const auto& [bits, c] : images[i]) {
        if (auto it = images[j].find(bits); it != images[j].end()) s += c * it->second;
      }
      dev = std::max(dev, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  }
  return dev;
}

double check_metric(const DuccAnsatz& ansatz) {
  const auto ops = ansatz.operators();
  return metric_deviation(ops, ansatz.reference());
}

std::uint64_t estimate_cnots(const DuccAnsatz& ansatz) {
  std::uint64_t n = 0;
  for (std::size_t k = 0; k < ansatz.size(); ++k) {
    for (const auto& [c, p] : ansatz.kappa(k).terms()) {
      if (p.weight() > 1) n += 2 * static_cast<std::uint64_t>(p.weight() - 1);
    }
  }
  return n;
}

std::size_t count_high_rank(const DuccAnsatz& ansatz) {
  std::size_t n = 0;
  for (std::size_t k = 0; k < ansatz.size(); ++k) n += ansatz.op(k).rank() >= 3;
  return n;
}

std::vector<FermionExcitation> ordering_for_fixed_ansatz(std::vector<FermionExcitation> pool,
                                                         Determinant reference) {
  auto key = [&](const FermionExcitation& e) {
    return reference.bits ^ e.hole_mask() ^ e.particle_mask();
  };
  std::stable_sort(pool.begin(), pool.end(),
                   [&](const auto& a, const auto& b) { return key(a) < key(b); });
  return pool;
}

namespace {

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> split_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

}  // namespace

void save_ansatz(std::ostream& out, const DuccAnsatz& ansatz) {
  out << "# pqe ansatz v1\n"
      << "# spin orbital q = 2*spatial + spin (alpha even); qubit 0 is the least significant bit\n"
      << "# operators in application order: holes;particles;amplitude\n"
      << "qubits " << ansatz.num_qubits() << "\n"
      << "reference " << ansatz.reference().bits << "\n";
  char buf[32];
  for (std::size_t k = 0; k < ansatz.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", ansatz.amplitudes()[k]);
    out << join(ansatz.op(k).holes()) << ';' << join(ansatz.op(k).particles()) << ';' << buf << "\n";
  }
}

DuccAnsatz load_ansatz(std::istream& in) {
  std::string line;
  int qubits = -1;
  std::optional<std::uint64_t> ref;
  DuccAnsatz ansatz;
  bool started = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "qubits") {
      ls >> qubits;
    } else if (word == "reference") {
      std::uint64_t b;
      ls >> b;
      ref = b;
    } else {
      if (!started) {
        if (qubits < 0 || !ref) throw std::invalid_argument("load_ansatz: header lacks qubits/reference");
        ansatz = DuccAnsatz(qubits, Determinant{*ref});
        started = true;
      }
      const auto a = line.find(';'), b = line.find(';', a + 1);
      if (a == std::string::npos || b == std::string::npos) {
        throw std::invalid_argument("load_ansatz: line " + std::to_string(line_no) + " is not holes;particles;amplitude");
      }
      ansatz.add_operator(FermionExcitation(split_ints(line.substr(0, a)), split_ints(line.substr(a + 1, b - a - 1))),
                          std::stod(line.substr(b + 1)));
    }
  }
  if (!started) {
    if (qubits < 0 || !ref) throw std::invalid_argument("load_ansatz: header lacks qubits/reference");
    ansatz = DuccAnsatz(qubits, Determinant{*ref});
  }
  return ansatz;
}

}  // namespace pqe
