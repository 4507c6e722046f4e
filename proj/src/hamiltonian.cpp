// SPDX-License-Identifier: Apache-2.0
#include <array>
#include <cmath>
#include <string>

#include "pqe/error.hpp"
#include "pqe/molecular_problem.hpp"

namespace pqe {

QubitOperator jordan_wigner_hamiltonian(const MolecularProblem& problem) {
  const int m = problem.num_spin_orbitals();
  QubitOperator raw(m);
  auto accumulate = [&](const QubitOperator& piece, double scale) {
    for (const auto& [c, p] : piece.terms()) raw.add_term(c * scale, p);
  };
  raw.add_term(problem.core_energy(), PauliString(m, 0, 0));

  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q) {
      const double v = problem.h_spin(p, q);
      if (v == 0.0) continue;
      const std::array<LadderOp, 2> ops{{{p, true}, {q, false}}};
      accumulate(jordan_wigner_product(ops, m), v);
    }
  }
  for (int p = 0; p < m; ++p) {
    for (int q = p + 1; q < m; ++q) {
      for (int r = 0; r < m; ++r) {
        for (int s = r + 1; s < m; ++s) {
          const double v = problem.antisym(p, q, r, s);
          if (v == 0.0) continue;
          const std::array<LadderOp, 4> ops{{{p, true}, {q, true}, {s, false}, {r, false}}};
          accumulate(jordan_wigner_product(ops, m), v);
        }
      }
    }
  }
  raw.simplify();
  QubitOperator out(m);
  for (const auto& [c, p] : raw.terms()) {
    if (std::abs(c.imag()) > 1e-10) {
      throw NumericalError("jordan_wigner_hamiltonian: imaginary coefficient " +
                           std::to_string(c.imag()) + " on " + p.str());
    }
    if (std::abs(c.real()) >= QubitOperator::kPruneTolerance) out.add_term(c.real(), p);
  }
  return out;
}

}  // namespace pqe
