// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dense_oracle.hpp"
#include "pqe/error.hpp"
#include "pqe/state_vector.hpp"

using pqe::PauliString;
using pqe::QubitOperator;
using pqe::StateVector;
using pqe::cplx;

namespace {

StateVector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector s(n);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    s[i] = cplx(g(rng), g(rng));
    norm2 += std::norm(s[i]);
  }
  for (std::size_t i = 0; i < s.dim(); ++i) s[i] /= std::sqrt(norm2);
  return s;
}

oracle::Vec to_eigen(const StateVector& s) {
  oracle::Vec v(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) v[i] = s[i];
  return v;
}

QubitOperator random_hermitian(int n, int terms, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, (std::uint64_t{1} << n) - 1);
  std::normal_distribution<double> g;
  QubitOperator h(n);
  for (int k = 0; k < terms; ++k) h.add_term(g(rng), PauliString(n, d(rng), d(rng)));
  return h.simplify();
}

}  // namespace

TEST(StateVector, BasisAndLimits) {
  const auto s = StateVector::basis_state(3, 5);
  EXPECT_EQ(s.dim(), 8u);
  EXPECT_EQ(s[5], cplx(1.0));
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
  EXPECT_THROW(StateVector(StateVector::kMaxQubits + 1), std::invalid_argument);
  EXPECT_THROW(StateVector::basis_state(2, 4), std::invalid_argument);
}

TEST(StateVector, PauliActionMatchesDense) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 5;
    std::uniform_int_distribution<std::uint64_t> d(0, (std::uint64_t{1} << n) - 1);
    const PauliString p(n, d(rng), d(rng));
    StateVector s = random_state(n, rng);
    const oracle::Vec expect = oracle::pauli_word(oracle::letters_of(p)) * to_eigen(s);
    pqe::apply_pauli_string(s, p);
    ASSERT_LT((to_eigen(s) - expect).norm(), 1e-13) << p.str();
  }
}

TEST(StateVector, OperatorAndExpectationMatchDense) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const QubitOperator h = random_hermitian(n, 12, rng);
    const StateVector s = random_state(n, rng);
    StateVector out;
    pqe::apply_operator(h, s, out);
    const oracle::Mat hd = oracle::dense(h);
    EXPECT_LT((to_eigen(out) - hd * to_eigen(s)).norm(), 1e-12);
    const cplx e = to_eigen(s).dot(hd * to_eigen(s));
    EXPECT_NEAR(pqe::expectation(s, h), e.real(), 1e-12);
  }
}

TEST(StateVector, ExpectationRejectsNonHermitian) {
  QubitOperator k(1);
  k.add_term(cplx(0, 1), PauliString::parse("X0", 1));
  EXPECT_THROW(pqe::expectation(StateVector(1), k), std::invalid_argument);
}

TEST(CommutingExponential, MatchesMatrixExponential) {
  std::mt19937_64 rng(3);
  const std::vector<pqe::FermionExcitation> ops = {pqe::FermionExcitation({0}, {4}),
                                                   pqe::FermionExcitation({0, 1}, {2, 5}),
                                                   pqe::FermionExcitation({0, 1, 3}, {2, 4, 5})};
  for (const auto& e : ops) {
    const QubitOperator kappa = pqe::jordan_wigner_excitation(e, 6);
    const pqe::CommutingExponential ex(kappa);
    for (double t : {0.0, 0.37, -1.2, 3.0}) {
      StateVector s = random_state(6, rng);
      const oracle::Vec expect = oracle::expm_anti_hermitian(oracle::dense(kappa), t) * to_eigen(s);
      ex.apply(s, t);
      ASSERT_LT((to_eigen(s) - expect).norm(), 1e-12) << e.str() << " t=" << t;
      EXPECT_NEAR(s.norm(), 1.0, 1e-13);
    }
  }
}

TEST(CommutingExponential, RejectsBadGenerators) {
  QubitOperator herm(2);
  herm.add_term(1.0, PauliString::parse("X0", 2));
  EXPECT_THROW(pqe::CommutingExponential{herm}, std::invalid_argument);
  QubitOperator noncommuting(2);
  noncommuting.add_term(cplx(0, 1), PauliString::parse("X0", 2));
  noncommuting.add_term(cplx(0, 1), PauliString::parse("Z0", 2));
  EXPECT_THROW(pqe::CommutingExponential{noncommuting}, std::invalid_argument);
}

TEST(Trotter, CommutingHamiltonianIsExact) {
  std::mt19937_64 rng(4);
  QubitOperator h(3);
  h.add_term(0.7, PauliString::parse("Z0 Z1", 3));
  h.add_term(-0.4, PauliString::parse("Z2", 3));
  h.add_term(1.1, PauliString::parse("", 3));
  h.simplify();
  StateVector s = random_state(3, rng);
  const oracle::Vec expect = oracle::expm_anti_hermitian(cplx(0, -1) * oracle::dense(h), 0.9) * to_eigen(s);
  pqe::apply_trotter_evolution(s, h, 0.9, 1);
  EXPECT_LT((to_eigen(s) - expect).norm(), 1e-12);
}

TEST(Trotter, FirstOrderErrorScalesAsDtSquared) {
  std::mt19937_64 rng(5);
  const QubitOperator h = random_hermitian(4, 10, rng);
  const StateVector s0 = random_state(4, rng);
  const oracle::Mat hd = oracle::dense(h);
  auto error = [&](double dt) {
    StateVector s = s0;
    pqe::apply_trotter_evolution(s, h, dt, 1);
    const oracle::Vec exact = oracle::expm_anti_hermitian(cplx(0, -1) * hd, dt) * to_eigen(s0);
    return (to_eigen(s) - exact).norm();
  };
  const double e1 = error(0.02), e2 = error(0.01);
  EXPECT_NEAR(e1 / e2, 4.0, 0.2);
  // More steps shrink the error as 1/steps at fixed total time.
  StateVector a = s0, b = s0;
  pqe::apply_trotter_evolution(a, h, 0.2, 10);
  pqe::apply_trotter_evolution(b, h, 0.2, 20);
  const oracle::Vec exact = oracle::expm_anti_hermitian(cplx(0, -1) * hd, 0.2) * to_eigen(s0);
  EXPECT_NEAR((to_eigen(a) - exact).norm() / (to_eigen(b) - exact).norm(), 2.0, 0.1);
}

TEST(Sampling, DeterministicAndUnbiased) {
  StateVector s(2);
  s[0] = std::sqrt(0.1);
  s[1] = std::sqrt(0.2);
  s[3] = cplx(0, std::sqrt(0.7));
  const std::uint64_t shots = 200000;
  const auto a = pqe::sample_basis(s, shots, 42);
  EXPECT_EQ(a, pqe::sample_basis(s, shots, 42));
  EXPECT_EQ(a.count(2), 0u);
  std::uint64_t total = 0;
  for (const auto& [k, v] : a) total += v;
  EXPECT_EQ(total, shots);
  for (auto [k, p] : std::vector<std::pair<std::uint64_t, double>>{{0, 0.1}, {1, 0.2}, {3, 0.7}}) {
    const double sd = std::sqrt(shots * p * (1 - p));
    EXPECT_NEAR(static_cast<double>(a.at(k)), shots * p, 5 * sd);
  }
  EXPECT_THROW(pqe::sample_basis(s, 0, 1), std::invalid_argument);
}
