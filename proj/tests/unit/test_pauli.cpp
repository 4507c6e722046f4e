// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "dense_oracle.hpp"
#include "pqe/pauli.hpp"

using pqe::PauliString;
using pqe::QubitOperator;
using pqe::cplx;

namespace {

PauliString random_string(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> d(0, (std::uint64_t{1} << n) - 1);
  return PauliString(n, d(rng), d(rng));
}

}  // namespace

TEST(PauliString, ParseAndPrint) {
  const auto p = PauliString::parse("X0 Y3 Z4", 5);
  EXPECT_EQ(p.x_mask(), 0b01001u);
  EXPECT_EQ(p.z_mask(), 0b11000u);
  EXPECT_EQ(p.weight(), 3);
  EXPECT_EQ(p.num_y(), 1);
  EXPECT_EQ(PauliString::parse(p.str(), 5), p);
  EXPECT_TRUE(PauliString::parse("I", 3).is_identity());
  EXPECT_TRUE(PauliString::parse("", 3).is_identity());
  EXPECT_THROW(PauliString::parse("X5", 3), std::invalid_argument);
  EXPECT_THROW(PauliString::parse("Q1", 3), std::invalid_argument);
}

TEST(PauliString, MatrixMatchesKroneckerChain) {
  const auto p = PauliString::parse("X0 Y1 Z3", 4);
  EXPECT_EQ(oracle::letters_of(p), "XYIZ");
  QubitOperator op(4);
  op.add_term(1.0, p);
  const oracle::Mat expect =
      oracle::kron(oracle::pauli('Z'),
                   oracle::kron(oracle::pauli('I'), oracle::kron(oracle::pauli('Y'), oracle::pauli('X'))));
  EXPECT_LT((oracle::dense(op) - expect).norm(), 1e-14);
}

TEST(PauliString, ProductMatchesDense) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const auto a = random_string(n, rng), b = random_string(n, rng);
    const auto prod = pqe::multiply(a, b);
    const oracle::Mat lhs = oracle::pauli_word(oracle::letters_of(a)) * oracle::pauli_word(oracle::letters_of(b));
    const oracle::Mat rhs = prod.phase * oracle::pauli_word(oracle::letters_of(prod.string));
    ASSERT_LT((lhs - rhs).norm(), 1e-13) << a.str() << " * " << b.str();
  }
}

TEST(PauliString, CommutationMatchesDense) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const auto a = random_string(n, rng), b = random_string(n, rng);
    const oracle::Mat ma = oracle::pauli_word(oracle::letters_of(a));
    const oracle::Mat mb = oracle::pauli_word(oracle::letters_of(b));
    const bool dense_commutes = (ma * mb - mb * ma).norm() < 1e-12;
    ASSERT_EQ(a.commutes_with(b), dense_commutes) << a.str() << ", " << b.str();
  }
}

TEST(QubitOperator, SimplifyMergesAndPrunes) {
  QubitOperator op(2);
  op.add_term(0.5, PauliString::parse("X0", 2));
  op.add_term(0.5, PauliString::parse("X0", 2));
  op.add_term(1e-14, PauliString::parse("Z1", 2));
  op.add_term(-2.0, PauliString::parse("", 2));
  op.simplify();
  ASSERT_EQ(op.size(), 2u);
  EXPECT_TRUE(op.terms()[0].second.is_identity());
  EXPECT_NEAR(op.terms()[1].first.real(), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(op.one_norm(), 1.0);  // identity excluded
}

TEST(QubitOperator, ProductAndAdjointMatchDense) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    QubitOperator a(3), b(3);
    for (int k = 0; k < 5; ++k) {
      a.add_term(cplx(g(rng), g(rng)), random_string(3, rng));
      b.add_term(cplx(g(rng), g(rng)), random_string(3, rng));
    }
    a.simplify();
    b.simplify();
    EXPECT_LT((oracle::dense(a * b) - oracle::dense(a) * oracle::dense(b)).norm(), 1e-12);
    EXPECT_LT((oracle::dense(a.adjoint()) - oracle::dense(a).adjoint()).norm(), 1e-12);
    EXPECT_LT((oracle::dense(a + b) - oracle::dense(a) - oracle::dense(b)).norm(), 1e-12);
  }
}

TEST(QubitOperator, HermiticityChecks) {
  QubitOperator h(2);
  h.add_term(0.3, PauliString::parse("X0 Y1", 2));
  EXPECT_TRUE(h.is_hermitian());
  EXPECT_FALSE(h.is_anti_hermitian());
  QubitOperator k = h * cplx(0, 1);
  EXPECT_TRUE(k.is_anti_hermitian());
  QubitOperator mixed(2);
  mixed.add_term(1.0, PauliString::parse("X0", 2));
  mixed.add_term(1.0, PauliString::parse("Z0", 2));
  EXPECT_FALSE(mixed.terms_pairwise_commute());
}
