// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense reference constructions for the tests. Everything here is built from
// 2x2 matrices and Kronecker products, or from occupation-number matrix
// elements, never from the library's symplectic or bitmask code paths.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pqe/fermion.hpp"
#include "pqe/molecular_problem.hpp"
#include "pqe/pauli.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cplx>;

/// Single-qubit Pauli by letter: 'I', 'X', 'Y', 'Z'.
Mat pauli(char p);

/// Kronecker product a (x) b.
Mat kron(const Mat& a, const Mat& b);

/// Matrix of a Pauli word given per qubit, letters[q] acting on qubit q; qubit
/// 0 is the least significant bit of the basis index, so it is the rightmost
/// factor of the Kronecker chain.
Mat pauli_word(const std::string& letters);

/// Letters of a PauliString, one per qubit.
std::string letters_of(const pqe::PauliString& p);

Mat dense(const pqe::QubitOperator& op);

/// a_p (creation == false) or a+_p from occupation-number matrix elements:
/// <i ^ 2^p| a_p |i> = (-1)^{# occupied below p} when bit p of i is set.
SpMat ladder(int p, bool creation, int num_qubits);

/// Second-quantized Hamiltonian built from ladder matrices and the integrals,
/// with no antisymmetry shortcuts: core + sum h_pq a+_p a_q
/// + 1/2 sum (pq|rs) a+_p,s1 a+_r,s2 a_s,s2 a_q,s1.
SpMat second_quantized_hamiltonian(const pqe::MolecularProblem& problem);

/// tau - tau^dagger from ladder matrices.
SpMat kappa(const pqe::FermionExcitation& exc, int num_qubits);

/// exp(t K) for anti-Hermitian K via the spectral decomposition of iK.
Mat expm_anti_hermitian(const Mat& k, double t);

/// prod_k exp(t_k K_k) |ref>, operator 0 applied first.
Vec ducc_state(const std::vector<pqe::FermionExcitation>& ops, const std::vector<double>& t,
               pqe::Determinant ref, int num_qubits);

/// Lowest eigenvalue of a Hermitian matrix restricted to basis states with
/// `electrons` set bits and the given MS2.
double sector_ground_energy(const Mat& h, int electrons, int ms2);

std::filesystem::path fixture(const std::string& name);

}  // namespace oracle
