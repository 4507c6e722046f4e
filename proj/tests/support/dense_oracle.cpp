// SPDX-License-Identifier: Apache-2.0
#include "dense_oracle.hpp"

#include <bit>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace oracle {

Mat pauli(char p) {
  Mat m(2, 2);
  switch (p) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli letter");
  }
  return m;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat pauli_word(const std::string& letters) {
  Mat m = Mat::Identity(1, 1);
  for (char c : letters) m = kron(pauli(c), m);  // later qubits are more significant
  return m;
}

std::string letters_of(const pqe::PauliString& p) {
  std::string s(p.num_qubits(), 'I');
  for (int q = 0; q < p.num_qubits(); ++q) {
    const bool x = (p.x_mask() >> q) & 1u, z = (p.z_mask() >> q) & 1u;
    s[q] = x && z ? 'Y' : x ? 'X' : z ? 'Z' : 'I';
  }
  return s;
}

Mat dense(const pqe::QubitOperator& op) {
  const Eigen::Index dim = Eigen::Index{1} << op.num_qubits();
  Mat m = Mat::Zero(dim, dim);
  for (const auto& [c, p] : op.terms()) m += c * pauli_word(letters_of(p));
  return m;
}

SpMat ladder(int p, bool creation, int num_qubits) {
  const std::int64_t dim = std::int64_t{1} << num_qubits;
  std::vector<Eigen::Triplet<cplx>> trip;
  for (std::int64_t i = 0; i < dim; ++i) {
    const bool occ = (i >> p) & 1;
    if (occ == creation) continue;
    const int below = std::popcount(static_cast<std::uint64_t>(i) & ((std::uint64_t{1} << p) - 1));
    trip.emplace_back(i ^ (std::int64_t{1} << p), i, below % 2 ? -1.0 : 1.0);
  }
  SpMat m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

SpMat second_quantized_hamiltonian(const pqe::MolecularProblem& problem) {
  const int n = problem.num_spatial();
  const int nq = 2 * n;
  const std::int64_t dim = std::int64_t{1} << nq;
  std::vector<SpMat> a(nq), ad(nq);
  for (int q = 0; q < nq; ++q) {
    a[q] = ladder(q, false, nq);
    ad[q] = ladder(q, true, nq);
  }
  SpMat h(dim, dim);
  h.setIdentity();
  h *= problem.core_energy();
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      if (problem.h(p, q) == 0.0) continue;
      for (int s = 0; s < 2; ++s) h += problem.h(p, q) * (ad[2 * p + s] * a[2 * q + s]);
    }
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
          const double v = problem.eri(p, q, r, s);
          if (v == 0.0) continue;
          for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2) {
              const SpMat t = ad[2 * p + s1] * ad[2 * r + s2] * a[2 * s + s2] * a[2 * q + s1];
              h += (0.5 * v) * t;
            }
        }
  h.prune(cplx(0.0), 1e-14);
  return h;
}

SpMat kappa(const pqe::FermionExcitation& exc, int num_qubits) {
  const std::int64_t dim = std::int64_t{1} << num_qubits;
  SpMat tau(dim, dim);
  tau.setIdentity();
  // tau = a+_{p0} ... a+_{pn-1} a_{hn-1} ... a_{h0}
  for (int p : exc.particles()) tau = tau * ladder(p, true, num_qubits);
  for (auto it = exc.holes().rbegin(); it != exc.holes().rend(); ++it) tau = tau * ladder(*it, false, num_qubits);
  SpMat adj = SpMat(tau.adjoint());
  return tau - adj;
}

Mat expm_anti_hermitian(const Mat& k, double t) {
  const Mat herm = cplx(0, 1) * k;  // Hermitian
  Eigen::SelfAdjointEigenSolver<Mat> es(herm);
  const Eigen::VectorXd lam = es.eigenvalues();
  Vec phases(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) phases[i] = std::exp(cplx(0, -t * lam[i]));  // exp(tK) = exp(-i t iK)
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Vec ducc_state(const std::vector<pqe::FermionExcitation>& ops, const std::vector<double>& t,
               pqe::Determinant ref, int num_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  Vec psi = Vec::Zero(dim);
  psi[static_cast<Eigen::Index>(ref.bits)] = 1.0;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const Mat kd = Mat(kappa(ops[k], num_qubits));
    psi = expm_anti_hermitian(kd, t[k]) * psi;
  }
  return psi;
}

double sector_ground_energy(const Mat& h, int electrons, int ms2) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const auto u = static_cast<std::uint64_t>(i);
    const int na = std::popcount(u & 0x5555555555555555ull), nb = std::popcount(u & 0xaaaaaaaaaaaaaaaaull);
    if (na + nb == electrons && na - nb == ms2) idx.push_back(i);
  }
  Mat sub(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = h(idx[i], idx[j]);
  Eigen::SelfAdjointEigenSolver<Mat> es(sub, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(PQE_FIXTURE_DIR) / name;
}

}  // namespace oracle
