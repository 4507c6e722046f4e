// SPDX-License-Identifier: Apache-2.0
#include "pqe/diis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace pqe {

DiisResult diis_extrapolate(const std::vector<std::vector<double>>& amplitudes,
                            const std::vector<std::vector<double>>& errors) {
  if (amplitudes.empty() || amplitudes.size() != errors.size()) {
    throw std::invalid_argument("diis_extrapolate: history sizes differ or are empty");
  }
  const auto n = static_cast<Eigen::Index>(amplitudes.size());
  DiisResult out{amplitudes.back(), {}, true};
  if (n < 2) return out;

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < errors[i].size(); ++k) s += errors[i][k] * errors[j][k];
      B(i, j) = B(j, i) = s;
    }
  }
  // Scale the error block to O(1) so the rank test is relative.
  const double scale = B.topLeftCorner(n, n).diagonal().maxCoeff();
  if (!(scale > 0.0)) return out;
  B.topLeftCorner(n, n) /= scale;
  B.row(n).head(n).setConstant(-1.0);
  B.col(n).head(n).setConstant(-1.0);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = -1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) return out;
  const Eigen::VectorXd c = lu.solve(rhs);
  if (!c.allFinite()) return out;

  out.fallback = false;
  out.coefficients.assign(c.data(), c.data() + n);
  std::fill(out.amplitudes.begin(), out.amplitudes.end(), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < out.amplitudes.size(); ++k) out.amplitudes[k] += c[i] * amplitudes[i][k];
  }
  return out;
}

void Diis::push(std::vector<double> amplitudes, std::vector<double> error) {
  if (depth_ == 0) return;
  if (t_.size() == depth_) {
    t_.erase(t_.begin());
    e_.erase(e_.begin());
  }
  t_.push_back(std::move(amplitudes));
  e_.push_back(std::move(error));
}

void Diis::clear() {
  t_.clear();
  e_.clear();
}

DiisResult Diis::extrapolate() const { return diis_extrapolate(t_, e_); }

}  // namespace pqe
