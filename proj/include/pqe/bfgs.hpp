// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

namespace pqe {

/// Objective returning f(x) and writing the gradient into g.
using ValueAndGradient = std::function<double(const std::vector<double>& x, std::vector<double>& g)>;

struct BfgsOptions {
  double gtol = 1e-5;    // stop when ||g||_2 <= gtol
  int max_iterations = 200;
  double c1 = 1e-4;      // sufficient decrease
  double c2 = 0.9;       // curvature
  int max_line_search = 30;
};

struct BfgsIteration {
  int iteration = 0;
  double value = 0.0;
  double delta = 0.0;
  int evaluations = 0;  // cumulative, including line-search probes
  double gradient_norm = 0.0;
};

struct BfgsResult {
  std::vector<double> x;
  double value = 0.0;
  double gradient_norm = 0.0;
  int evaluations = 0;
  bool converged = false;
  bool line_search_failed = false;
  std::vector<BfgsIteration> trace;
};

/// Dense BFGS on the inverse Hessian (identity start) with a strong-Wolfe line
/// search. The first trial step of each line search is
/// min(1, 2.02 (f_prev - f) / |g.p|), with f_prev - f taken as ||g|| / 2 on the
/// first iteration.
BfgsResult minimize_bfgs(const ValueAndGradient& fg, std::vector<double> x0, const BfgsOptions& options);

}  // namespace pqe
