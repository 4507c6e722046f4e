// SPDX-License-Identifier: Apache-2.0
#include "pqe/bfgs.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <Eigen/Dense>

namespace pqe {

namespace {

using Vec = Eigen::VectorXd;

struct Probe {
  double alpha, f, d;  // step, phi(alpha), phi'(alpha)
  std::vector<double> x, g;
};

// Minimizer of the cubic through (a, fa, da) and (b, fb, db), or nullopt when
// it is not well defined.
std::optional<double> cubic_min(double a, double fa, double da, double b, double fb, double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  if (disc < 0.0) return std::nullopt;
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  const double t = b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
  if (!std::isfinite(t)) return std::nullopt;
  return t;
}

class LineSearch {
 public:
  LineSearch(const ValueAndGradient& fg, const std::vector<double>& x, const Vec& p, double f0,
             double d0, const BfgsOptions& o, int& evals)
      : fg_(fg), x_(x), p_(p), f0_(f0), d0_(d0), o_(o), evals_(evals) {}

  std::optional<Probe> run(double alpha1) {
    Probe prev{0.0, f0_, d0_, x_, {}};
    double alpha = alpha1;
    for (int i = 0; i < o_.max_line_search; ++i) {
      Probe cur = eval(alpha);
      if (cur.f > f0_ + o_.c1 * alpha * d0_ || (i > 0 && cur.f >= prev.f)) return zoom(prev, cur);
      if (std::abs(cur.d) <= -o_.c2 * d0_) return cur;
      if (cur.d >= 0.0) return zoom(cur, prev);
      prev = std::move(cur);
      alpha *= 2.0;
    }
    return std::nullopt;
  }

 private:
  Probe eval(double alpha) {
    Probe pr;
    pr.alpha = alpha;
    pr.x = x_;
    for (std::size_t k = 0; k < pr.x.size(); ++k) pr.x[k] += alpha * p_[static_cast<Eigen::Index>(k)];
    pr.g.resize(pr.x.size());
    pr.f = fg_(pr.x, pr.g);
    ++evals_;
    pr.d = Eigen::Map<const Vec>(pr.g.data(), static_cast<Eigen::Index>(pr.g.size())).dot(p_);
    return pr;
  }

  std::optional<Probe> zoom(Probe lo, Probe hi) {
    for (int i = 0; i < o_.max_line_search; ++i) {
      const double a = std::min(lo.alpha, hi.alpha), b = std::max(lo.alpha, hi.alpha);
      const double width = b - a;
      double alpha = 0.5 * (a + b);
      if (auto c = cubic_min(lo.alpha, lo.f, lo.d, hi.alpha, hi.f, hi.d);
          c && *c > a + 0.1 * width && *c < b - 0.1 * width) {
        alpha = *c;
      }
      if (width < 1e-14 * std::max(1.0, b)) return std::nullopt;
      Probe cur = eval(alpha);
      if (cur.f > f0_ + o_.c1 * alpha * d0_ || cur.f >= lo.f) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.d) <= -o_.c2 * d0_) return cur;
        if (cur.d * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
    }
    return std::nullopt;
  }

  const ValueAndGradient& fg_;
  const std::vector<double>& x_;
  const Vec& p_;
  double f0_, d0_;
  const BfgsOptions& o_;
  int& evals_;
};

}  // namespace

BfgsResult minimize_bfgs(const ValueAndGradient& fg, std::vector<double> x0, const BfgsOptions& options) {
  const auto n = static_cast<Eigen::Index>(x0.size());
  BfgsResult res;
  res.x = std::move(x0);
  std::vector<double> gbuf(res.x.size());
  double f = fg(res.x, gbuf);
  res.evaluations = 1;
  Vec g = Eigen::Map<Vec>(gbuf.data(), n);
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);
  double f_prev = f + g.norm() / 2.0;

  for (int it = 1; it <= options.max_iterations && g.norm() > options.gtol; ++it) {
    Vec p = -Hinv * g;
    double d0 = g.dot(p);
    if (!(d0 < 0.0)) {
      Hinv.setIdentity();
      p = -g;
      d0 = g.dot(p);
    }
    double alpha1 = 1.0;
    if (d0 != 0.0) {
      const double guess = 1.01 * 2.0 * (f - f_prev) / d0;
      if (guess > 0.0 && std::isfinite(guess)) alpha1 = std::min(1.0, guess);
    }
    LineSearch ls(fg, res.x, p, f, d0, options, res.evaluations);
    auto step = ls.run(alpha1);
    if (!step) {
      res.line_search_failed = true;
      break;
    }
    const Vec s = step->alpha * p;
    const Vec g_new = Eigen::Map<const Vec>(step->g.data(), n);
    const Vec y = g_new - g;
    res.x = std::move(step->x);
    f_prev = f;
    f = step->f;
    g = g_new;
    const double ys = y.dot(s);
    if (ys > 0.0) {
      const double rho = 1.0 / ys;
      const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - rho * s * y.transpose();
      Hinv = A * Hinv * A.transpose() + rho * s * s.transpose();
    }
    res.trace.push_back({it, f, f - f_prev, res.evaluations, g.norm()});
  }
  res.value = f;
  res.gradient_norm = g.norm();
  res.converged = res.gradient_norm <= options.gtol;
  return res;
}

}  // namespace pqe
