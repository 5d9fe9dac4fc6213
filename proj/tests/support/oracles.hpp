// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference computations for the tests. Nothing here calls the
// closed forms under test; formulas are written out from the definitions.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Direct definition (a/(a-1)) (1 - p^{1-1/a}) with plain pow; a = inf -> 1 - p.
inline double alpha_loss_naive(double a, double p) {
  if (std::isinf(a)) return 1.0 - p;
  if (a == 1.0) return -std::log(p);
  return a / (a - 1.0) * (1.0 - std::pow(p, 1.0 - 1.0 / a));
}

/// Margin loss straight from the sigmoid-composed definition.
inline double margin_loss_naive(double a, double z) {
  const double p = 1.0 / (1.0 + std::exp(-z));
  return alpha_loss_naive(a, p);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h = 1e-5) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline Eigen::VectorXd gradient_fd(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd up = x;
    Eigen::VectorXd down = x;
    up[i] += h;
    down[i] -= h;
    g[i] = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

inline Eigen::MatrixXd jacobian_fd(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-5) {
  const Eigen::Index d = x.size();
  Eigen::MatrixXd jac(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    Eigen::VectorXd up = x;
    Eigen::VectorXd down = x;
    up[i] += h;
    down[i] -= h;
    jac.col(i) = (f(up) - f(down)) / (2.0 * h);
  }
  return jac;
}

/// Largest |f(u) - f(v)| / |u - v| over random pairs in [-r, r].
inline double sampled_slope(const std::function<double(double)>& f, double r, int pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-r, r);
  double best = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    if (a == b) continue;
    best = std::max(best, std::abs(f(a) - f(b)) / std::abs(a - b));
  }
  return best;
}

/// min over q on a simplex grid of sum_y p(y) l(y, q): brute-force conditional risk.
inline double simplex_min_binary(const std::function<double(double)>& loss, double p1, double step) {
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(std::round(1.0 / step));
  for (int i = 1; i < n; ++i) {
    const double q = i * step;
    best = std::min(best, (1.0 - p1) * loss(1.0 - q) + p1 * loss(q));
  }
  return best;
}

inline double simplex_min_ternary(const std::function<double(double)>& loss, const double p[3], double step) {
  double best = std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(std::round(1.0 / step));
  for (int i = 1; i < n; ++i) {
    for (int j = 1; i + j < n; ++j) {
      const double q[3] = {i * step, j * step, 1.0 - (i + j) * step};
      double v = 0.0;
      for (int y = 0; y < 3; ++y) {
        if (p[y] > 0.0) v += p[y] * loss(q[y]);
      }
      best = std::min(best, v);
    }
  }
  return best;
}

/// Refines a grid minimiser of a 1-D unimodal function by ternary search on [lo, hi].
inline double ternary_min(const std::function<double(double)>& f, double lo, double hi, int iterations = 200) {
  for (int i = 0; i < iterations; ++i) {
    const double a = lo + (hi - lo) / 3.0;
    const double b = hi - (hi - lo) / 3.0;
    if (f(a) <= f(b)) {
      hi = b;
    } else {
      lo = a;
    }
  }
  return 0.5 * (lo + hi);
}

inline double std_normal_cdf(double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); }

}  // namespace oracle
