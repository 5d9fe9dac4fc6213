// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "alpha_lab/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "alpha_lab/parallel.hpp"

namespace alpha_lab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_planar(const LabeledDataset& data, double radius, int k) {
  if (data.dim() != 2) throw ArgumentError("landscape needs d = 2, got d = " + std::to_string(data.dim()));
  if (!(radius > 0.0)) throw ArgumentError("landscape radius must be positive");
  if (k < 1) throw ArgumentError("landscape needs at least one lattice point per axis");
}

bool in_disc(double x, double y, double radius) { return x * x + y * y <= radius * radius * (1.0 + 1e-12); }

}  // namespace

Eigen::VectorXd lattice_axis(double radius, int points_per_axis) {
  if (points_per_axis == 1) return Eigen::VectorXd::Zero(1);
  return Eigen::VectorXd::LinSpaced(points_per_axis, -radius, radius);
}

LandscapeGrid landscape_grid(const LabeledDataset& data, const Alpha& alpha, double radius, int points_per_axis) {
  require_planar(data, radius, points_per_axis);
  LandscapeGrid grid;
  grid.axis = lattice_axis(radius, points_per_axis);
  const Eigen::Index k = grid.axis.size();
  grid.values = Eigen::MatrixXd::Constant(k, k, kNaN);
  parallel_for(static_cast<std::size_t>(k), [&](std::size_t row) {
    const auto i = static_cast<Eigen::Index>(row);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!in_disc(grid.axis[i], grid.axis[j], radius)) continue;
      grid.values(i, j) = empirical_risk(alpha, Eigen::Vector2d(grid.axis[i], grid.axis[j]), data);
    }
  });
  return grid;
}

SaturationReport saturation_report(const LabeledDataset& data, const Alpha& alpha, double radius,
                                   int points_per_axis) {
  require_planar(data, radius, points_per_axis);
  if (alpha.is_infinite() || alpha.value() < 1.0) throw ArgumentError("saturation audit needs finite alpha >= 1");
  const Eigen::VectorXd axis = lattice_axis(radius, points_per_axis);
  const Eigen::Index k = axis.size();
  const Alpha inf = Alpha::infinity();
  std::vector<SaturationReport> rows(static_cast<std::size_t>(k));
  parallel_for(rows.size(), [&](std::size_t row) {
    SaturationReport& r = rows[row];
    const auto i = static_cast<Eigen::Index>(row);
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!in_disc(axis[i], axis[j], radius)) continue;
      const Eigen::Vector2d theta(axis[i], axis[j]);
      r.max_value_gap = std::max(r.max_value_gap, std::abs(empirical_risk(alpha, theta, data) -
                                                           empirical_risk(inf, theta, data)));
      r.max_gradient_gap = std::max(
          r.max_gradient_gap, (risk_gradient(alpha, theta, data) - risk_gradient(inf, theta, data)).norm());
      r.value_allowance = std::max(r.value_allowance, alpha_lipschitz_risk(theta));
      r.gradient_allowance = std::max(r.gradient_allowance, alpha_lipschitz_gradient(theta));
    }
  });
  SaturationReport out;
  out.alpha = alpha.value();
  for (const auto& r : rows) {
    out.max_value_gap = std::max(out.max_value_gap, r.max_value_gap);
    out.max_gradient_gap = std::max(out.max_gradient_gap, r.max_gradient_gap);
    out.value_allowance = std::max(out.value_allowance, r.value_allowance);
    out.gradient_allowance = std::max(out.gradient_allowance, r.gradient_allowance);
  }
  out.value_allowance /= out.alpha;
  out.gradient_allowance /= out.alpha;
  return out;
}

BasinReport single_basin_check(const LandscapeGrid& grid) {
  const Eigen::MatrixXd& v = grid.values;
  BasinReport out;
  out.global_minimum = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (std::isfinite(v(i, j)) && v(i, j) < out.global_minimum) {
        out.global_minimum = v(i, j);
        out.global_row = i;
        out.global_col = j;
      }
    }
  }
  if (!std::isfinite(out.global_minimum)) throw ArgumentError("landscape has no finite entries");
  bool only_global = true;
  for (Eigen::Index i = 0; i < v.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      if (!std::isfinite(v(i, j))) continue;
      bool strict = true;
      for (Eigen::Index di = -1; di <= 1 && strict; ++di) {
        for (Eigen::Index dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const Eigen::Index a = i + di;
          const Eigen::Index b = j + dj;
          // points next to the mask edge or the lattice edge are not candidates
          if (a < 0 || b < 0 || a >= v.rows() || b >= v.cols() || !std::isfinite(v(a, b)) || !(v(i, j) < v(a, b))) {
            strict = false;
            break;
          }
        }
      }
      if (!strict) continue;
      ++out.strict_local_minima;
      if (i != out.global_row || j != out.global_col) only_global = false;
    }
  }
  out.single_basin = only_global;
  return out;
}

}  // namespace alpha_lab
