// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Empirical alpha-risk over a square lattice restricted to the disc of radius
// r (d = 2), the saturation audit against alpha = inf, and a lattice
// single-basin test.

#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "alpha_lab/alpha.hpp"
#include "alpha_lab/logistic.hpp"

namespace alpha_lab {

/// values(i, j) is the risk at (axis[i], axis[j]); NaN outside the disc.
struct LandscapeGrid {
  Eigen::VectorXd axis;
  Eigen::MatrixXd values;
};

/// k evenly spaced points per axis over [-r, r]; k = 1 evaluates the origin only.
Eigen::VectorXd lattice_axis(double radius, int points_per_axis);

LandscapeGrid landscape_grid(const LabeledDataset& data, const Alpha& alpha, double radius, int points_per_axis);

struct SaturationReport {
  double alpha = 0.0;
  double max_value_gap = 0.0;     // max |R_alpha - R_inf| over the lattice
  double max_gradient_gap = 0.0;  // max ||grad R_alpha - grad R_inf||
  double value_allowance = 0.0;   // max L_d(theta) / alpha
  double gradient_allowance = 0.0;  // max J_d(theta) / alpha
  bool holds() const noexcept {
    return max_value_gap <= value_allowance && max_gradient_gap <= gradient_allowance;
  }
};

/// Compares a finite alpha >= 1 with alpha = inf at every lattice point in the disc.
SaturationReport saturation_report(const LabeledDataset& data, const Alpha& alpha, double radius,
                                   int points_per_axis);

struct BasinReport {
  std::size_t strict_local_minima = 0;
  double global_minimum = 0.0;
  Eigen::Index global_row = 0;
  Eigen::Index global_col = 0;
  bool single_basin = false;  // every strict local minimum is the global one
};

/// Strict local minima over the 8-neighbourhood, among lattice points whose
/// eight neighbours are all finite. Points on the jagged edge of the disc are
/// skipped: with the minimiser outside the disc they would register as
/// spurious minima.
BasinReport single_basin_check(const LandscapeGrid& grid);

}  // namespace alpha_lab
