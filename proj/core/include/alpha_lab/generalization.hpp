// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Uniform generalization bounds for the alpha-risk of the logistic model,
// Monte-Carlo audits of those bounds, and the sample-size trend of the 0-1 risk
// of trained classifiers.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "alpha_lab/alpha.hpp"
#include "alpha_lab/experiment.hpp"
#include "alpha_lab/gmm.hpp"

namespace alpha_lab {

struct BoundQuery {
  Alpha alpha{1.0};
  double radius = 1.0;
  int dim = 1;
  std::size_t samples = 1;
  double delta = 0.05;

  double r_sqrt_d() const { return radius * std::sqrt(static_cast<double>(dim)); }
  void validate() const;
};

/// C_{r sqrt d}(a) 2 r sqrt(d) / sqrt(n) + 4 D_{r sqrt d}(a) sqrt(2 log(4/delta) / n).
double rademacher_bound(const BoundQuery& q);

/// Bound on sup |empirical R_alpha - population R_inf| for alpha >= 1:
/// sigma(r sqrt d)(2 r sqrt(d)/sqrt(n) + 4 sqrt(2 log(4/delta)/n)) + log(sigma(-r sqrt d))^2 / (2 alpha).
double uniform_discrepancy_bound(const BoundQuery& q);

struct BoundAuditConfig {
  GmmSpec spec;
  double radius = 1.0;
  std::size_t samples = 500;        // n per trial
  std::size_t trials = 50;
  std::size_t thetas = 200;         // random points in the ball
  std::size_t population = 1000000;  // Monte-Carlo sample for population risks
  double delta = 0.2;
  std::uint64_t seed = 0;
};

struct BoundTrial {
  double sup_gap = 0.0;  // max over theta of |empirical - population| - 3 SE
  bool holds = false;
};

struct BoundAudit {
  double bound = 0.0;
  std::vector<BoundTrial> trials;
  std::size_t violations = 0;
  double violation_rate() const {
    return trials.empty() ? 0.0 : static_cast<double>(violations) / static_cast<double>(trials.size());
  }
};

/// Features are the mixture mapped into the unit cube by the default box.
/// Compares empirical R_alpha on each trial dataset with the population estimate of R_alpha.
BoundAudit rademacher_audit(const BoundAuditConfig& config, const Alpha& alpha);
/// Compares empirical R_alpha (alpha >= 1) with the population estimate of R_inf.
BoundAudit discrepancy_audit(const BoundAuditConfig& config, const Alpha& alpha);

struct TrendConfig {
  std::vector<std::size_t> sample_sizes{50, 200, 1000, 5000};
  std::size_t runs = 30;
  TrainConfig train;
  std::uint64_t seed = 0;
};

struct TrendRow {
  std::size_t samples = 0;
  double mean_risk = 0.0;  // exact 0-1 risk of the trained linear rule
  double mean_gap = 0.0;   // mean_risk - Bayes risk
  double standard_error = 0.0;
};

struct TrendReport {
  double bayes_risk = 0.0;
  std::vector<TrendRow> rows;
  /// gap(n_next) <= gap(n) + sqrt(se(n)^2 + se(n_next)^2) for consecutive sizes.
  bool non_increasing = false;
};

/// Trains on raw mixture samples through the origin and scores each classifier
/// by its exact 0-1 risk under the mixture. Runs at different sizes are independent.
TrendReport optimality_trend(const GmmSpec& spec, const Alpha& alpha, const TrendConfig& config);

}  // namespace alpha_lab
