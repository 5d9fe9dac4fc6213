// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Arimoto conditional entropy, the minimal alpha-risk it induces, alpha-tilted
// posteriors, and the binary conditional-risk quantities of the margin loss.
// All entropies are in nats.

#pragma once

#include <Eigen/Dense>

#include "alpha_lab/alpha.hpp"
#include "alpha_lab/loss.hpp"

namespace alpha_lab {

/// Joint pmf P(x, y) stored with x along rows and y along columns.
class JointPmf {
 public:
  explicit JointPmf(Eigen::MatrixXd table);

  const Eigen::MatrixXd& table() const noexcept { return table_; }
  Eigen::Index x_size() const noexcept { return table_.rows(); }
  Eigen::Index y_size() const noexcept { return table_.cols(); }

  /// Posterior P(. | x) for a row with positive marginal mass.
  ProbVector posterior(Eigen::Index x) const;
  double marginal(Eigen::Index x) const { return table_.row(x).sum(); }

 private:
  Eigen::MatrixXd table_;
};

/// Posterior eta(x) = P(Y = 1 | X = x), constrained to [0, 1].
class Eta {
 public:
  explicit Eta(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

double shannon_entropy(const ProbVector& p);

/// H_a^A(Y|X); Shannon H(Y|X) at alpha = 1, -log sum_x max_y P(x,y) at infinity.
double arimoto_conditional_entropy(const JointPmf& joint, const Alpha& alpha);

/// min over posteriors of E[l^a(Y, P_hat)], via its Arimoto-entropy closed form.
double minimal_alpha_risk(const JointPmf& joint, const Alpha& alpha);

/// Masses proportional to p(y)^alpha. At infinity the mass is spread evenly over
/// every maximiser.
ProbVector tilt_posterior(const ProbVector& p, const Alpha& alpha);

/// eta l~(f) + (1 - eta) l~(-f).
double conditional_risk(const Eta& eta, double f, const Alpha& alpha);

/// inf_f conditional_risk(eta, f, alpha).
double min_conditional_risk(const Eta& eta, const Alpha& alpha);

/// alpha * logit(eta). Infinite alpha yields sign(2 eta - 1) * inf (0 at 1/2).
double optimal_classifier(const Eta& eta, const Alpha& alpha);

}  // namespace alpha_lab
