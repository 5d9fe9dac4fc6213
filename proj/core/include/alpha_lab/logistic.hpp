// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Alpha-risk of the logistic model g_theta(x) = sigmoid(<theta, x>): empirical
// risk, analytic gradient and Hessian, and the closed-form landscape constants
// (strong-convexity moduli, Lipschitz constants in theta and in 1/alpha).

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "alpha_lab/alpha.hpp"

namespace alpha_lab {

/// Model parameter constrained to the closed Euclidean ball of radius r.
class ParamVector {
 public:
  static constexpr double kBallTolerance = 1e-9;

  /// Throws ArgumentError if ||theta|| > radius + 1e-9. No silent projection.
  ParamVector(Eigen::VectorXd theta, double radius);

  const Eigen::VectorXd& theta() const noexcept { return theta_; }
  double radius() const noexcept { return radius_; }
  Eigen::Index dim() const noexcept { return theta_.size(); }

  /// Euclidean projection onto the ball of `radius` around `center`.
  static Eigen::VectorXd project(const Eigen::VectorXd& theta, const Eigen::VectorXd& center,
                                 double radius);
  static Eigen::VectorXd project(const Eigen::VectorXd& theta, double radius);

 private:
  Eigen::VectorXd theta_;
  double radius_;
};

/// unit_cube datasets enforce x in [0, 1]^d; raw datasets carry unnormalised
/// coordinates (used by the margin-geometry experiments).
enum class FeatureDomain { unit_cube, raw };

/// Labelled samples with label-noise provenance. Features are stored row-wise.
class LabeledDataset {
 public:
  LabeledDataset(Eigen::MatrixXd features, std::vector<int> labels,
                 FeatureDomain domain = FeatureDomain::unit_cube);
  LabeledDataset(Eigen::MatrixXd features, std::vector<int> labels, std::vector<bool> flipped,
                 std::vector<int> origin_class, FeatureDomain domain);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  Eigen::Index dim() const noexcept { return features_.cols(); }
  FeatureDomain domain() const noexcept { return domain_; }

  const Eigen::MatrixXd& features() const noexcept { return features_; }
  Eigen::VectorXd x(std::size_t i) const { return features_.row(static_cast<Eigen::Index>(i)).transpose(); }
  int label(std::size_t i) const { return labels_[i]; }
  bool flipped(std::size_t i) const { return flipped_[i]; }
  int origin_class(std::size_t i) const { return origin_[i]; }
  std::span<const int> labels() const noexcept { return labels_; }

  std::size_t count_label(int y) const;

  LabeledDataset subset(std::span<const std::size_t> indices) const;
  /// Appends a constant-1 feature (bias). The result is a raw-domain dataset
  /// unless the original already lies in the unit cube.
  LabeledDataset with_bias() const;
  /// Same samples with new labels; samples whose label changed are marked flipped.
  LabeledDataset relabeled(std::vector<int> labels) const;

  /// Mean of x x^T.
  Eigen::MatrixXd second_moment() const;

 private:
  void validate() const;

  Eigen::MatrixXd features_;
  std::vector<int> labels_;
  std::vector<bool> flipped_;
  std::vector<int> origin_;
  FeatureDomain domain_;
};

struct RiskReport {
  double risk = 0.0;
  Eigen::VectorXd gradient;
  double gradient_norm = 0.0;
  std::optional<double> hessian_min_eig;
};

struct RiskEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// sigmoid(<theta, x>).
double soft_classifier(const Eigen::VectorXd& theta, const Eigen::VectorXd& x);

/// Per-sample derivative factors: grad l = F1 x and hess l = F2 x x^T.
double gradient_factor(const Alpha& alpha, const Eigen::VectorXd& theta, const Eigen::VectorXd& x, int y);
double hessian_factor(const Alpha& alpha, const Eigen::VectorXd& theta, const Eigen::VectorXd& x, int y);
/// F2 in the form g^{2-1/a}(yx) g(-yx) (1 - (1 - 1/a) e^{-<theta, yx>}).
double hessian_factor_factored(const Alpha& alpha, const Eigen::VectorXd& theta,
                               const Eigen::VectorXd& x, int y);

/// y_i <theta, x_i> for every sample.
Eigen::VectorXd margins(const Eigen::VectorXd& theta, const LabeledDataset& data);

double empirical_risk(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data);
Eigen::VectorXd risk_gradient(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data);
Eigen::MatrixXd risk_hessian(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data);
RiskReport evaluate_risk(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data,
                         bool with_hessian = false);

/// Sample mean of the per-sample loss with its standard error. Applied to a
/// large sample drawn from a distribution this is the population-risk estimate.
RiskEstimate risk_estimate(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data);
/// Standard error of the gradient mean, sqrt(trace(Cov(per-sample gradient)) / n).
double gradient_standard_error(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data);

/// Mean of sigmoid(-y <theta, x>): error probability of the randomised classifier.
double randomized_error(const Eigen::VectorXd& theta, const LabeledDataset& data);

/// Strong-convexity modulus per unit of lambda_min(Sigma) for alpha <= 1 over
/// margins bounded by r_sqrt_d. Throws ArgumentError for alpha > 1.
double strong_convexity_modulus(const Alpha& alpha, double r_sqrt_d);

/// Largest alpha for which the small-radius modulus applies: 1 / (e^{2R} - e^R).
double small_radius_alpha_limit(double r_sqrt_d);
/// Small-radius strong-convexity modulus. Throws ArgumentError when r_sqrt_d is
/// not below asinh(1/2) or alpha exceeds small_radius_alpha_limit.
double small_radius_modulus(const Alpha& alpha, double r_sqrt_d);

/// Lipschitz constant of the alpha-risk in theta over the ball of radius r in d dimensions.
double theta_lipschitz_constant(const Alpha& alpha, double r, int d);

/// Lipschitz constants of R_alpha(theta) and grad R_alpha(theta) in 1/alpha, alpha >= 1,
/// for features in the unit cube of dimension theta.size().
double alpha_lipschitz_risk(const Eigen::VectorXd& theta);
double alpha_lipschitz_gradient(const Eigen::VectorXd& theta);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace alpha_lab
