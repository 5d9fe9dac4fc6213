// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "alpha_lab/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "alpha_lab/loss.hpp"

namespace alpha_lab {

namespace {

void require_nonempty(const LabeledDataset& data) {
  if (data.empty()) throw ArgumentError("dataset is empty");
}

void require_dim(const Eigen::VectorXd& theta, const LabeledDataset& data) {
  if (theta.size() != data.dim()) {
    throw ArgumentError("parameter dimension " + std::to_string(theta.size()) +
                        " does not match feature dimension " + std::to_string(data.dim()));
  }
}

}  // namespace

ParamVector::ParamVector(Eigen::VectorXd theta, double radius)
    : theta_(std::move(theta)), radius_(radius) {
  if (!(radius_ > 0.0)) throw ArgumentError("ball radius must be positive");
  if (!theta_.allFinite()) throw ArgumentError("parameter has non-finite entries");
  if (theta_.norm() > radius_ + kBallTolerance) {
    throw ArgumentError("parameter norm " + std::to_string(theta_.norm()) +
                        " exceeds ball radius " + std::to_string(radius_));
  }
}

Eigen::VectorXd ParamVector::project(const Eigen::VectorXd& theta, const Eigen::VectorXd& center,
                                     double radius) {
  const Eigen::VectorXd offset = theta - center;
  const double norm = offset.norm();
  if (norm <= radius) return theta;
  return center + offset * (radius / norm);
}

Eigen::VectorXd ParamVector::project(const Eigen::VectorXd& theta, double radius) {
  return project(theta, Eigen::VectorXd::Zero(theta.size()), radius);
}

LabeledDataset::LabeledDataset(Eigen::MatrixXd features, std::vector<int> labels, FeatureDomain domain)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      flipped_(labels_.size(), false),
      origin_(labels_),
      domain_(domain) {
  validate();
}

LabeledDataset::LabeledDataset(Eigen::MatrixXd features, std::vector<int> labels, std::vector<bool> flipped,
                               std::vector<int> origin_class, FeatureDomain domain)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      flipped_(std::move(flipped)),
      origin_(std::move(origin_class)),
      domain_(domain) {
  validate();
}

void LabeledDataset::validate() const {
  const auto n = labels_.size();
  if (static_cast<std::size_t>(features_.rows()) != n || flipped_.size() != n || origin_.size() != n) {
    throw ArgumentError("dataset columns have inconsistent lengths");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (labels_[i] != 1 && labels_[i] != -1) throw ArgumentError("labels must be -1 or +1");
    if (origin_[i] != 1 && origin_[i] != -1) throw ArgumentError("origin class must be -1 or +1");
  }
  if (!features_.allFinite()) throw ArgumentError("features must be finite");
  if (domain_ == FeatureDomain::unit_cube && n > 0 &&
      (features_.minCoeff() < 0.0 || features_.maxCoeff() > 1.0)) {
    throw ArgumentError("unit-cube dataset has a coordinate outside [0, 1]");
  }
}

std::size_t LabeledDataset::count_label(int y) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), y));
}

LabeledDataset LabeledDataset::subset(std::span<const std::size_t> indices) const {
  Eigen::MatrixXd f(static_cast<Eigen::Index>(indices.size()), dim());
  std::vector<int> labels;
  std::vector<bool> flipped;
  std::vector<int> origin;
  labels.reserve(indices.size());
  Eigen::Index row = 0;
  for (std::size_t i : indices) {
    if (i >= size()) throw ArgumentError("subset index out of range");
    f.row(row++) = features_.row(static_cast<Eigen::Index>(i));
    labels.push_back(labels_[i]);
    flipped.push_back(flipped_[i]);
    origin.push_back(origin_[i]);
  }
  return LabeledDataset(std::move(f), std::move(labels), std::move(flipped), std::move(origin), domain_);
}

LabeledDataset LabeledDataset::with_bias() const {
  Eigen::MatrixXd f(features_.rows(), features_.cols() + 1);
  f.leftCols(features_.cols()) = features_;
  f.col(features_.cols()).setOnes();
  return LabeledDataset(std::move(f), labels_, flipped_, origin_, domain_);
}

LabeledDataset LabeledDataset::relabeled(std::vector<int> labels) const {
  if (labels.size() != labels_.size()) throw ArgumentError("relabel length mismatch");
  std::vector<bool> flipped(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) flipped[i] = labels[i] != origin_[i];
  return LabeledDataset(features_, std::move(labels), std::move(flipped), origin_, domain_);
}

Eigen::MatrixXd LabeledDataset::second_moment() const {
  if (empty()) throw ArgumentError("dataset is empty");
  return features_.transpose() * features_ / static_cast<double>(size());
}

double soft_classifier(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) {
  if (theta.size() != x.size()) throw ArgumentError("dimension mismatch in soft_classifier");
  return sigmoid(theta.dot(x));
}

double gradient_factor(const Alpha& alpha, const Eigen::VectorXd& theta, const Eigen::VectorXd& x, int y) {
  // -y g(yx)^{1-1/a} (1 - g(yx))
  const double g = soft_classifier(theta, static_cast<double>(y) * x);
  return -static_cast<double>(y) * std::pow(g, alpha.exponent()) * (1.0 - g);
}

double hessian_factor(const Alpha& alpha, const Eigen::VectorXd& theta, const Eigen::VectorXd& x, int y) {
  // g(yx)^{1-1/a} g(-yx) (g(yx) - (1 - 1/a) g(-yx))
  const Eigen::VectorXd yx = static_cast<double>(y) * x;
  const double g = soft_classifier(theta, yx);
  const double g_neg = soft_classifier(theta, -yx);
  const double k = alpha.exponent();
  return std::pow(g, k) * g_neg * (g - k * g_neg);
}

double hessian_factor_factored(const Alpha& alpha, const Eigen::VectorXd& theta,
                               const Eigen::VectorXd& x, int y) {
  const double z = static_cast<double>(y) * theta.dot(x);
  return margin_loss_second_derivative_factored(alpha, z);
}

Eigen::VectorXd margins(const Eigen::VectorXd& theta, const LabeledDataset& data) {
  require_dim(theta, data);
  Eigen::VectorXd z = data.features() * theta;
  const auto labels = data.labels();
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] *= labels[static_cast<std::size_t>(i)];
  return z;
}

double empirical_risk(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data) {
  require_nonempty(data);
  const Eigen::VectorXd z = margins(theta, data);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) sum += margin_loss(alpha, z[i]);
  return sum / static_cast<double>(data.size());
}

Eigen::VectorXd risk_gradient(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data) {
  require_nonempty(data);
  const Eigen::VectorXd z = margins(theta, data);
  const auto labels = data.labels();
  // grad = mean_i l~'(z_i) y_i x_i
  Eigen::VectorXd weights(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    weights[i] = margin_loss_derivative(alpha, z[i]) * labels[static_cast<std::size_t>(i)];
  }
  return data.features().transpose() * weights / static_cast<double>(data.size());
}

Eigen::MatrixXd risk_hessian(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data) {
  require_nonempty(data);
  const Eigen::VectorXd z = margins(theta, data);
  Eigen::VectorXd weights(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) weights[i] = margin_loss_second_derivative(alpha, z[i]);
  const auto& x = data.features();
  Eigen::MatrixXd h = x.transpose() * weights.asDiagonal() * x / static_cast<double>(data.size());
  return 0.5 * (h + h.transpose());
}

RiskReport evaluate_risk(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data,
                         bool with_hessian) {
  RiskReport report;
  report.risk = empirical_risk(alpha, theta, data);
  report.gradient = risk_gradient(alpha, theta, data);
  report.gradient_norm = report.gradient.norm();
  if (with_hessian) report.hessian_min_eig = min_eigenvalue(risk_hessian(alpha, theta, data));
  return report;
}

RiskEstimate risk_estimate(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data) {
  require_nonempty(data);
  const Eigen::VectorXd z = margins(theta, data);
  const auto n = static_cast<double>(data.size());
  double mean = 0.0;
  double m2 = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double v = margin_loss(alpha, z[i]);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double var = data.size() > 1 ? m2 / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

double gradient_standard_error(const Alpha& alpha, const Eigen::VectorXd& theta, const LabeledDataset& data) {
  require_nonempty(data);
  if (data.size() < 2) return 0.0;
  const Eigen::VectorXd z = margins(theta, data);
  const auto labels = data.labels();
  const auto& x = data.features();
  const Eigen::VectorXd mean = risk_gradient(alpha, theta, data);
  double ss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double w = margin_loss_derivative(alpha, z[i]) * labels[static_cast<std::size_t>(i)];
    ss += (w * x.row(i).transpose() - mean).squaredNorm();
  }
  const auto n = static_cast<double>(data.size());
  return std::sqrt(ss / (n - 1.0) / n);
}

double randomized_error(const Eigen::VectorXd& theta, const LabeledDataset& data) {
  return empirical_risk(Alpha::infinity(), theta, data);
}

double strong_convexity_modulus(const Alpha& alpha, double r_sqrt_d) {
  if (alpha.is_infinite() || alpha.value() > 1.0 + kLogLossBand) {
    throw ArgumentError("strong_convexity_modulus requires alpha <= 1; use small_radius_modulus");
  }
  if (!(r_sqrt_d > 0.0)) throw ArgumentError("radius must be positive");
  // sigma(R)^{1-1/a} (sigma'(R) - (1 - 1/a) sigma(-R)^2)
  const double k = alpha.exponent();
  const double s_pos = sigmoid(r_sqrt_d);
  const double s_neg = sigmoid(-r_sqrt_d);
  return std::pow(s_pos, k) * (s_pos * s_neg - k * s_neg * s_neg);
}

double small_radius_alpha_limit(double r_sqrt_d) {
  if (!(r_sqrt_d > 0.0)) throw ArgumentError("radius must be positive");
  return 1.0 / (std::exp(2.0 * r_sqrt_d) - std::exp(r_sqrt_d));
}

double small_radius_modulus(const Alpha& alpha, double r_sqrt_d) {
  if (!(r_sqrt_d > 0.0)) throw ArgumentError("radius must be positive");
  if (!(r_sqrt_d < std::asinh(0.5))) {
    throw ArgumentError("outside small-radius regime: r*sqrt(d) = " + std::to_string(r_sqrt_d) +
                        " is not below asinh(1/2)");
  }
  const double limit = small_radius_alpha_limit(r_sqrt_d);
  if (alpha.is_infinite() || alpha.value() > limit) {
    throw ArgumentError("outside small-radius regime: alpha exceeds " + std::to_string(limit));
  }
  // sigma(-R)^{3-1/a} (1 - e^R + e^{-R} / a)
  const double inv = alpha.inverse();
  return std::pow(sigmoid(-r_sqrt_d), 3.0 - inv) *
         (1.0 - std::exp(r_sqrt_d) + inv * std::exp(-r_sqrt_d));
}

double theta_lipschitz_constant(const Alpha& alpha, double r, int d) {
  if (!(r > 0.0) || d <= 0) throw ArgumentError("radius and dimension must be positive");
  const double root_d = std::sqrt(static_cast<double>(d));
  return root_d * margin_lipschitz_constant(alpha, r * root_d);
}

double alpha_lipschitz_risk(const Eigen::VectorXd& theta) {
  const double s = softplus(theta.norm() * std::sqrt(static_cast<double>(theta.size())));
  return 0.5 * s * s;
}

double alpha_lipschitz_gradient(const Eigen::VectorXd& theta) {
  const double root_d = std::sqrt(static_cast<double>(theta.size()));
  const double m = theta.norm() * root_d;
  return root_d * softplus(m) * sigmoid(m);
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace alpha_lab
