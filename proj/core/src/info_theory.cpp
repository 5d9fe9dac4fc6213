// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "alpha_lab/info_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace alpha_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ||v||_alpha for a non-negative vector, factoring out the maximum so that
// large alpha neither underflows nor overflows.
template <typename Vec>
double alpha_norm(const Vec& v, double a) {
  const double m = v.maxCoeff();
  if (m <= 0.0) return 0.0;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) s += std::pow(v[i] / m, a);
  }
  return m * std::pow(s, 1.0 / a);
}

double xlogx(double v) { return v > 0.0 ? v * std::log(v) : 0.0; }

}  // namespace

JointPmf::JointPmf(Eigen::MatrixXd table) : table_(std::move(table)) {
  if (table_.rows() == 0 || table_.cols() == 0) {
    throw ArgumentError("joint pmf needs a non-empty alphabet");
  }
  if ((table_.array() < 0.0).any() || !table_.allFinite()) {
    throw ArgumentError("joint pmf entries must be finite and non-negative");
  }
  const double total = table_.sum();
  if (std::abs(total - 1.0) > ProbVector::kRenormalizeTolerance) {
    throw ArgumentError("joint pmf sums to " + std::to_string(total));
  }
  table_ /= total;
}

ProbVector JointPmf::posterior(Eigen::Index x) const {
  const double px = marginal(x);
  if (!(px > 0.0)) throw ArgumentError("posterior of a zero-mass x symbol");
  std::vector<double> masses(static_cast<std::size_t>(y_size()));
  for (Eigen::Index y = 0; y < y_size(); ++y) masses[static_cast<std::size_t>(y)] = table_(x, y) / px;
  return ProbVector(std::move(masses));
}

Eta::Eta(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ArgumentError("eta must lie in [0, 1], got " + std::to_string(value));
  }
}

double shannon_entropy(const ProbVector& p) {
  double h = 0.0;
  for (double m : p.masses()) h -= xlogx(m);
  return h;
}

double arimoto_conditional_entropy(const JointPmf& joint, const Alpha& alpha) {
  const auto& t = joint.table();
  if (alpha.is_infinite()) {
    double s = 0.0;
    for (Eigen::Index x = 0; x < t.rows(); ++x) s += t.row(x).maxCoeff();
    return -std::log(s);
  }
  if (alpha.is_log_loss()) {
    double h = 0.0;
    for (Eigen::Index x = 0; x < t.rows(); ++x) {
      const double px = t.row(x).sum();
      if (px <= 0.0) continue;
      for (Eigen::Index y = 0; y < t.cols(); ++y) h -= xlogx(t(x, y)) - t(x, y) * std::log(px);
    }
    return std::max(h, 0.0);
  }
  const double a = alpha.value();
  double s = 0.0;
  for (Eigen::Index x = 0; x < t.rows(); ++x) {
    const Eigen::VectorXd row = t.row(x).transpose();
    if (row.sum() <= 0.0) continue;
    s += alpha_norm(row, a);
  }
  return std::max(a / (1.0 - a) * std::log(s), 0.0);
}

double minimal_alpha_risk(const JointPmf& joint, const Alpha& alpha) {
  const auto& t = joint.table();
  if (alpha.is_infinite()) {
    double s = 0.0;
    for (Eigen::Index x = 0; x < t.rows(); ++x) s += t.row(x).maxCoeff();
    return std::max(1.0 - s, 0.0);
  }
  const double h = arimoto_conditional_entropy(joint, alpha);
  if (alpha.is_log_loss()) return h;
  // (a/(a-1)) (1 - exp(((1-a)/a) H)) = -expm1(-k H) / k,  k = (a-1)/a
  const double k = alpha.exponent();
  return -std::expm1(-k * h) / k;
}

ProbVector tilt_posterior(const ProbVector& p, const Alpha& alpha) {
  const auto masses = p.masses();
  const double top = *std::max_element(masses.begin(), masses.end());
  std::vector<double> out(masses.size(), 0.0);
  if (alpha.is_infinite()) {
    const auto ties = static_cast<double>(std::count(masses.begin(), masses.end(), top));
    for (std::size_t i = 0; i < masses.size(); ++i) out[i] = masses[i] == top ? 1.0 / ties : 0.0;
    return ProbVector(std::move(out));
  }
  if (alpha.is_log_loss()) return p;
  double total = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    out[i] = masses[i] > 0.0 ? std::pow(masses[i] / top, alpha.value()) : 0.0;
    total += out[i];
  }
  for (double& v : out) v /= total;
  return ProbVector(std::move(out));
}

double conditional_risk(const Eta& eta, double f, const Alpha& alpha) {
  const double e = eta.value();
  double risk = 0.0;
  if (e > 0.0) risk += e * margin_loss(alpha, f);
  if (e < 1.0) risk += (1.0 - e) * margin_loss(alpha, -f);
  return risk;
}

double min_conditional_risk(const Eta& eta, const Alpha& alpha) {
  const double e = eta.value();
  if (alpha.is_infinite()) return std::min(e, 1.0 - e);
  if (alpha.is_log_loss()) return -xlogx(e) - xlogx(1.0 - e);
  const Eigen::Vector2d v(e, 1.0 - e);
  const double log_norm = std::log(alpha_norm(v, alpha.value()));
  const double k = alpha.exponent();
  return -std::expm1(log_norm) / k;
}

double optimal_classifier(const Eta& eta, const Alpha& alpha) {
  const double e = eta.value();
  if (alpha.is_infinite()) {
    if (e == 0.5) return 0.0;
    return e > 0.5 ? kInf : -kInf;
  }
  const double logit = inverse_sigmoid(e);
  if (std::isinf(logit)) return logit;
  return alpha.value() * logit;
}

}  // namespace alpha_lab
