// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "alpha_lab/loss.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace alpha_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (softplus(-z), softplus(z)) with one exp and one log1p.
std::pair<double, double> softplus_pair(double z) noexcept {
  if (z >= 0.0) {
    const double neg = std::log1p(std::exp(-z));
    return {neg, z + neg};
  }
  const double pos = std::log1p(std::exp(z));
  return {pos - z, pos};
}

}  // namespace

ProbVector::ProbVector(std::vector<double> masses) : masses_(std::move(masses)) {
  if (masses_.empty()) throw ArgumentError("probability vector must be non-empty");
  for (double m : masses_) {
    if (!(m >= 0.0) || m > 1.0 + kRenormalizeTolerance) {
      throw ArgumentError("probability mass outside [0, 1]: " + std::to_string(m));
    }
  }
  const double total = std::accumulate(masses_.begin(), masses_.end(), 0.0);
  if (std::abs(total - 1.0) > kRenormalizeTolerance) {
    throw ArgumentError("probability masses sum to " + std::to_string(total));
  }
  if (total != 1.0) {
    for (double& m : masses_) m /= total;
  }
}

ProbVector ProbVector::binary(double p_positive) {
  return ProbVector({1.0 - p_positive, p_positive});
}

double softplus(double x) noexcept {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double inverse_sigmoid(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ArgumentError("inverse_sigmoid needs p in [0, 1], got " + std::to_string(p));
  }
  if (p == 0.0) return -kInf;
  if (p == 1.0) return kInf;
  return std::log(p) - std::log1p(-p);
}

double alpha_loss(const Alpha& alpha, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ArgumentError("label probability outside [0, 1]: " + std::to_string(p));
  }
  if (alpha.is_infinite()) return 1.0 - p;
  if (p == 0.0 && alpha.value() <= 1.0 + kLogLossBand) {
    throw DomainError("infinite loss: zero-probability label with alpha <= 1");
  }
  if (alpha.is_log_loss()) return -std::log(p);
  // (a/(a-1)) (1 - p^{1-1/a}) with k = 1 - 1/a = (a-1)/a
  const double k = alpha.exponent();
  if (p == 0.0) return 1.0 / k;
  return -std::expm1(k * std::log(p)) / k;
}

double alpha_loss(const Alpha& alpha, std::size_t label, const ProbVector& p) {
  if (label >= p.size()) {
    throw ArgumentError("label index " + std::to_string(label) + " out of range for " +
                        std::to_string(p.size()) + " labels");
  }
  return alpha_loss(alpha, p[label]);
}

double margin_loss(const Alpha& alpha, double z) noexcept {
  if (std::isnan(z)) return z;
  if (z == kInf) return 0.0;
  if (z == -kInf) {
    if (alpha.is_infinite()) return 1.0;
    if (alpha.value() <= 1.0 + kLogLossBand) return kInf;
    return 1.0 / alpha.exponent();
  }
  if (alpha.is_infinite()) return sigmoid(-z);
  const double sp = softplus(-z);
  if (alpha.is_log_loss()) return sp;
  // (a/(a-1)) (1 - (1 + e^{-z})^{1/a - 1}) evaluated as -expm1(-k sp) / k
  const double k = alpha.exponent();
  return -std::expm1(-k * sp) / k;
}

double margin_loss_derivative(const Alpha& alpha, double z) noexcept {
  if (std::isnan(z)) return z;
  if (z == kInf) return -0.0;
  const double k = alpha.exponent();
  if (z == -kInf) {
    if (k > 0.0) return -0.0;
    return k < 0.0 ? -kInf : -1.0;
  }
  // -(1 + e^{-z})^{1/a} e^z / (1 + e^z)^2 = -sigma(z)^{k} sigma(-z)
  const auto [sp_neg, sp_pos] = softplus_pair(z);
  return -std::exp(-k * sp_neg - sp_pos);
}

double margin_loss_second_derivative(const Alpha& alpha, double z) noexcept {
  if (std::isnan(z)) return z;
  if (std::isinf(z)) return 0.0;
  const double k = alpha.exponent();
  const auto [sp_neg, sp_pos] = softplus_pair(z);
  const double scale = std::exp(-k * sp_neg - sp_pos);
  return scale * (sigmoid(z) - k * sigmoid(-z));
}

double margin_loss_second_derivative_factored(const Alpha& alpha, double z) noexcept {
  const double k = alpha.exponent();
  const auto [sp_neg, sp_pos] = softplus_pair(z);
  const double scale = std::exp(-(1.0 + k) * sp_neg - sp_pos);
  return scale * (1.0 - k * std::exp(-z));
}

double correspondence_gap(const Alpha& alpha, int y, double f_value) {
  if (y != 1 && y != -1) throw ArgumentError("label must be -1 or +1");
  if (!std::isfinite(f_value)) throw ArgumentError("classification value must be finite");
  // soft prediction induced by the sigmoid, complements computed separately
  const double p_label = sigmoid(static_cast<double>(y) * f_value);
  const double prob_form = alpha_loss(alpha, p_label);
  const double margin_form = margin_loss(alpha, static_cast<double>(y) * f_value);
  return std::abs(prob_form - margin_form);
}

double margin_lipschitz_endpoint_branch(const Alpha& alpha, double r0) {
  if (!(r0 > 0.0)) throw ArgumentError("margin radius must be positive");
  return std::exp(-softplus(-r0) - alpha.exponent() * softplus(r0));
}

double margin_lipschitz_global_branch(const Alpha& alpha) {
  if (alpha.is_infinite()) return 0.25;
  if (alpha.is_log_loss()) return 1.0;
  const double a = alpha.value();
  if (a < 1.0) throw ArgumentError("global slope branch requires alpha >= 1");
  return std::pow((a - 1.0) / (2.0 * a - 1.0), alpha.exponent()) * (a / (2.0 * a - 1.0));
}

double margin_lipschitz_constant(const Alpha& alpha, double r0) {
  if (!(r0 > 0.0)) throw ArgumentError("margin radius must be positive");
  if (!alpha.is_infinite() && alpha.value() <= 1.0 + kLogLossBand) {
    return margin_lipschitz_endpoint_branch(alpha, r0);
  }
  return margin_lipschitz_global_branch(alpha);
}

double loss_sup_bound(const Alpha& alpha, double r_sqrt_d) {
  if (!(r_sqrt_d >= 0.0)) throw ArgumentError("radius must be non-negative");
  return margin_loss(alpha, -r_sqrt_d);
}

}  // namespace alpha_lab
