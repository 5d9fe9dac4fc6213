// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Alpha-loss in probabilistic and margin form, its derivatives in the margin,
// the sigmoid link, and the Lipschitz / supremum constants derived from it.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "alpha_lab/alpha.hpp"

namespace alpha_lab {

/// Finite probability mass function. Construction renormalizes when the total
/// mass drifts from 1 by less than 1e-9 and rejects anything further off.
class ProbVector {
 public:
  static constexpr double kRenormalizeTolerance = 1e-9;

  explicit ProbVector(std::vector<double> masses);

  std::size_t size() const noexcept { return masses_.size(); }
  double operator[](std::size_t i) const { return masses_[i]; }
  std::span<const double> masses() const noexcept { return masses_; }

  /// Binary soft prediction (P(y=-1), P(y=+1)) = (1 - p, p).
  static ProbVector binary(double p_positive);

 private:
  std::vector<double> masses_;
};

/// Numerically stable log(1 + e^x).
double softplus(double x) noexcept;

double sigmoid(double z) noexcept;

/// log(p / (1 - p)); returns -inf at p = 0 and +inf at p = 1.
/// Throws ArgumentError outside [0, 1].
double inverse_sigmoid(double p);

/// Alpha-loss of a label given the probability the prediction assigns to it.
/// Throws DomainError when p == 0 and alpha <= 1 (the loss is infinite).
double alpha_loss(const Alpha& alpha, double label_probability);

/// Alpha-loss of `label` under the soft prediction `p`.
double alpha_loss(const Alpha& alpha, std::size_t label, const ProbVector& p);

/// Margin-based alpha-loss; z may be +-inf.
double margin_loss(const Alpha& alpha, double z) noexcept;

/// First and second derivative of margin_loss with respect to z.
double margin_loss_derivative(const Alpha& alpha, double z) noexcept;
double margin_loss_second_derivative(const Alpha& alpha, double z) noexcept;

/// Same second derivative written with the e^{-z} factorisation
/// sigma(z)^{2-1/a} sigma(-z) (1 - (1 - 1/a) e^{-z}); kept as a cross-check.
double margin_loss_second_derivative_factored(const Alpha& alpha, double z) noexcept;

/// |l^a(y, sigma-induced prediction) - l~^a(y f)| for y in {-1, +1}.
double correspondence_gap(const Alpha& alpha, int y, double f_value);

/// Lipschitz constant of the margin loss on [-r0, r0].
/// alpha <= 1 uses the endpoint slope; alpha > 1 uses the global slope maximum.
double margin_lipschitz_constant(const Alpha& alpha, double r0);

/// sigma(r0) sigma(-r0)^{1 - 1/alpha}: slope of the loss at z = -r0.
double margin_lipschitz_endpoint_branch(const Alpha& alpha, double r0);
/// ((a-1)/(2a-1))^{1-1/a} (a/(2a-1)): supremum of |l~'| over the real line for a >= 1.
double margin_lipschitz_global_branch(const Alpha& alpha);

/// Supremum of the margin loss over [-r, r], i.e. its value at z = -r.
double loss_sup_bound(const Alpha& alpha, double r_sqrt_d);

}  // namespace alpha_lab
