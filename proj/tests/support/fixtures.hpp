// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Random datasets and parameters for property tests.

#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "alpha_lab/logistic.hpp"

namespace fixture {

/// n samples uniform in [0, 1]^d with random labels.
inline alpha_lab::LabeledDataset random_cube_dataset(std::mt19937_64& rng, std::size_t n, Eigen::Index d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), d);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), j) = u(rng);
    y[i] = coin(rng) ? 1 : -1;
  }
  return alpha_lab::LabeledDataset(std::move(x), std::move(y));
}

/// Uniform point in the ball of radius r.
inline Eigen::VectorXd random_in_ball(std::mt19937_64& rng, Eigen::Index d, double r) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = normal(rng);
  return v / v.norm() * r * std::pow(u(rng), 1.0 / static_cast<double>(d));
}

}  // namespace fixture
