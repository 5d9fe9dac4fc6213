// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Two-class Gaussian mixtures, the fixed affine map into the unit cube, and
// class-imbalance / label-flip corruption of labelled datasets.

#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "alpha_lab/logistic.hpp"

namespace alpha_lab {

struct GmmSpec {
  double prior_negative = 0.5;  // P[Y = -1]
  Eigen::VectorXd mean_negative;
  Eigen::VectorXd mean_positive;
  Eigen::MatrixXd cov_negative;
  Eigen::MatrixXd cov_positive;

  static constexpr double kSymmetryTolerance = 1e-12;
  static constexpr double kPsdTolerance = 1e-10;

  Eigen::Index dim() const noexcept { return mean_negative.size(); }
  double prior(int y) const noexcept { return y < 0 ? prior_negative : 1.0 - prior_negative; }
  const Eigen::VectorXd& mean(int y) const noexcept { return y < 0 ? mean_negative : mean_positive; }
  const Eigen::MatrixXd& cov(int y) const noexcept { return y < 0 ? cov_negative : cov_positive; }
  bool shared_covariance() const;

  /// Throws ArgumentError on shape mismatch, a prior outside (0, 1), an
  /// asymmetric covariance or one with an eigenvalue below -1e-10.
  void validate() const;
};

/// Presets used by the experiments and the tests.
namespace gmm_presets {
/// Equal priors, means -(1,1) and (1,1), identity covariances.
GmmSpec symmetric();
/// P[Y=-1] = 0.12 with unequal full covariances (single-basin landscape study).
GmmSpec skewed_landscape();
/// Equal priors with one shared covariance (saturation study).
GmmSpec shared_covariance();
}  // namespace gmm_presets

/// Affine map of the box [lower, upper] onto [0, 1]^d; points outside are clipped.
class FeatureMap {
 public:
  FeatureMap(Eigen::VectorXd lower, Eigen::VectorXd upper);
  /// The box [-half_width, half_width]^dim.
  static FeatureMap symmetric_box(Eigen::Index dim, double half_width = 6.0);

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& rows) const;
  const Eigen::VectorXd& lower() const noexcept { return lower_; }
  const Eigen::VectorXd& upper() const noexcept { return upper_; }

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

/// n samples with labels drawn from the prior. Raw coordinates unless a map is
/// given, in which case the dataset lies in the unit cube.
LabeledDataset sample_gmm(const GmmSpec& spec, std::size_t n, std::uint64_t seed,
                          const std::optional<FeatureMap>& map = std::nullopt);

/// Exactly n_negative samples of class -1 followed by n_positive of class +1.
LabeledDataset sample_gmm_by_class(const GmmSpec& spec, std::size_t n_negative, std::size_t n_positive,
                                   std::uint64_t seed, const std::optional<FeatureMap>& map = std::nullopt);

struct CorruptionSpec {
  double flip_negative = 0.0;  // probability of flipping a class -1 label
  double flip_positive = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> class_counts;  // (negative, positive)
  bool normalize_features = false;

  void validate() const;
  bool is_identity() const noexcept { return flip_negative == 0.0 && flip_positive == 0.0 && !class_counts; }
};

/// Subsamples each class to the requested count (original order kept), then
/// flips labels independently per class. Throws ArgumentError when a class has
/// fewer samples than requested.
LabeledDataset corrupt(const LabeledDataset& data, const CorruptionSpec& spec, std::uint64_t seed);

}  // namespace alpha_lab
