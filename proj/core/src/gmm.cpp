// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "alpha_lab/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "alpha_lab/parallel.hpp"

namespace alpha_lab {

namespace {

// A with A A^T = cov; eigen-based so that singular covariances are allowed.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  const Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal();
}

void check_matrix(const Eigen::MatrixXd& cov, Eigen::Index d, const char* which) {
  const std::string name(which);
  if (cov.rows() != d || cov.cols() != d) throw ArgumentError(name + " covariance has the wrong shape");
  if (!cov.allFinite()) throw ArgumentError(name + " covariance has non-finite entries");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > GmmSpec::kSymmetryTolerance) {
    throw ArgumentError(name + " covariance is not symmetric");
  }
  if (min_eigenvalue(cov) < -GmmSpec::kPsdTolerance) {
    throw ArgumentError(name + " covariance is not positive semidefinite");
  }
}

Eigen::Vector2d vec2(double a, double b) { return Eigen::Vector2d(a, b); }

Eigen::Matrix2d mat2(double a, double b, double c, double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return m;
}

}  // namespace

bool GmmSpec::shared_covariance() const {
  return cov_negative.rows() == cov_positive.rows() && cov_negative.cols() == cov_positive.cols() &&
         (cov_negative - cov_positive).cwiseAbs().maxCoeff() <= kSymmetryTolerance;
}

void GmmSpec::validate() const {
  if (!(prior_negative > 0.0 && prior_negative < 1.0)) throw ArgumentError("class prior must lie in (0, 1)");
  const Eigen::Index d = mean_negative.size();
  if (d == 0 || mean_positive.size() != d) throw ArgumentError("class means must share a positive dimension");
  if (!mean_negative.allFinite() || !mean_positive.allFinite()) throw ArgumentError("class means must be finite");
  check_matrix(cov_negative, d, "negative-class");
  check_matrix(cov_positive, d, "positive-class");
}

namespace gmm_presets {

GmmSpec symmetric() {
  return {0.5, vec2(-1.0, -1.0), vec2(1.0, 1.0), Eigen::Matrix2d::Identity(), Eigen::Matrix2d::Identity()};
}

GmmSpec skewed_landscape() {
  return {0.12, vec2(-0.18, 1.49), vec2(-0.01, 0.16), mat2(3.20, -2.02, -2.02, 2.71),
          mat2(4.19, 1.27, 1.27, 0.90)};
}

GmmSpec shared_covariance() {
  const Eigen::Matrix2d cov = mat2(1.38, 0.55, 0.55, 2.18);
  return {0.5, vec2(-0.91, 0.50), vec2(-0.27, 0.20), cov, cov};
}

}  // namespace gmm_presets

FeatureMap::FeatureMap(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() == 0 || lower_.size() != upper_.size()) throw ArgumentError("feature box has bad shape");
  if (!((upper_ - lower_).array() > 0.0).all()) throw ArgumentError("feature box must have positive width");
}

FeatureMap FeatureMap::symmetric_box(Eigen::Index dim, double half_width) {
  return FeatureMap(Eigen::VectorXd::Constant(dim, -half_width), Eigen::VectorXd::Constant(dim, half_width));
}

Eigen::VectorXd FeatureMap::apply(const Eigen::VectorXd& x) const {
  if (x.size() != lower_.size()) throw ArgumentError("feature map dimension mismatch");
  return ((x - lower_).array() / (upper_ - lower_).array()).cwiseMax(0.0).cwiseMin(1.0).matrix();
}

Eigen::MatrixXd FeatureMap::apply_rows(const Eigen::MatrixXd& rows) const {
  Eigen::MatrixXd out(rows.rows(), rows.cols());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) out.row(i) = apply(rows.row(i).transpose()).transpose();
  return out;
}

namespace {

LabeledDataset draw(const GmmSpec& spec, const std::vector<int>& labels, std::mt19937_64& rng,
                    const std::optional<FeatureMap>& map) {
  const Eigen::Index d = spec.dim();
  const Eigen::MatrixXd factor_neg = covariance_factor(spec.cov_negative);
  const Eigen::MatrixXd factor_pos = covariance_factor(spec.cov_positive);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd features(static_cast<Eigen::Index>(labels.size()), d);
  Eigen::VectorXd z(d);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) z[j] = normal(rng);
    const bool neg = labels[i] < 0;
    features.row(static_cast<Eigen::Index>(i)) =
        (spec.mean(labels[i]) + (neg ? factor_neg : factor_pos) * z).transpose();
  }
  if (map) return LabeledDataset(map->apply_rows(features), labels, FeatureDomain::unit_cube);
  return LabeledDataset(std::move(features), labels, FeatureDomain::raw);
}

}  // namespace

LabeledDataset sample_gmm(const GmmSpec& spec, std::size_t n, std::uint64_t seed,
                          const std::optional<FeatureMap>& map) {
  spec.validate();
  std::mt19937_64 rng(mix_seed(seed, 0));
  std::bernoulli_distribution negative(spec.prior_negative);
  std::vector<int> labels(n);
  for (auto& y : labels) y = negative(rng) ? -1 : 1;
  return draw(spec, labels, rng, map);
}

LabeledDataset sample_gmm_by_class(const GmmSpec& spec, std::size_t n_negative, std::size_t n_positive,
                                   std::uint64_t seed, const std::optional<FeatureMap>& map) {
  spec.validate();
  std::mt19937_64 rng(mix_seed(seed, 1));
  std::vector<int> labels(n_negative, -1);
  labels.insert(labels.end(), n_positive, 1);
  return draw(spec, labels, rng, map);
}

void CorruptionSpec::validate() const {
  if (!(flip_negative >= 0.0 && flip_negative <= 1.0) || !(flip_positive >= 0.0 && flip_positive <= 1.0)) {
    throw ArgumentError("flip probabilities must lie in [0, 1]");
  }
  if (class_counts && class_counts->first == 0 && class_counts->second == 0) {
    throw ArgumentError("at least one class count must be positive");
  }
}

LabeledDataset corrupt(const LabeledDataset& data, const CorruptionSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(mix_seed(seed, 2));
  std::vector<std::size_t> keep;
  if (spec.class_counts) {
    for (int y : {-1, 1}) {
      const std::size_t want = y < 0 ? spec.class_counts->first : spec.class_counts->second;
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.label(i) == y) members.push_back(i);
      }
      if (members.size() < want) {
        throw ArgumentError("class " + std::to_string(y) + " has " + std::to_string(members.size()) +
                            " samples, " + std::to_string(want) + " requested");
      }
      // partial Fisher-Yates
      for (std::size_t i = 0; i < want; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, members.size() - 1);
        std::swap(members[i], members[pick(rng)]);
      }
      keep.insert(keep.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(want));
    }
    std::sort(keep.begin(), keep.end());
  } else {
    keep.resize(data.size());
    std::iota(keep.begin(), keep.end(), std::size_t{0});
  }
  LabeledDataset base = data.subset(keep);
  std::uniform_real_distribution<double> unit;
  std::vector<int> labels(base.labels().begin(), base.labels().end());
  std::vector<bool> flipped(base.size());
  std::vector<int> origin(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double p = labels[i] < 0 ? spec.flip_negative : spec.flip_positive;
    origin[i] = base.origin_class(i);
    flipped[i] = base.flipped(i);
    if (unit(rng) < p) {
      labels[i] = -labels[i];
      flipped[i] = !flipped[i];
    }
  }
  return LabeledDataset(base.features(), std::move(labels), std::move(flipped), std::move(origin), base.domain());
}

}  // namespace alpha_lab
