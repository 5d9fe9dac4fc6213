// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Full-batch gradient-descent training, Bayes references for Gaussian
// mixtures, and the seeded multi-run robustness experiment.

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "alpha_lab/alpha.hpp"
#include "alpha_lab/gmm.hpp"
#include "alpha_lab/logistic.hpp"

namespace alpha_lab {

struct TrainConfig {
  Alpha alpha{1.0};
  double learning_rate = 0.01;
  double optimality = 1e-4;
  std::int64_t max_iterations = 200000;
  double radius = 10.0;  // infinity disables the projection
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Termination { converged, max_iterations };

struct TrainResult {
  Eigen::VectorXd theta;
  std::int64_t iterations = 0;
  Termination termination = Termination::max_iterations;
  double stationarity = 0.0;  // ||theta - P(theta - lr grad)|| / lr at the returned point
  double risk = 0.0;
};

/// theta <- P(theta - lr grad R_alpha(theta)) from theta = 0, stopping once the
/// projected-gradient norm is at most config.optimality (the plain gradient
/// norm in the interior). Throws NumericError with the iterate on NaN.
TrainResult train_gd(const LabeledDataset& data, const TrainConfig& config);

/// Linear rule sign(<direction, x> + offset) with a unit direction.
struct BayesPredictor {
  Eigen::VectorXd direction;
  double offset = 0.0;
};

/// Exact misclassification probability of sign(<w, x> + b) (ties count as +1)
/// under the mixture.
double zero_one_risk(const GmmSpec& spec, const Eigen::VectorXd& w, double b);

/// Closed-form discriminant for shared covariances; angle grid search
/// otherwise (d = 2 only). Throws ArgumentError for a singular shared covariance.
BayesPredictor bayes_direction(const GmmSpec& spec);
/// Best linear rule over an angle grid (degrees) with the offset optimised per angle. d = 2.
BayesPredictor bayes_direction_grid(const GmmSpec& spec, double resolution_degrees = 0.25);

/// Bayes 0-1 risk: exact linear rule for shared covariances, grid integration
/// with the given step otherwise (d = 2).
double bayes_risk(const GmmSpec& spec, double grid_step = 0.01);

/// Angle in degrees between two vectors, in [0, 180].
double angle_degrees(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// |acc_alpha - acc_log| / acc_log in percent.
double relative_accuracy_gain(double accuracy_alpha, double accuracy_log);

enum class Averaging { mean, median };

struct ExperimentConfig {
  TrainConfig train;             // alpha is overridden per arm
  std::size_t runs = 100;
  std::uint64_t seed = 0;
  std::size_t pool_size = 1000;  // samples drawn per run before corruption
  std::size_t test_per_class = 1000;
  bool bias = false;             // append a constant-1 feature
  Averaging averaging = Averaging::mean;
};

struct RunRecord {
  std::size_t run = 0;
  Alpha alpha{1.0};
  Eigen::VectorXd theta;
  double accuracy = 0.0;
  double accuracy_negative = 0.0;
  double accuracy_positive = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
};

struct ArmSummary {
  Alpha alpha{1.0};
  Eigen::VectorXd averaged_theta;
  double angle_to_bayes = 0.0;  // degrees
  double accuracy = 0.0;        // mean balanced test accuracy over runs
  double accuracy_negative = 0.0;
  double accuracy_positive = 0.0;
  double relative_gain = 0.0;  // percent, against the alpha = 1 arm
  int gain_sign = 0;           // sign of acc_alpha - acc_log
  std::size_t converged_runs = 0;
};

struct ExperimentSummary {
  std::size_t run_count = 0;
  BayesPredictor bayes;
  Eigen::VectorXd bayes_normal;  // compared against averaged_theta
  std::vector<ArmSummary> arms;  // an alpha = 1 arm is appended when missing
  std::vector<RunRecord> runs;   // ordered by (run, arm)
};

/// Corruptions of the margin-geometry study: (2, 98) class imbalance, a
/// balanced (50, 50) subsample with 0.2 flips of class -1, or a clean (50, 50) subsample.
enum class Scenario { imbalance, noise, clean };

CorruptionSpec scenario_corruption(Scenario scenario);
/// Accepts "imbalance", "noise" and "clean"; throws ArgumentError otherwise.
Scenario parse_scenario(std::string_view name);
const char* to_string(Scenario scenario) noexcept;

/// For each run: draw a pool from the mixture, corrupt it, train every alpha
/// and score on a clean balanced test set. Angles compare the averaged
/// parameter with the Bayes normal (direction, plus offset in bias mode).
ExperimentSummary run_synthetic_experiment(const GmmSpec& spec, const CorruptionSpec& corruption,
                                           std::span<const Alpha> alphas, const ExperimentConfig& config);

}  // namespace alpha_lab
