// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "alpha_lab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "alpha_lab/parallel.hpp"

namespace alpha_lab {

namespace {

double normal_cdf(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

// P[<w, X> + b >= 0] for X ~ N(mean, cov).
double prob_nonnegative(const Eigen::VectorXd& w, double b, const Eigen::VectorXd& mean,
                        const Eigen::MatrixXd& cov) {
  const double m = w.dot(mean) + b;
  const double var = w.dot(cov * w);
  if (var <= 0.0) return m >= 0.0 ? 1.0 : 0.0;
  return normal_cdf(m / std::sqrt(var));
}

// Minimises zero_one_risk over the offset for a fixed direction.
double best_offset(const GmmSpec& spec, const Eigen::VectorXd& w, double* risk_out) {
  double span = 0.0;
  for (int y : {-1, 1}) {
    span = std::max(span, std::abs(w.dot(spec.mean(y))) + 8.0 * std::sqrt(std::max(0.0, w.dot(spec.cov(y) * w))));
  }
  span = std::max(span, 1.0);
  constexpr int kScan = 400;
  double best_b = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double b = -span + 2.0 * span * i / kScan;
    const double r = zero_one_risk(spec, w, b);
    if (r < best) {
      best = r;
      best_b = b;
    }
  }
  // golden-section refinement within one scan cell either side
  const double cell = 2.0 * span / kScan;
  double lo = best_b - cell;
  double hi = best_b + cell;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = zero_one_risk(spec, w, x1);
  double f2 = zero_one_risk(spec, w, x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = zero_one_risk(spec, w, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = zero_one_risk(spec, w, x2);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_risk = zero_one_risk(spec, w, refined);
  if (refined_risk <= best) {
    best = refined_risk;
    best_b = refined;
  }
  if (risk_out) *risk_out = best;
  return best_b;
}

double gaussian_density(const Eigen::Vector2d& x, const Eigen::Vector2d& mean, const Eigen::Matrix2d& inv_cov,
                        double norm) {
  const Eigen::Vector2d d = x - mean;
  return norm * std::exp(-0.5 * d.dot(inv_cov * d));
}

std::string dump(const Eigen::VectorXd& v) {
  std::ostringstream out;
  out.precision(17);
  out << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << "]";
  return out.str();
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ArgumentError("learning rate must be positive");
  if (!(optimality > 0.0)) throw ArgumentError("optimality parameter must be positive");
  if (max_iterations < 1) throw ArgumentError("max_iterations must be positive");
  if (!(radius > 0.0)) throw ArgumentError("training radius must be positive");
}

TrainResult train_gd(const LabeledDataset& data, const TrainConfig& config) {
  config.validate();
  if (data.empty()) throw ArgumentError("cannot train on an empty dataset");
  const bool constrained = std::isfinite(config.radius);
  TrainResult out;
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(data.dim());
  for (std::int64_t it = 0;; ++it) {
    const Eigen::VectorXd g = risk_gradient(config.alpha, theta, data);
    if (!g.allFinite()) {
      throw NumericError("non-finite gradient at iteration " + std::to_string(it) + ", theta = " + dump(theta));
    }
    Eigen::VectorXd next = theta - config.learning_rate * g;
    if (constrained) next = ParamVector::project(next, config.radius);
    out.stationarity = (theta - next).norm() / config.learning_rate;
    if (out.stationarity <= config.optimality) {
      out.termination = Termination::converged;
      out.iterations = it;
      break;
    }
    if (it == config.max_iterations) {
      out.termination = Termination::max_iterations;
      out.iterations = it;
      break;
    }
    theta = std::move(next);
  }
  out.theta = std::move(theta);
  out.risk = empirical_risk(config.alpha, out.theta, data);
  return out;
}

double zero_one_risk(const GmmSpec& spec, const Eigen::VectorXd& w, double b) {
  if (w.size() != spec.dim()) throw ArgumentError("classifier dimension mismatch");
  const double err_neg = prob_nonnegative(w, b, spec.mean_negative, spec.cov_negative);
  const double err_pos = 1.0 - prob_nonnegative(w, b, spec.mean_positive, spec.cov_positive);
  return spec.prior_negative * err_neg + (1.0 - spec.prior_negative) * err_pos;
}

BayesPredictor bayes_direction(const GmmSpec& spec) {
  spec.validate();
  if (!spec.shared_covariance()) return bayes_direction_grid(spec);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(spec.cov_negative);
  if (ldlt.info() != Eigen::Success || min_eigenvalue(spec.cov_negative) <= 1e-12) {
    throw ArgumentError("shared covariance is singular");
  }
  const Eigen::VectorXd w = ldlt.solve(spec.mean_positive - spec.mean_negative);
  const double norm = w.norm();
  if (!(norm > 0.0)) throw ArgumentError("class means coincide; no Bayes direction");
  const double b = -0.5 * w.dot(spec.mean_positive + spec.mean_negative) +
                   std::log((1.0 - spec.prior_negative) / spec.prior_negative);
  return {w / norm, b / norm};
}

BayesPredictor bayes_direction_grid(const GmmSpec& spec, double resolution_degrees) {
  spec.validate();
  if (spec.dim() != 2) throw ArgumentError("angle grid search needs d = 2");
  if (!(resolution_degrees > 0.0)) throw ArgumentError("angle resolution must be positive");
  const auto steps = static_cast<int>(std::round(360.0 / resolution_degrees));
  BayesPredictor best;
  double best_risk = std::numeric_limits<double>::infinity();
  for (int i = 0; i < steps; ++i) {
    const double angle = i * resolution_degrees * std::numbers::pi / 180.0;
    const Eigen::Vector2d w(std::cos(angle), std::sin(angle));
    double risk = 0.0;
    const double b = best_offset(spec, w, &risk);
    if (risk < best_risk) {
      best_risk = risk;
      best = {w, b};
    }
  }
  return best;
}

double bayes_risk(const GmmSpec& spec, double grid_step) {
  spec.validate();
  if (spec.shared_covariance()) {
    const BayesPredictor p = bayes_direction(spec);
    return zero_one_risk(spec, p.direction, p.offset);
  }
  if (spec.dim() != 2) throw ArgumentError("grid integration of the Bayes risk needs d = 2");
  if (!(grid_step > 0.0)) throw ArgumentError("grid step must be positive");
  Eigen::Matrix2d inv[2];
  double norm[2];
  double reach = 0.0;
  for (int c = 0; c < 2; ++c) {
    const Eigen::Matrix2d cov = spec.cov(c == 0 ? -1 : 1);
    const double det = cov.determinant();
    if (!(det > 0.0)) throw ArgumentError("grid integration needs non-singular covariances");
    inv[c] = cov.inverse();
    norm[c] = spec.prior(c == 0 ? -1 : 1) / (2.0 * std::numbers::pi * std::sqrt(det));
    reach = std::max(reach, std::sqrt(cov.diagonal().maxCoeff()));
  }
  const Eigen::Vector2d lo = spec.mean_negative.cwiseMin(spec.mean_positive).array() - 8.0 * reach;
  const Eigen::Vector2d hi = spec.mean_negative.cwiseMax(spec.mean_positive).array() + 8.0 * reach;
  const Eigen::Vector2d m0 = spec.mean_negative;
  const Eigen::Vector2d m1 = spec.mean_positive;
  double total = 0.0;
  for (double x = lo[0] + 0.5 * grid_step; x < hi[0]; x += grid_step) {
    for (double y = lo[1] + 0.5 * grid_step; y < hi[1]; y += grid_step) {
      const Eigen::Vector2d p(x, y);
      total += std::min(gaussian_density(p, m0, inv[0], norm[0]), gaussian_density(p, m1, inv[1], norm[1]));
    }
  }
  return total * grid_step * grid_step;
}

double angle_degrees(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw ArgumentError("angle between vectors of different dimension");
  const double na = a.norm();
  const double nb = b.norm();
  if (!(na > 0.0) || !(nb > 0.0)) throw ArgumentError("angle with a zero vector");
  const double c = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
  return std::acos(c) * 180.0 / std::numbers::pi;
}

double relative_accuracy_gain(double accuracy_alpha, double accuracy_log) {
  if (!(accuracy_log > 0.0)) throw ArgumentError("reference accuracy must be positive");
  return std::abs(accuracy_alpha - accuracy_log) / accuracy_log * 100.0;
}

ExperimentSummary run_synthetic_experiment(const GmmSpec& spec, const CorruptionSpec& corruption,
                                           std::span<const Alpha> alphas, const ExperimentConfig& config) {
  spec.validate();
  corruption.validate();
  config.train.validate();
  if (config.runs < 1) throw ArgumentError("experiment needs at least one run");
  if (alphas.empty()) throw ArgumentError("experiment needs at least one alpha");
  if (config.test_per_class < 1) throw ArgumentError("test set needs samples of both classes");

  std::vector<Alpha> arms(alphas.begin(), alphas.end());
  if (std::none_of(arms.begin(), arms.end(), [](const Alpha& a) { return a.is_log_loss(); })) {
    arms.emplace_back(1.0);
  }
  const std::optional<FeatureMap> map =
      corruption.normalize_features ? std::optional<FeatureMap>(FeatureMap::symmetric_box(spec.dim()))
                                    : std::nullopt;

  ExperimentSummary summary;
  summary.run_count = config.runs;
  summary.bayes = bayes_direction(spec);
  {
    // Bayes rule in the coordinates the model sees.
    Eigen::VectorXd w = summary.bayes.direction;
    double b = summary.bayes.offset;
    if (map) {
      b += w.dot(map->lower());
      w = w.cwiseProduct(map->upper() - map->lower()).eval();
    }
    if (config.bias) {
      summary.bayes_normal.resize(w.size() + 1);
      summary.bayes_normal << w, b;
    } else {
      summary.bayes_normal = w;
    }
    summary.bayes_normal.normalize();
  }

  const std::size_t n_arms = arms.size();
  summary.runs.resize(config.runs * n_arms);
  parallel_for(config.runs, [&](std::size_t run) {
    const std::uint64_t run_seed = mix_seed(config.seed, run);
    const LabeledDataset pool = sample_gmm(spec, config.pool_size, mix_seed(run_seed, 0), map);
    LabeledDataset train = corrupt(pool, corruption, mix_seed(run_seed, 1));
    LabeledDataset test =
        sample_gmm_by_class(spec, config.test_per_class, config.test_per_class, mix_seed(run_seed, 2), map);
    if (config.bias) {
      train = train.with_bias();
      test = test.with_bias();
    }
    for (std::size_t a = 0; a < n_arms; ++a) {
      TrainConfig tc = config.train;
      tc.alpha = arms[a];
      tc.seed = run_seed;
      const TrainResult fit = train_gd(train, tc);
      const Eigen::VectorXd scores = test.features() * fit.theta;
      std::size_t correct[2] = {0, 0};
      std::size_t total[2] = {0, 0};
      for (std::size_t i = 0; i < test.size(); ++i) {
        const int y = test.label(i);
        const int predicted = scores[static_cast<Eigen::Index>(i)] >= 0.0 ? 1 : -1;
        const int c = y < 0 ? 0 : 1;
        ++total[c];
        if (predicted == y) ++correct[c];
      }
      RunRecord& rec = summary.runs[run * n_arms + a];
      rec.run = run;
      rec.alpha = arms[a];
      rec.theta = fit.theta;
      rec.accuracy_negative = static_cast<double>(correct[0]) / static_cast<double>(total[0]);
      rec.accuracy_positive = static_cast<double>(correct[1]) / static_cast<double>(total[1]);
      rec.accuracy = 0.5 * (rec.accuracy_negative + rec.accuracy_positive);
      rec.iterations = fit.iterations;
      rec.converged = fit.termination == Termination::converged;
    }
  });

  for (std::size_t a = 0; a < n_arms; ++a) {
    ArmSummary arm;
    arm.alpha = arms[a];
    const Eigen::Index d = summary.runs[a].theta.size();
    Eigen::MatrixXd thetas(static_cast<Eigen::Index>(config.runs), d);
    for (std::size_t run = 0; run < config.runs; ++run) {
      const RunRecord& rec = summary.runs[run * n_arms + a];
      thetas.row(static_cast<Eigen::Index>(run)) = rec.theta.transpose();
      arm.accuracy += rec.accuracy;
      arm.accuracy_negative += rec.accuracy_negative;
      arm.accuracy_positive += rec.accuracy_positive;
      if (rec.converged) ++arm.converged_runs;
    }
    const auto runs = static_cast<double>(config.runs);
    arm.accuracy /= runs;
    arm.accuracy_negative /= runs;
    arm.accuracy_positive /= runs;
    if (config.averaging == Averaging::mean) {
      arm.averaged_theta = thetas.colwise().mean().transpose();
    } else {
      arm.averaged_theta.resize(d);
      for (Eigen::Index j = 0; j < d; ++j) {
        std::vector<double> col(thetas.col(j).data(), thetas.col(j).data() + thetas.rows());
        std::sort(col.begin(), col.end());
        const std::size_t m = col.size() / 2;
        arm.averaged_theta[j] = col.size() % 2 ? col[m] : 0.5 * (col[m - 1] + col[m]);
      }
    }
    arm.angle_to_bayes = arm.averaged_theta.norm() > 0.0 ? angle_degrees(arm.averaged_theta, summary.bayes_normal)
                                                         : 90.0;
    summary.arms.push_back(std::move(arm));
  }
  const auto log_arm = std::find_if(summary.arms.begin(), summary.arms.end(),
                                    [](const ArmSummary& a) { return a.alpha.is_log_loss(); });
  for (ArmSummary& arm : summary.arms) {
    arm.relative_gain = relative_accuracy_gain(arm.accuracy, log_arm->accuracy);
    arm.gain_sign = (arm.accuracy > log_arm->accuracy) - (arm.accuracy < log_arm->accuracy);
  }
  return summary;
}

CorruptionSpec scenario_corruption(Scenario scenario) {
  CorruptionSpec c;
  switch (scenario) {
    case Scenario::imbalance:
      c.class_counts = {{2, 98}};
      break;
    case Scenario::noise:
      c.class_counts = {{50, 50}};
      c.flip_negative = 0.2;
      break;
    case Scenario::clean:
      c.class_counts = {{50, 50}};
      break;
  }
  return c;
}

Scenario parse_scenario(std::string_view name) {
  if (name == "imbalance") return Scenario::imbalance;
  if (name == "noise") return Scenario::noise;
  if (name == "clean") return Scenario::clean;
  throw ArgumentError("unknown scenario '" + std::string(name) + "' (expected imbalance, noise or clean)");
}

const char* to_string(Scenario scenario) noexcept {
  switch (scenario) {
    case Scenario::imbalance:
      return "imbalance";
    case Scenario::noise:
      return "noise";
    case Scenario::clean:
      return "clean";
  }
  return "unknown";
}

}  // namespace alpha_lab
