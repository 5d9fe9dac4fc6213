// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "alpha_lab/experiment.hpp"
#include "alpha_lab/gmm.hpp"
#include "alpha_lab/parallel.hpp"
#include "support/oracles.hpp"

using namespace alpha_lab;

namespace {

// Fraction of n samples misclassified by sign(<w, x> + b).
double sampled_zero_one(const GmmSpec& spec, const Eigen::VectorXd& w, double b, std::size_t n, std::uint64_t seed) {
  const LabeledDataset data = sample_gmm(spec, n, seed);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int predicted = w.dot(data.x(i)) + b >= 0.0 ? 1 : -1;
    if (predicted != data.label(i)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(n);
}

double log_density(const GmmSpec& spec, int y, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd cov = spec.cov(y);
  const Eigen::VectorXd diff = x - spec.mean(y);
  return std::log(spec.prior(y)) - 0.5 * diff.dot(cov.ldlt().solve(diff)) - 0.5 * std::log(cov.determinant());
}

}  // namespace

TEST_SUITE("data_harness") {
  TEST_CASE("presets validate") {
    for (const GmmSpec& s : {gmm_presets::symmetric(), gmm_presets::skewed_landscape(), gmm_presets::shared_covariance()}) {
      CHECK_NOTHROW(s.validate());
      CHECK(s.dim() == 2);
    }
    CHECK(gmm_presets::symmetric().shared_covariance());
    CHECK_FALSE(gmm_presets::skewed_landscape().shared_covariance());
    CHECK(gmm_presets::skewed_landscape().prior(-1) == doctest::Approx(0.12));
  }

  TEST_CASE("mixture parameter validation") {
    GmmSpec s = gmm_presets::symmetric();
    s.prior_negative = 1.0;
    CHECK_THROWS_AS(s.validate(), ArgumentError);
    s = gmm_presets::symmetric();
    s.cov_positive(0, 1) = 0.3;
    CHECK_THROWS_AS(s.validate(), ArgumentError);
    s = gmm_presets::symmetric();
    s.cov_negative(0, 0) = -1.0;
    CHECK_THROWS_AS(s.validate(), ArgumentError);
    s = gmm_presets::symmetric();
    s.mean_positive = Eigen::Vector3d::Ones();
    CHECK_THROWS_AS(s.validate(), ArgumentError);
  }

  TEST_CASE("feature map") {
    const FeatureMap m = FeatureMap::symmetric_box(2);
    CHECK(m.apply(Eigen::Vector2d(-6.0, 6.0)).isApprox(Eigen::Vector2d(0.0, 1.0)));
    CHECK(m.apply(Eigen::Vector2d(0.0, 3.0)).isApprox(Eigen::Vector2d(0.5, 0.75)));
    CHECK(m.apply(Eigen::Vector2d(-9.0, 40.0)).isApprox(Eigen::Vector2d(0.0, 1.0)));
    CHECK_THROWS_AS(FeatureMap(Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(1.0, 2.0)), ArgumentError);
  }

  TEST_CASE("sampling is deterministic and matches the moments") {
    const GmmSpec s = gmm_presets::skewed_landscape();
    const LabeledDataset a = sample_gmm(s, 40000, 5);
    const LabeledDataset b = sample_gmm(s, 40000, 5);
    CHECK(a.features() == b.features());
    CHECK(std::abs(static_cast<double>(a.count_label(-1)) / 40000.0 - 0.12) < 0.01);
    for (int y : {-1, 1}) {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(2);
      std::size_t count = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.label(i) == y) {
          mean += a.x(i);
          ++count;
        }
      }
      mean /= static_cast<double>(count);
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2, 2);
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.label(i) == y) cov += (a.x(i) - mean) * (a.x(i) - mean).transpose();
      }
      cov /= static_cast<double>(count - 1);
      const double tol = y < 0 ? 0.15 : 0.06;
      CHECK((mean - s.mean(y)).cwiseAbs().maxCoeff() < tol);
      CHECK((cov - s.cov(y)).cwiseAbs().maxCoeff() < 2.0 * tol);
    }
  }

  TEST_CASE("mapped samples lie in the unit cube") {
    const LabeledDataset d = sample_gmm(gmm_presets::symmetric(), 500, 3, FeatureMap::symmetric_box(2));
    CHECK(d.domain() == FeatureDomain::unit_cube);
    CHECK(d.features().minCoeff() >= 0.0);
    CHECK(d.features().maxCoeff() <= 1.0);
  }

  TEST_CASE("sampling by class") {
    const LabeledDataset d = sample_gmm_by_class(gmm_presets::symmetric(), 7, 13, 1);
    CHECK(d.size() == 20);
    CHECK(d.count_label(-1) == 7);
    CHECK(d.label(6) == -1);
    CHECK(d.label(7) == 1);
  }

  TEST_CASE("corruption subsamples and flips") {
    const LabeledDataset pool = sample_gmm(gmm_presets::symmetric(), 1000, 8);
    CorruptionSpec c;
    c.class_counts = {{2, 98}};
    const LabeledDataset small = corrupt(pool, c, 1);
    CHECK(small.size() == 100);
    CHECK(small.count_label(-1) == 2);
    // rows keep their pool order
    std::size_t cursor = 0;
    for (std::size_t i = 0; i < small.size(); ++i) {
      while (cursor < pool.size() && pool.x(cursor) != small.x(i)) ++cursor;
      CHECK(cursor < pool.size());
    }
    c.class_counts = {{5000, 1}};
    CHECK_THROWS_AS(corrupt(pool, c, 1), ArgumentError);

    CorruptionSpec flips;
    flips.flip_negative = 0.2;
    const LabeledDataset big = sample_gmm(gmm_presets::symmetric(), 20000, 9);
    const LabeledDataset noisy = corrupt(big, flips, 2);
    std::size_t flipped_neg = 0;
    std::size_t neg = 0;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
      if (noisy.origin_class(i) < 0) {
        ++neg;
        if (noisy.flipped(i)) ++flipped_neg;
        CHECK(noisy.label(i) == (noisy.flipped(i) ? 1 : -1));
      } else {
        CHECK_FALSE(noisy.flipped(i));
      }
    }
    const double rate = static_cast<double>(flipped_neg) / static_cast<double>(neg);
    CHECK(std::abs(rate - 0.2) < 4.0 * std::sqrt(0.16 / static_cast<double>(neg)));
    CHECK(corrupt(big, CorruptionSpec{}, 3).labels().size() == big.size());
    CorruptionSpec bad;
    bad.flip_positive = 1.5;
    CHECK_THROWS_AS(corrupt(big, bad, 1), ArgumentError);
  }

  TEST_CASE("scenarios") {
    CHECK(scenario_corruption(Scenario::imbalance).class_counts->first == 2);
    CHECK(scenario_corruption(Scenario::noise).flip_negative == 0.2);
    CHECK(scenario_corruption(Scenario::clean).flip_negative == 0.0);
    CHECK(parse_scenario("noise") == Scenario::noise);
    CHECK_THROWS_AS(parse_scenario("mixed"), ArgumentError);
    CHECK(std::string(to_string(Scenario::clean)) == "clean");
  }

  TEST_CASE("exact 0-1 risk") {
    const GmmSpec s = gmm_presets::symmetric();
    const double q = 1.0 - oracle::std_normal_cdf(std::sqrt(2.0));
    CHECK(zero_one_risk(s, Eigen::Vector2d(1.0, 1.0), 0.0) == doctest::Approx(q).epsilon(1e-12));
    CHECK(q == doctest::Approx(0.0786).epsilon(1e-3));
    const GmmSpec k = gmm_presets::skewed_landscape();
    const Eigen::Vector2d w(0.3, -1.0);
    const double exact = zero_one_risk(k, w, 0.4);
    const double sampled = sampled_zero_one(k, w, 0.4, 200000, 4);
    CHECK(std::abs(exact - sampled) < 4.0 * std::sqrt(exact * (1.0 - exact) / 200000.0));
  }

  TEST_CASE("Bayes direction and risk") {
    const BayesPredictor sym = bayes_direction(gmm_presets::symmetric());
    CHECK(sym.direction.isApprox(Eigen::Vector2d(1.0, 1.0) / std::numbers::sqrt2));
    CHECK(sym.offset == doctest::Approx(0.0).scale(1.0));
    CHECK(bayes_risk(gmm_presets::symmetric()) == doctest::Approx(1.0 - oracle::std_normal_cdf(std::sqrt(2.0))));

    const GmmSpec shared = gmm_presets::shared_covariance();
    const Eigen::Vector2d lda = shared.cov_negative.inverse() * (shared.mean_positive - shared.mean_negative);
    CHECK(bayes_direction(shared).direction.isApprox(lda.normalized()));
    // the grid search finds the same rule within its resolution
    const BayesPredictor grid = bayes_direction_grid(shared, 0.25);
    CHECK(angle_degrees(grid.direction, lda) <= 0.25);

    const GmmSpec skew = gmm_presets::skewed_landscape();
    const double bayes = bayes_risk(skew);
    const BayesPredictor linear = bayes_direction(skew);
    CHECK(bayes <= zero_one_risk(skew, linear.direction, linear.offset) + 1e-3);
    // posterior-comparison Monte Carlo oracle
    const LabeledDataset d = sample_gmm(skew, 200000, 10);
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const int predicted = log_density(skew, 1, d.x(i)) >= log_density(skew, -1, d.x(i)) ? 1 : -1;
      if (predicted != d.label(i)) ++wrong;
    }
    const double mc = static_cast<double>(wrong) / 200000.0;
    CHECK(std::abs(bayes - mc) < 4.0 * std::sqrt(mc * (1.0 - mc) / 200000.0) + 2e-3);
  }

  TEST_CASE("angles and gains") {
    CHECK(angle_degrees(Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(0.0, 2.0)) == doctest::Approx(90.0));
    CHECK(angle_degrees(Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(-3.0, -3.0)) == doctest::Approx(180.0));
    CHECK(angle_degrees(Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(2.0, 2.0)) == doctest::Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(angle_degrees(Eigen::Vector2d::Zero(), Eigen::Vector2d(1.0, 0.0)), ArgumentError);
    CHECK(relative_accuracy_gain(0.9, 0.8) == doctest::Approx(12.5));
    CHECK(relative_accuracy_gain(0.7, 0.8) == doctest::Approx(12.5));
  }

  TEST_CASE("gradient descent training") {
    const LabeledDataset d = sample_gmm(gmm_presets::symmetric(), 200, 11);
    TrainConfig cfg;
    cfg.alpha = Alpha(1.0);
    const TrainResult r = train_gd(d, cfg);
    CHECK(r.termination == Termination::converged);
    CHECK(r.stationarity <= cfg.optimality);
    CHECK(risk_gradient(cfg.alpha, r.theta, d).norm() <= 1e-4);
    CHECK(r.risk == doctest::Approx(empirical_risk(cfg.alpha, r.theta, d)));
    cfg.max_iterations = 5;
    const TrainResult capped = train_gd(d, cfg);
    CHECK(capped.termination == Termination::max_iterations);
    CHECK(capped.iterations == 5);
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(train_gd(d, cfg), ArgumentError);
  }

  TEST_CASE("projected training stays in the ball and stops on the boundary") {
    // separable data: the unconstrained minimiser is at infinity
    Eigen::MatrixXd x(4, 2);
    x << 1.0, 0.0, 2.0, 0.5, -1.0, 0.0, -2.0, -0.5;
    const LabeledDataset d(x, {1, 1, -1, -1}, FeatureDomain::raw);
    TrainConfig cfg;
    cfg.radius = 2.0;
    cfg.learning_rate = 0.5;
    const TrainResult r = train_gd(d, cfg);
    CHECK(r.theta.norm() == doctest::Approx(2.0));
    CHECK(r.termination == Termination::converged);
  }

  TEST_CASE("synthetic experiment is reproducible and thread independent") {
    const std::vector<Alpha> alphas{Alpha(0.65), Alpha(4.0)};
    ExperimentConfig cfg;
    cfg.runs = 4;
    cfg.seed = 21;
    cfg.bias = true;
    cfg.train.max_iterations = 500;
    cfg.test_per_class = 200;
    const ExperimentSummary a = run_synthetic_experiment(gmm_presets::symmetric(), scenario_corruption(Scenario::noise),
                                                         alphas, cfg);
    REQUIRE(a.arms.size() == 3);
    CHECK(a.arms[2].alpha.is_log_loss());
    CHECK(a.arms[2].relative_gain == 0.0);
    CHECK(a.runs.size() == 12);
    CHECK(a.runs[5].run == 1);
    CHECK(a.bayes_normal.size() == 3);
    setenv("ALPHA_LAB_THREADS", "1", 1);
    const ExperimentSummary b = run_synthetic_experiment(gmm_presets::symmetric(), scenario_corruption(Scenario::noise),
                                                         alphas, cfg);
    setenv("ALPHA_LAB_THREADS", "3", 1);
    const ExperimentSummary c = run_synthetic_experiment(gmm_presets::symmetric(), scenario_corruption(Scenario::noise),
                                                         alphas, cfg);
    unsetenv("ALPHA_LAB_THREADS");
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
      CHECK(a.runs[i].theta == b.runs[i].theta);
      CHECK(a.runs[i].theta == c.runs[i].theta);
    }
    CHECK(a.arms[0].angle_to_bayes == c.arms[0].angle_to_bayes);
  }

  TEST_CASE("clean data collapses toward the Bayes direction") {
    ExperimentConfig cfg;
    cfg.runs = 10;
    cfg.seed = 3;
    cfg.train.max_iterations = 3000;
    const std::vector<Alpha> alphas{Alpha(1.0)};
    const ExperimentSummary s =
        run_synthetic_experiment(gmm_presets::symmetric(), scenario_corruption(Scenario::clean), alphas, cfg);
    CHECK(s.arms.size() == 1);
    CHECK(s.arms[0].angle_to_bayes < 5.0);
    CHECK(s.arms[0].accuracy > 0.85);
  }
}

TEST_SUITE("parallel") {
  TEST_CASE("parallel_for visits every index once") {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    parallel_for(0, [](std::size_t) { FAIL("no calls expected"); });
  }

  TEST_CASE("lowest failing index is rethrown") {
    setenv("ALPHA_LAB_THREADS", "4", 1);
    try {
      parallel_for(100, [](std::size_t i) {
        if (i == 17 || i == 60) throw std::runtime_error("index " + std::to_string(i));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "index 17");
    }
    unsetenv("ALPHA_LAB_THREADS");
  }

  TEST_CASE("thread count honours the environment") {
    setenv("ALPHA_LAB_THREADS", "3", 1);
    CHECK(thread_count() == 3);
    setenv("ALPHA_LAB_THREADS", "zero", 1);
    CHECK(thread_count() >= 1);
    unsetenv("ALPHA_LAB_THREADS");
  }

  TEST_CASE("seed mixing") {
    CHECK(mix_seed(1, 2) == mix_seed(1, 2));
    CHECK(mix_seed(1, 2) != mix_seed(2, 1));
    CHECK(mix_seed(0, 0) != mix_seed(0, 1));
  }
}
