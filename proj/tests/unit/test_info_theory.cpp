// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include <cmath>
#include <random>

#include "alpha_lab/info_theory.hpp"
#include "support/oracles.hpp"

using namespace alpha_lab;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd random_joint(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  Eigen::MatrixXd t(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) t(i, j) = u(rng);
  return t / t.sum();
}

double binomial_pmf(int n, int k, double p) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                  (n - k) * std::log1p(-p));
}

ProbVector binomial(int n, double p) {
  std::vector<double> m(static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k) m[static_cast<std::size_t>(k)] = binomial_pmf(n, k, p);
  return ProbVector(m);
}

}  // namespace

TEST_SUITE("info_theory") {
  TEST_CASE("JointPmf validation") {
    CHECK_THROWS_AS(JointPmf(Eigen::MatrixXd(0, 2)), ArgumentError);
    Eigen::MatrixXd bad(1, 2);
    bad << 0.5, 0.6;
    CHECK_THROWS_AS(JointPmf{bad}, ArgumentError);
    bad << -0.1, 1.1;
    CHECK_THROWS_AS(JointPmf{bad}, ArgumentError);
  }

  TEST_CASE("independent uniform label gives log m") {
    for (int m : {2, 3, 5}) {
      const JointPmf joint(Eigen::MatrixXd::Constant(4, m, 1.0 / (4.0 * m)));
      for (double a : {0.3, 0.5, 1.0, 2.0, 7.0, kInf}) {
        CHECK(arimoto_conditional_entropy(joint, Alpha(a)) == doctest::Approx(std::log(m)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("Shannon conditional entropy at alpha = 1") {
    Eigen::MatrixXd t(2, 2);
    t << 0.4, 0.1, 0.1, 0.4;
    const JointPmf joint(t);
    const double h08 = -(0.8 * std::log(0.8) + 0.2 * std::log(0.2));
    CHECK(arimoto_conditional_entropy(joint, Alpha(1.0)) == doctest::Approx(h08).epsilon(1e-14));
    CHECK(h08 == doctest::Approx(0.5004).epsilon(1e-4));
    CHECK(minimal_alpha_risk(joint, Alpha::infinity()) == doctest::Approx(0.2).epsilon(1e-14));
  }

  TEST_CASE("large alpha approaches the infinite branch") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
      const JointPmf joint(random_joint(rng, 3, 3));
      CHECK(std::abs(arimoto_conditional_entropy(joint, Alpha(1e4)) -
                     arimoto_conditional_entropy(joint, Alpha::infinity())) <= 1e-3);
    }
  }

  TEST_CASE("entropy range") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
      const JointPmf joint(random_joint(rng, 3, 4));
      for (double a : {0.2, 0.5, 1.0, 3.0, kInf}) {
        const double h = arimoto_conditional_entropy(joint, Alpha(a));
        CHECK(h >= 0.0);
        CHECK(h <= std::log(4.0) + 1e-12);
      }
    }
  }

  TEST_CASE("deterministic label has zero minimal risk") {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(3, 2);
    t(0, 0) = 0.2;
    t(1, 1) = 0.5;
    t(2, 0) = 0.3;
    const JointPmf joint(t);
    for (double a : {0.5, 1.0, 2.0, kInf}) CHECK(minimal_alpha_risk(joint, Alpha(a)) == doctest::Approx(0.0).scale(1.0));
  }

  TEST_CASE("zero-mass rows are skipped") {
    Eigen::MatrixXd t(3, 2);
    t << 0.4, 0.1, 0.0, 0.0, 0.1, 0.4;
    Eigen::MatrixXd compact(2, 2);
    compact << 0.4, 0.1, 0.1, 0.4;
    for (double a : {0.5, 1.0, 2.0, kInf}) {
      CHECK(minimal_alpha_risk(JointPmf(t), Alpha(a)) ==
            doctest::Approx(minimal_alpha_risk(JointPmf(compact), Alpha(a))));
    }
  }

  TEST_CASE("minimal risk equals brute-force posterior search") {
    std::mt19937_64 rng(8);
    for (double a : {0.5, 2.0, 5.0}) {
      for (int i = 0; i < 5; ++i) {
        const Eigen::MatrixXd t = random_joint(rng, 2, 2);
        double brute = 0.0;
        for (Eigen::Index x = 0; x < 2; ++x) {
          const double px = t.row(x).sum();
          brute += px * oracle::simplex_min_binary([&](double q) { return oracle::alpha_loss_naive(a, q); },
                                                   t(x, 1) / px, 1e-5);
        }
        CHECK(minimal_alpha_risk(JointPmf(t), Alpha(a)) == doctest::Approx(brute).epsilon(1e-4).scale(1.0));
      }
    }
  }

  TEST_CASE("tilted posterior") {
    const ProbVector b3({0.125, 0.375, 0.375, 0.125});
    const ProbVector tilted = tilt_posterior(b3, Alpha(2.0));
    const double expect[4] = {0.05, 0.45, 0.45, 0.05};
    for (std::size_t i = 0; i < 4; ++i) CHECK(tilted[i] == doctest::Approx(expect[i]).epsilon(1e-14));
    const ProbVector same = tilt_posterior(b3, Alpha(1.0));
    for (std::size_t i = 0; i < 4; ++i) CHECK(same[i] == b3[i]);
    const ProbVector hard = tilt_posterior(b3, Alpha::infinity());
    CHECK(hard[0] == 0.0);
    CHECK(hard[1] == 0.5);
    CHECK(hard[2] == 0.5);
  }

  TEST_CASE("tilting flattens below one and sharpens above one") {
    const ProbVector b20 = binomial(20, 0.5);
    const double h1 = shannon_entropy(b20);
    CHECK(shannon_entropy(tilt_posterior(b20, Alpha(0.5))) > h1);
    CHECK(shannon_entropy(tilt_posterior(b20, Alpha(3.0))) < h1);
    const ProbVector skew({0.05, 0.1, 0.25, 0.6});
    double prev = kInf;
    for (double a : {0.1, 0.3, 0.5, 0.8, 1.0, 1.5, 2.0, 4.0, 10.0, 50.0}) {
      const double h = shannon_entropy(tilt_posterior(skew, Alpha(a)));
      CHECK(h <= prev + 1e-15);
      prev = h;
    }
  }

  TEST_CASE("tilt minimises per-x conditional risk") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    for (double a : {0.5, 2.0, 5.0}) {
      for (int i = 0; i < 10; ++i) {
        const double p1 = u(rng);
        const auto risk = [&](double q) { return (1.0 - p1) * oracle::alpha_loss_naive(a, 1.0 - q) +
                                                 p1 * oracle::alpha_loss_naive(a, q); };
        double best_q = 0.0;
        double best = kInf;
        for (int k = 1; k < 1000; ++k) {
          const double q = k * 1e-3;
          if (risk(q) < best) {
            best = risk(q);
            best_q = q;
          }
        }
        const ProbVector tilted = tilt_posterior(ProbVector::binary(p1), Alpha(a));
        CHECK(std::abs(tilted[1] - best_q) <= 2e-3);
      }
    }
  }

  TEST_CASE("minimum conditional risk values") {
    CHECK(std::abs(min_conditional_risk(Eta(0.2), Alpha(0.5)) - 0.8) <= 1e-12);
    CHECK(min_conditional_risk(Eta(0.5), Alpha(1.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(min_conditional_risk(Eta(0.3), Alpha::infinity()) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(min_conditional_risk(Eta(0.0), Alpha(2.0)) == doctest::Approx(0.0).scale(1.0));
    CHECK_THROWS_AS(Eta(1.5), ArgumentError);
  }

  TEST_CASE("minimum conditional risk is symmetric and concave") {
    for (double a : {0.3, 0.5, 0.77, 1.0, 1.44, kInf}) {
      const Alpha alpha(a);
      for (int i = 1; i < 999; ++i) {
        const double e = i * 1e-3;
        CHECK(min_conditional_risk(Eta(e), alpha) ==
              doctest::Approx(min_conditional_risk(Eta(1.0 - e), alpha)).epsilon(1e-12));
        const double second = min_conditional_risk(Eta(e + 1e-3), alpha) - 2.0 * min_conditional_risk(Eta(e), alpha) +
                              min_conditional_risk(Eta(e - 1e-3), alpha);
        CHECK(second <= 1e-8);
      }
    }
  }

  TEST_CASE("minimum conditional risk equals the minimised conditional risk") {
    for (double a : {0.3, 0.5, 1.0, 1.44, 4.0}) {
      const Alpha alpha(a);
      for (double e : {0.1, 0.25, 0.6, 0.9}) {
        const double f_star = optimal_classifier(Eta(e), alpha);
        CHECK(conditional_risk(Eta(e), f_star, alpha) ==
              doctest::Approx(min_conditional_risk(Eta(e), alpha)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("expected minimum conditional risk recovers the minimal alpha-risk") {
    std::mt19937_64 rng(12);
    for (double a : {0.5, 1.0, 2.0, 6.0, kInf}) {
      for (int i = 0; i < 10; ++i) {
        const Eigen::MatrixXd t = random_joint(rng, 4, 2);
        double expected = 0.0;
        for (Eigen::Index x = 0; x < 4; ++x) {
          const double px = t.row(x).sum();
          expected += px * min_conditional_risk(Eta(t(x, 1) / px), Alpha(a));
        }
        CHECK(minimal_alpha_risk(JointPmf(t), Alpha(a)) == doctest::Approx(expected).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("optimal classifier") {
    for (double a : {0.3, 1.0, 4.0, kInf}) CHECK(optimal_classifier(Eta(0.5), Alpha(a)) == 0.0);
    CHECK(optimal_classifier(Eta(0.8), Alpha(2.0)) == doctest::Approx(2.0 * std::log(4.0)).epsilon(1e-14));
    CHECK(optimal_classifier(Eta(0.8), Alpha(2.0)) == doctest::Approx(2.7726).epsilon(1e-4));
    CHECK(optimal_classifier(Eta(1.0), Alpha(2.0)) == kInf);
    CHECK(optimal_classifier(Eta(0.0), Alpha(2.0)) == -kInf);
    CHECK(optimal_classifier(Eta(0.7), Alpha::infinity()) == kInf);
  }

  TEST_CASE("calibration and grid minimisation") {
    for (double a : {0.3, 0.5, 1.0, 1.44, 4.0, kInf}) {
      const Alpha alpha(a);
      for (int i = 1; i <= 99; ++i) {
        if (i == 50) continue;
        const double e = i / 100.0;
        const double f = optimal_classifier(Eta(e), alpha);
        CHECK((f > 0.0) == (e > 0.5));
        if (std::isinf(f)) continue;
        double best_f = 0.0;
        double best = kInf;
        const double step = 1e-3;
        const double span = std::abs(f) + 2.0;
        for (double g = -span; g <= span; g += step) {
          const double v = conditional_risk(Eta(e), g, alpha);
          if (v < best) {
            best = v;
            best_f = g;
          }
        }
        CHECK(std::abs(best_f - f) <= 2.0 * step);
      }
    }
  }
}
