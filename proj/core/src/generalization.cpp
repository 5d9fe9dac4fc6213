// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "alpha_lab/generalization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "alpha_lab/loss.hpp"
#include "alpha_lab/parallel.hpp"
#include "alpha_lab/slqc.hpp"

namespace alpha_lab {

namespace {

double confidence_term(const BoundQuery& q) {
  return std::sqrt(2.0 * std::log(4.0 / q.delta) / static_cast<double>(q.samples));
}

// Population estimates of R_alpha at every point, with standard errors.
std::vector<RiskEstimate> population_risks(const LabeledDataset& population, const Alpha& alpha,
                                           const std::vector<Eigen::VectorXd>& thetas) {
  std::vector<RiskEstimate> out(thetas.size());
  parallel_for(thetas.size(), [&](std::size_t i) { out[i] = risk_estimate(alpha, thetas[i], population); });
  return out;
}

BoundAudit audit(const BoundAuditConfig& config, const Alpha& empirical_alpha, const Alpha& population_alpha,
                 double bound) {
  config.spec.validate();
  if (config.trials < 1 || config.thetas < 1 || config.samples < 1 || config.population < 2) {
    throw ArgumentError("bound audit needs positive trial, theta and sample counts");
  }
  const FeatureMap map = FeatureMap::symmetric_box(config.spec.dim());
  const auto thetas = audit_points(config.spec.dim(), config.radius, config.thetas, mix_seed(config.seed, 0));
  const LabeledDataset population = sample_gmm(config.spec, config.population, mix_seed(config.seed, 1), map);
  const auto reference = population_risks(population, population_alpha, thetas);

  BoundAudit result;
  result.bound = bound;
  result.trials.resize(config.trials);
  parallel_for(config.trials, [&](std::size_t t) {
    const LabeledDataset data = sample_gmm(config.spec, config.samples, mix_seed(config.seed, 100 + t), map);
    double sup = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      const double gap = std::abs(empirical_risk(empirical_alpha, thetas[i], data) - reference[i].mean) -
                         3.0 * reference[i].standard_error;
      sup = std::max(sup, gap);
    }
    result.trials[t] = {sup, sup <= bound};
  });
  for (const auto& t : result.trials) {
    if (!t.holds) ++result.violations;
  }
  return result;
}

}  // namespace

void BoundQuery::validate() const {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ArgumentError("bound radius must be positive");
  if (dim < 1) throw ArgumentError("bound dimension must be positive");
  if (samples < 1) throw ArgumentError("bound sample count must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
}

double rademacher_bound(const BoundQuery& q) {
  q.validate();
  const double rd = q.r_sqrt_d();
  const double root_n = std::sqrt(static_cast<double>(q.samples));
  return margin_lipschitz_constant(q.alpha, rd) * 2.0 * rd / root_n +
         4.0 * loss_sup_bound(q.alpha, rd) * confidence_term(q);
}

double uniform_discrepancy_bound(const BoundQuery& q) {
  q.validate();
  if (!q.alpha.is_infinite() && q.alpha.value() < 1.0) {
    throw ArgumentError("uniform discrepancy bound requires alpha >= 1");
  }
  const double rd = q.r_sqrt_d();
  const double root_n = std::sqrt(static_cast<double>(q.samples));
  const double statistical = sigmoid(rd) * (2.0 * rd / root_n + 4.0 * confidence_term(q));
  const double log_tail = -softplus(rd);  // log sigma(-rd)
  return statistical + log_tail * log_tail * q.alpha.inverse() / 2.0;
}

BoundAudit rademacher_audit(const BoundAuditConfig& config, const Alpha& alpha) {
  const BoundQuery q{alpha, config.radius, static_cast<int>(config.spec.dim()), config.samples, config.delta};
  return audit(config, alpha, alpha, rademacher_bound(q));
}

BoundAudit discrepancy_audit(const BoundAuditConfig& config, const Alpha& alpha) {
  const BoundQuery q{alpha, config.radius, static_cast<int>(config.spec.dim()), config.samples, config.delta};
  return audit(config, alpha, Alpha::infinity(), uniform_discrepancy_bound(q));
}

TrendReport optimality_trend(const GmmSpec& spec, const Alpha& alpha, const TrendConfig& config) {
  spec.validate();
  config.train.validate();
  if (config.sample_sizes.empty() || config.runs < 2) {
    throw ArgumentError("trend needs sample sizes and at least two runs");
  }
  TrendReport report;
  report.bayes_risk = bayes_risk(spec);
  const std::size_t sizes = config.sample_sizes.size();
  std::vector<double> risks(sizes * config.runs);
  parallel_for(risks.size(), [&](std::size_t job) {
    const std::size_t s = job / config.runs;
    const std::size_t run = job % config.runs;
    const std::uint64_t seed = mix_seed(mix_seed(config.seed, s), run);
    const LabeledDataset data = sample_gmm(spec, config.sample_sizes[s], seed);
    TrainConfig tc = config.train;
    tc.alpha = alpha;
    tc.seed = seed;
    const TrainResult fit = train_gd(data, tc);
    risks[job] = fit.theta.norm() > 0.0 ? zero_one_risk(spec, fit.theta, 0.0) : 1.0 - spec.prior_negative;
  });
  for (std::size_t s = 0; s < sizes; ++s) {
    TrendRow row;
    row.samples = config.sample_sizes[s];
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t run = 0; run < config.runs; ++run) sum += risks[s * config.runs + run];
    row.mean_risk = sum / static_cast<double>(config.runs);
    for (std::size_t run = 0; run < config.runs; ++run) {
      const double d = risks[s * config.runs + run] - row.mean_risk;
      sq += d * d;
    }
    row.standard_error = std::sqrt(sq / static_cast<double>(config.runs - 1) / static_cast<double>(config.runs));
    row.mean_gap = row.mean_risk - report.bayes_risk;
    report.rows.push_back(row);
  }
  report.non_increasing = true;
  for (std::size_t s = 1; s < sizes; ++s) {
    const auto& a = report.rows[s - 1];
    const auto& b = report.rows[s];
    const double allowance = std::hypot(a.standard_error, b.standard_error);
    if (b.mean_gap > a.mean_gap + allowance) report.non_increasing = false;
  }
  return report;
}

}  // namespace alpha_lab
