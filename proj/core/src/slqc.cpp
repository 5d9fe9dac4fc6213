// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "alpha_lab/slqc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <string>

#include "alpha_lab/experiment.hpp"
#include "alpha_lab/loss.hpp"
#include "alpha_lab/parallel.hpp"

namespace alpha_lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ArgumentError(std::string(what) + " must be positive and finite");
}

}  // namespace

SlqcCertificate::SlqcCertificate(double epsilon, double kappa, ParamVector theta0)
    : epsilon_(epsilon), kappa_(kappa), theta0_(std::move(theta0)) {
  require_finite_positive(epsilon, "epsilon");
  require_finite_positive(kappa, "kappa");
}

OracleFunction::OracleFunction(Value value, Gradient gradient, Eigen::Index dim,
                               std::optional<Eigen::VectorXd> probe)
    : value_(std::move(value)), gradient_(std::move(gradient)), dim_(dim) {
  if (dim_ <= 0) throw ArgumentError("oracle dimension must be positive");
  if (!value_ || !gradient_) throw ArgumentError("oracle needs both evaluators");
  const Eigen::VectorXd at = probe.value_or(Eigen::VectorXd::Zero(dim_));
  if (at.size() != dim_) throw ArgumentError("probe point has the wrong dimension");
  const Eigen::VectorXd g = gradient_(at);
  if (g.size() != dim_) throw ArgumentError("gradient evaluator returns the wrong dimension");
  constexpr double h = 1e-5;
  for (Eigen::Index i = 0; i < dim_; ++i) {
    Eigen::VectorXd up = at;
    Eigen::VectorXd down = at;
    up[i] += h;
    down[i] -= h;
    const double fd = (value_(up) - value_(down)) / (2.0 * h);
    if (std::abs(fd - g[i]) > kSpotCheckTolerance * (1.0 + std::abs(g[i]))) {
      throw ArgumentError("gradient evaluator disagrees with finite differences in coordinate " +
                          std::to_string(i) + ": " + std::to_string(g[i]) + " vs " + std::to_string(fd));
    }
  }
}

OracleFunction OracleFunction::empirical_risk(const Alpha& alpha, LabeledDataset data) {
  auto shared = std::make_shared<const LabeledDataset>(std::move(data));
  const Eigen::Index dim = shared->dim();
  return OracleFunction(
      [alpha, shared](const Eigen::VectorXd& t) { return alpha_lab::empirical_risk(alpha, t, *shared); },
      [alpha, shared](const Eigen::VectorXd& t) { return risk_gradient(alpha, t, *shared); }, dim);
}

const char* to_string(SlqcCondition c) noexcept {
  switch (c) {
    case SlqcCondition::condition1:
      return "condition1";
    case SlqcCondition::condition2:
      return "condition2";
    case SlqcCondition::fails:
      return "fails";
  }
  return "unknown";
}

SlqcVerdict check_slqc_at(const OracleFunction& f, const Eigen::VectorXd& theta, const SlqcCertificate& cert) {
  const Eigen::VectorXd& theta0 = cert.theta0().theta();
  if (theta.size() != theta0.size() || theta.size() != f.dim()) {
    throw ArgumentError("dimension mismatch in check_slqc_at");
  }
  SlqcVerdict v;
  v.value_gap = f.value(theta) - f.value(theta0);
  v.distance = (theta - theta0).norm();
  if (v.value_gap <= cert.epsilon()) {
    v.condition = SlqcCondition::condition1;
    return v;
  }
  if (v.distance <= cert.rho()) {
    v.violation = "value gap " + std::to_string(v.value_gap) + " exceeds epsilon inside the rho-ball";
    return v;
  }
  const Eigen::VectorXd g = f.gradient(theta);
  v.gradient_norm = g.norm();
  v.inner_product = -g.dot(theta0 - theta);
  v.required_inner = cert.rho() * v.gradient_norm;
  if (v.gradient_norm <= kZeroGradient) {
    v.violation = "value gap exceeds epsilon at a zero-gradient point";
    return v;
  }
  if (v.inner_product >= v.required_inner) {
    v.condition = SlqcCondition::condition2;
    return v;
  }
  v.violation = "<-grad, theta0 - theta> = " + std::to_string(v.inner_product) + " < rho*||grad|| = " +
                std::to_string(v.required_inner);
  return v;
}

void NgdConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ArgumentError("NGD learning rate must be positive");
  if (iterations < 1) throw ArgumentError("NGD needs at least one iteration");
  if (initial.size() == 0) throw ArgumentError("NGD initial point is empty");
}

NgdResult ngd(const OracleFunction& f, const NgdConfig& config, const std::optional<Ball>& domain) {
  config.validate();
  if (config.initial.size() != f.dim()) throw ArgumentError("NGD initial point has the wrong dimension");
  auto project = [&](const Eigen::VectorXd& t) {
    return domain ? ParamVector::project(t, domain->center, domain->radius) : t;
  };
  Eigen::VectorXd theta = project(config.initial);
  NgdResult result;
  result.best = theta;
  result.best_value = f.value(theta);
  result.trace.push_back(result.best_value);
  for (std::int64_t t = 1; t <= config.iterations; ++t) {
    const Eigen::VectorXd g = f.gradient(theta);
    const double norm = g.norm();
    if (!(norm > kZeroGradient)) {
      if (std::isnan(norm)) throw NumericError("NGD gradient is NaN at iteration " + std::to_string(t));
      result.zero_gradient_stop = true;
      break;
    }
    theta = project(theta - config.learning_rate * g / norm);
    const double value = f.value(theta);
    result.trace.push_back(value);
    result.updates = t;
    if (value < result.best_value) {
      result.best_value = value;
      result.best = theta;
      result.best_iteration = t;
    }
  }
  return result;
}

std::int64_t ngd_iteration_bound(double epsilon, double kappa, double start_distance) {
  require_finite_positive(epsilon, "epsilon");
  require_finite_positive(kappa, "kappa");
  if (!(start_distance >= 0.0)) throw ArgumentError("start distance must be non-negative");
  const double ratio = kappa * start_distance / epsilon;
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(ratio * ratio)));
}

std::int64_t ngd_iteration_bound(const SlqcCertificate& cert, double start_distance) {
  return ngd_iteration_bound(cert.epsilon(), cert.kappa(), start_distance);
}

void EvolutionInput::validate() const {
  if (!(alpha0 >= 1.0) || !std::isfinite(alpha0)) throw ArgumentError("alpha0 must be finite and >= 1");
  require_finite_positive(epsilon0, "epsilon0");
  require_finite_positive(kappa0, "kappa0");
  require_finite_positive(gradient_norm, "gradient norm");
  require_finite_positive(lipschitz_gradient, "gradient Lipschitz constant");
  require_finite_positive(radius, "radius");
  if (!(lipschitz_risk >= 0.0) || !std::isfinite(lipschitz_risk)) {
    throw ArgumentError("risk Lipschitz constant must be finite and non-negative");
  }
}

double evolution_admissible_sup(const EvolutionInput& in) {
  in.validate();
  const double a0 = in.alpha0;
  return a0 + a0 * a0 * in.gradient_norm /
                  (2.0 * in.lipschitz_gradient * (1.0 + in.radius * in.kappa0 / in.epsilon0));
}

std::variant<EvolvedCertificate, RangeExceeded> evolve_slqc(const EvolutionInput& in, const Alpha& target) {
  const double sup = evolution_admissible_sup(in);
  if (target.is_infinite() || !(target.value() < sup)) return RangeExceeded{sup};
  const double a = target.value();
  const double a0 = in.alpha0;
  if (a < a0) throw ArgumentError("target alpha must not be below alpha0");
  const double step = a - a0;
  const double J = in.lipschitz_gradient;
  const double rho0 = in.rho0();
  EvolvedCertificate out;
  out.epsilon = in.epsilon0 + 2.0 * in.lipschitz_risk * step / (a * a0);
  const double shrink = (1.0 + 2.0 * in.radius / rho0) * J * step / (a * a0 * in.gradient_norm - J * step);
  out.rho = rho0 * (1.0 - shrink);
  out.kappa = out.epsilon / out.rho;
  return out;
}

BootstrapResult bootstrap_slqc(const EvolutionInput& in, double lambda) {
  in.validate();
  if (!(lambda > 0.0 && lambda < 1.0)) throw ArgumentError("lambda must lie in (0, 1)");
  const double a0 = in.alpha0;
  const double g = in.gradient_norm;
  const double J = in.lipschitz_gradient;
  const double ratio = in.kappa0 / in.epsilon0;
  BootstrapResult out;
  out.alpha_lambda = a0 + lambda * a0 * a0 * g / (J * (1.0 + 2.0 * in.radius * ratio));
  out.epsilon_lambda = in.epsilon0 + 2.0 * lambda * in.lipschitz_risk *
                                         ((out.alpha_lambda - a0) / (out.alpha_lambda * a0)) * a0 * a0 * g /
                                         (J * (1.0 + in.radius * ratio));
  out.rho_lower_bound = in.rho0() * (1.0 - lambda);
  out.epsilon_recursion_limit = in.epsilon0 + 2.0 * in.lipschitz_risk * (1.0 / a0 - 1.0 / out.alpha_lambda);
  return out;
}

std::int64_t bootstrap_min_steps(const EvolutionInput& in) {
  in.validate();
  const double threshold = in.lipschitz_gradient / (in.alpha0 * in.alpha0 * in.gradient_norm);
  return static_cast<std::int64_t>(std::floor(threshold)) + 1;
}

std::int64_t bootstrap_min_steps(const EvolutionInput& in, double lambda) {
  in.validate();
  if (!(lambda > 0.0 && lambda < 1.0)) throw ArgumentError("lambda must lie in (0, 1)");
  const double threshold = (1.0 + 2.0 * in.radius / in.rho0()) / (1.0 - lambda) * 2.0 * in.lipschitz_gradient /
                           (in.alpha0 * in.alpha0 * in.gradient_norm);
  return static_cast<std::int64_t>(std::floor(threshold)) + 1;
}

std::int64_t bootstrap_step_count(const EvolutionInput& in, double lambda, std::int64_t steps) {
  in.validate();
  const double rho0 = in.rho0();
  const double count = lambda * rho0 / (rho0 + 2.0 * in.radius) * in.alpha0 * in.alpha0 * in.gradient_norm /
                       in.lipschitz_gradient * static_cast<double>(steps);
  return static_cast<std::int64_t>(std::floor(count));
}

BootstrapSequences bootstrap_sequences(const EvolutionInput& in, std::int64_t steps, GradientSubstitution mode,
                                       const std::function<double(double)>& gradient_at) {
  in.validate();
  const std::int64_t required = bootstrap_min_steps(in);
  if (steps < required) {
    throw ArgumentError("bootstrap needs N > J/(alpha0^2 g); required N >= " + std::to_string(required) +
                        ", got " + std::to_string(steps));
  }
  if (mode == GradientSubstitution::per_step && !gradient_at) {
    throw ArgumentError("per-step gradient substitution needs a gradient callback");
  }
  const double inv_n = 1.0 / static_cast<double>(steps);
  const double L = in.lipschitz_risk;
  const double J = in.lipschitz_gradient;
  const double rho0 = in.rho0();
  BootstrapSequences s;
  s.steps = steps;
  const auto count = static_cast<std::size_t>(steps) + 1;
  s.alpha.reserve(count);
  s.epsilon.reserve(count);
  s.rho.reserve(count);
  s.alpha.push_back(in.alpha0);
  s.epsilon.push_back(in.epsilon0);
  s.rho.push_back(rho0);
  for (std::int64_t n = 1; n <= steps; ++n) {
    const double a_prev = s.alpha.back();
    const double a = in.alpha0 + static_cast<double>(n) * inv_n;
    const double grad = mode == GradientSubstitution::uniform_floor ? in.gradient_norm : gradient_at(a_prev);
    const double rho_prev = s.rho.back();
    s.alpha.push_back(a);
    s.epsilon.push_back(s.epsilon.back() + 2.0 * L * inv_n / (a * a_prev));
    s.rho.push_back(rho_prev - (rho_prev + 2.0 * in.radius) * J / (a * a_prev * grad - J * inv_n) * inv_n);
    if (s.first_nonpositive < 0 && !(s.rho.back() > 0.0)) s.first_nonpositive = n;
  }
  s.horizon = static_cast<std::int64_t>(std::floor(in.alpha0 * in.alpha0 * in.gradient_norm /
                                                   ((1.0 + 2.0 * in.radius / rho0) * J) *
                                                   static_cast<double>(steps)));
  return s;
}

std::vector<Eigen::VectorXd> audit_points(Eigen::Index dim, double radius, std::size_t budget, std::uint64_t seed) {
  if (dim <= 0 || !(radius > 0.0)) throw ArgumentError("audit needs positive dimension and radius");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform;
  auto direction = [&] {
    Eigen::VectorXd v(dim);
    do {
      for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
    } while (v.norm() == 0.0);
    return Eigen::VectorXd(v / v.norm());
  };
  std::vector<Eigen::VectorXd> points;
  points.reserve(budget);
  const std::size_t on_spheres = budget / 2;
  constexpr std::size_t kShells = 8;
  for (std::size_t i = 0; i < on_spheres; ++i) {
    const double shell = static_cast<double>(i % kShells + 1) / static_cast<double>(kShells);
    points.push_back(shell * radius * direction());
  }
  while (points.size() < budget) {
    const double scale = radius * std::pow(uniform(rng), 1.0 / static_cast<double>(dim));
    points.push_back(scale * direction());
  }
  return points;
}

GradientFloor gradient_norm_floor(const LabeledDataset& data, const Eigen::VectorXd& theta, double alpha0,
                                  double alpha_max, double step) {
  if (!(alpha0 >= 1.0) || !(step > 0.0) || !(alpha_max >= alpha0)) {
    throw ArgumentError("gradient floor needs 1 <= alpha0 <= alpha_max and a positive step");
  }
  GradientFloor out{kInf, alpha0};
  auto consider = [&](const Alpha& a) {
    const double value =
        risk_gradient(a, theta, data).norm() - gradient_standard_error(a, theta, data);
    if (value < out.floor) {
      out.floor = value;
      out.argmin_alpha = a.is_infinite() ? kInf : a.value();
    }
  };
  const auto count = static_cast<std::int64_t>(std::floor((alpha_max - alpha0) / step + 1e-9));
  for (std::int64_t i = 0; i <= count; ++i) consider(Alpha(alpha0 + static_cast<double>(i) * step));
  consider(Alpha::infinity());
  return out;
}

TargetRule fixed_targets(std::vector<double> alphas) {
  return [alphas = std::move(alphas)](double) { return alphas; };
}

TargetRule fractional_targets(double alpha0, std::vector<double> fractions) {
  for (double f : fractions) {
    if (!(f > 0.0 && f < 1.0)) throw ArgumentError("target fractions must lie in (0, 1)");
  }
  return [alpha0, fractions = std::move(fractions)](double sup) {
    std::vector<double> out;
    out.reserve(fractions.size());
    for (double f : fractions) out.push_back(alpha0 + f * (sup - alpha0));
    return out;
  };
}

CertificateAudit certificate_audit(const LabeledDataset& data, const CertificateAuditConfig& config,
                                   const TargetRule& targets) {
  if (!(config.alpha0 >= 1.0) || !std::isfinite(config.alpha0)) {
    throw ArgumentError("certificate audit needs a finite alpha0 >= 1");
  }
  require_finite_positive(config.epsilon0, "epsilon0");
  require_finite_positive(config.radius, "radius");
  if (config.points == 0) throw ArgumentError("certificate audit needs at least one point");
  if (!targets) throw ArgumentError("certificate audit needs a target rule");
  const Alpha alpha0(config.alpha0);
  const auto dim = static_cast<int>(data.dim());

  // projected gradient descent with a step below 1 / (curvature bound)
  const double top = data.second_moment().selfadjointView<Eigen::Lower>().eigenvalues().maxCoeff();
  TrainConfig train;
  train.alpha = alpha0;
  train.radius = config.radius;
  train.learning_rate = 1.0 / std::max(top, 1e-12);
  train.optimality = 1e-10;
  train.max_iterations = 2000000;
  const TrainResult fit = train_gd(data, train);

  CertificateAudit audit;
  audit.theta0 = fit.theta;
  audit.kappa0 = config.kappa0 > 0.0 ? config.kappa0 : theta_lipschitz_constant(alpha0, config.radius, dim);
  const SlqcCertificate base(config.epsilon0, audit.kappa0, ParamVector(fit.theta, config.radius));
  const OracleFunction base_risk = OracleFunction::empirical_risk(alpha0, data);
  const std::vector<Eigen::VectorXd> points = audit_points(data.dim(), config.radius, config.points, config.seed);

  std::vector<std::vector<CertificateAuditRow>> per_point(points.size());
  std::vector<char> base_failed(points.size(), 0);
  parallel_for(points.size(), [&](std::size_t i) {
    const Eigen::VectorXd& theta = points[i];
    CertificateAuditRow proto;
    proto.point = i;
    proto.theta = theta;
    proto.base = check_slqc_at(base_risk, theta, base);
    base_failed[i] = proto.base.condition == SlqcCondition::fails;
    EvolutionInput in;
    in.alpha0 = config.alpha0;
    in.epsilon0 = config.epsilon0;
    in.kappa0 = audit.kappa0;
    in.gradient_norm = risk_gradient(alpha0, theta, data).norm();
    in.lipschitz_risk = alpha_lipschitz_risk(theta);
    in.lipschitz_gradient = alpha_lipschitz_gradient(theta);
    in.radius = config.radius;
    const bool movable = in.gradient_norm > kZeroGradient;
    proto.admissible_sup = movable ? evolution_admissible_sup(in) : config.alpha0;
    for (double target : targets(proto.admissible_sup)) {
      CertificateAuditRow row = proto;
      row.target = target;
      if (movable && target >= config.alpha0) {
        const auto evolved = evolve_slqc(in, Alpha(target));
        if (const auto* cert = std::get_if<EvolvedCertificate>(&evolved)) {
          row.admissible = true;
          row.evolved = *cert;
          const OracleFunction risk = OracleFunction::empirical_risk(Alpha(target), data);
          row.verdict = check_slqc_at(risk, theta,
                                      SlqcCertificate(cert->epsilon, cert->kappa, base.theta0()));
        }
      }
      per_point[i].push_back(std::move(row));
    }
  });

  for (char failed : base_failed) audit.base_violations += failed ? 1 : 0;
  for (auto& rows : per_point) {
    for (auto& row : rows) {
      if (row.admissible) {
        if (row.verdict.condition == SlqcCondition::fails) ++audit.violations;
      } else {
        ++audit.inadmissible;
      }
      audit.rows.push_back(std::move(row));
    }
  }
  return audit;
}

}  // namespace alpha_lab
