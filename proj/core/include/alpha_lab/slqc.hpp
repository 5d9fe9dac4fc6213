// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Strict local quasi-convexity (SLQC) certificates, normalized gradient
// descent, and the evolution of certificates as alpha grows: a single-step map
// and its bootstrapped (many small steps) version.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "alpha_lab/alpha.hpp"
#include "alpha_lab/logistic.hpp"

namespace alpha_lab {

/// (epsilon, kappa, theta0) with rho = epsilon / kappa.
class SlqcCertificate {
 public:
  SlqcCertificate(double epsilon, double kappa, ParamVector theta0);

  double epsilon() const noexcept { return epsilon_; }
  double kappa() const noexcept { return kappa_; }
  double rho() const noexcept { return epsilon_ / kappa_; }
  const ParamVector& theta0() const noexcept { return theta0_; }

 private:
  double epsilon_;
  double kappa_;
  ParamVector theta0_;
};

/// Value and gradient evaluators. Both must be safe to call concurrently.
class OracleFunction {
 public:
  using Value = std::function<double(const Eigen::VectorXd&)>;
  using Gradient = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  static constexpr double kSpotCheckTolerance = 1e-5;

  /// Spot-checks the gradient against central differences at `probe` (the
  /// origin when omitted); throws ArgumentError on disagreement beyond 1e-5
  /// (scaled by 1 + |gradient entry|).
  OracleFunction(Value value, Gradient gradient, Eigen::Index dim,
                 std::optional<Eigen::VectorXd> probe = std::nullopt);

  /// Empirical alpha-risk of the logistic model on `data`.
  static OracleFunction empirical_risk(const Alpha& alpha, LabeledDataset data);

  double value(const Eigen::VectorXd& theta) const { return value_(theta); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const { return gradient_(theta); }
  Eigen::Index dim() const noexcept { return dim_; }

 private:
  Value value_;
  Gradient gradient_;
  Eigen::Index dim_;
};

enum class SlqcCondition { condition1, condition2, fails };

const char* to_string(SlqcCondition c) noexcept;

struct SlqcVerdict {
  SlqcCondition condition = SlqcCondition::fails;
  double value_gap = 0.0;       // f(theta) - f(theta0)
  double distance = 0.0;        // ||theta - theta0||
  double gradient_norm = 0.0;   // ||grad f(theta)||
  double inner_product = 0.0;   // <-grad f(theta), theta0 - theta>
  double required_inner = 0.0;  // rho * ||grad f(theta)||
  std::string violation;        // empty unless condition == fails
};

/// Gradient norms at or below this are treated as zero.
inline constexpr double kZeroGradient = 1e-12;

/// Classifies theta as near-optimal (condition1), descent-certified toward the
/// rho-ball around theta0 (condition2), or failing. Inside the rho-ball only
/// condition1 can hold.
SlqcVerdict check_slqc_at(const OracleFunction& f, const Eigen::VectorXd& theta, const SlqcCertificate& cert);

struct Ball {
  Eigen::VectorXd center;
  double radius = 0.0;
};

struct NgdConfig {
  double learning_rate = 0.0;
  std::int64_t iterations = 0;
  Eigen::VectorXd initial;

  void validate() const;
};

struct NgdResult {
  Eigen::VectorXd best;
  double best_value = 0.0;
  std::int64_t best_iteration = 0;  // 0 is the initial point
  std::int64_t updates = 0;
  bool zero_gradient_stop = false;
  std::vector<double> trace;  // f at every visited iterate, initial point first
};

/// theta <- Proj(theta - eta * grad / ||grad||); returns the best visited
/// iterate, earliest on ties.
NgdResult ngd(const OracleFunction& f, const NgdConfig& config, const std::optional<Ball>& domain = std::nullopt);

/// ceil(kappa^2 * distance^2 / epsilon^2), at least 1.
std::int64_t ngd_iteration_bound(const SlqcCertificate& cert, double start_distance);
std::int64_t ngd_iteration_bound(double epsilon, double kappa, double start_distance);

/// Inputs of the certificate evolution maps at a fixed theta.
struct EvolutionInput {
  double alpha0 = 1.0;
  double epsilon0 = 0.0;
  double kappa0 = 0.0;
  double gradient_norm = 0.0;  // ||grad R_alpha0(theta)|| or a lower bound g
  double lipschitz_risk = 0.0;      // L_d(theta)
  double lipschitz_gradient = 0.0;  // J_d(theta)
  double radius = 0.0;              // r

  double rho0() const { return epsilon0 / kappa0; }
  void validate() const;
};

struct EvolvedCertificate {
  double epsilon = 0.0;
  double kappa = 0.0;
  double rho = 0.0;
};

struct RangeExceeded {
  double admissible_sup = 0.0;  // targets must stay strictly below this alpha
};

/// Largest alpha reachable from alpha0 in one step (exclusive).
double evolution_admissible_sup(const EvolutionInput& in);

/// Certificate of R_alpha at theta derived from the alpha0 certificate.
std::variant<EvolvedCertificate, RangeExceeded> evolve_slqc(const EvolutionInput& in, const Alpha& target);

struct BootstrapResult {
  double alpha_lambda = 0.0;
  double epsilon_lambda = 0.0;  // closed form with the (1 + r kappa0/eps0) denominator
  double rho_lower_bound = 0.0;  // rho0 (1 - lambda)
  /// Limit of the small-step epsilon recursion, eps0 + 2 L (1/alpha0 - 1/alpha_lambda).
  double epsilon_recursion_limit = 0.0;
};

/// Bootstrapped certificate at fraction lambda in (0, 1) of the reachable range.
/// `in.gradient_norm` is the caller-audited floor g on ||grad R_a(theta)|| for all a >= alpha0.
BootstrapResult bootstrap_slqc(const EvolutionInput& in, double lambda);

enum class GradientSubstitution {
  uniform_floor,  // G_n replaced by the floor g
  per_step,       // G_n = ||grad R_{alpha_n}(theta)|| supplied by a callback
};

struct BootstrapSequences {
  std::int64_t steps = 0;              // N
  std::vector<double> alpha;           // alpha_0 .. alpha_N
  std::vector<double> epsilon;
  std::vector<double> rho;
  std::int64_t horizon = 0;            // floor(alpha0^2 g / ((1 + 2r/rho0) J) * N)
  std::int64_t first_nonpositive = -1;  // first n with rho_n <= 0, -1 if none
};

/// Smallest N accepted by bootstrap_sequences: floor(J / (alpha0^2 g)) + 1.
std::int64_t bootstrap_min_steps(const EvolutionInput& in);
/// N large enough for the lambda-dependent guarantee rho_{N_lambda} > rho0 (1 - lambda) / 2.
std::int64_t bootstrap_min_steps(const EvolutionInput& in, double lambda);
/// N_lambda = floor(lambda rho0/(rho0 + 2r) alpha0^2 g / J N).
std::int64_t bootstrap_step_count(const EvolutionInput& in, double lambda, std::int64_t steps);

/// Runs the step-1/N recursions for n = 1..N. Throws ArgumentError carrying the
/// required N when N is too small. In per_step mode `gradient_at` must be set.
BootstrapSequences bootstrap_sequences(const EvolutionInput& in, std::int64_t steps,
                                       GradientSubstitution mode = GradientSubstitution::uniform_floor,
                                       const std::function<double(double)>& gradient_at = {});

/// Audit points in the ball of radius r around the origin: half on concentric
/// spheres, half uniform in the ball. Deterministic in seed.
std::vector<Eigen::VectorXd> audit_points(Eigen::Index dim, double radius, std::size_t budget, std::uint64_t seed);

struct GradientFloor {
  double floor = 0.0;     // min over the alpha grid of (||grad|| - SE)
  double argmin_alpha = 0.0;  // infinity when the alpha = inf term attains the minimum
};

/// Floor on ||grad R_a(theta)|| for a in {alpha0, alpha0 + step, ..., alpha_max, inf}.
GradientFloor gradient_norm_floor(const LabeledDataset& data, const Eigen::VectorXd& theta, double alpha0,
                                  double alpha_max = 64.0, double step = 0.25);

/// Per-point audit of single-step evolved certificates for an empirical risk.
struct CertificateAuditConfig {
  double alpha0 = 1.0;
  double epsilon0 = 0.1;
  double kappa0 = 0.0;  // 0 selects the Lipschitz constant of R_alpha0 on the ball
  double radius = 1.0;
  std::size_t points = 512;
  std::uint64_t seed = 0;
};

struct CertificateAuditRow {
  std::size_t point = 0;
  Eigen::VectorXd theta;
  double target = 0.0;          // alpha
  double admissible_sup = 0.0;  // single-step range at this theta
  bool admissible = false;
  SlqcVerdict base;             // alpha0 certificate at theta
  EvolvedCertificate evolved;   // valid only when admissible
  SlqcVerdict verdict;          // evolved certificate re-checked on R_target
};

struct CertificateAudit {
  Eigen::VectorXd theta0;  // minimiser of R_alpha0 on the ball
  double kappa0 = 0.0;
  std::vector<CertificateAuditRow> rows;
  std::size_t base_violations = 0;
  std::size_t violations = 0;   // admissible rows whose evolved certificate fails
  std::size_t inadmissible = 0;
};

/// Maps the single-step admissible supremum at a point to the target alphas to audit there.
using TargetRule = std::function<std::vector<double>(double admissible_sup)>;

/// Fixed targets, regardless of the admissible range.
TargetRule fixed_targets(std::vector<double> alphas);
/// alpha0 + fraction * (sup - alpha0) for each fraction in (0, 1).
TargetRule fractional_targets(double alpha0, std::vector<double> fractions);

/// theta0 is the minimiser of R_alpha0 over the ball of the given radius. At
/// every audit point the alpha0 certificate (epsilon0, kappa0, theta0) is
/// checked, evolved to each target with g = ||grad R_alpha0(theta)||, and the
/// evolved certificate is checked on R_target. Points with a vanishing gradient
/// are reported inadmissible.
CertificateAudit certificate_audit(const LabeledDataset& data, const CertificateAuditConfig& config,
                                   const TargetRule& targets);

}  // namespace alpha_lab
