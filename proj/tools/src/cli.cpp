// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "alpha_lab_cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "alpha_lab/experiment.hpp"
#include "alpha_lab/generalization.hpp"
#include "alpha_lab/info_theory.hpp"
#include "alpha_lab/landscape.hpp"
#include "alpha_lab/parallel.hpp"
#include "alpha_lab/slqc.hpp"

#ifndef ALPHA_LAB_VERSION
#define ALPHA_LAB_VERSION "0.0.0"
#endif

namespace alpha_lab::cli {

namespace {

using nlohmann::json;

/// Set by --strict subcommands when an audit finds a violation.
struct AuditFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ArgumentError("cannot parse number '" + s + "'");
  }
  if (used != s.size()) throw ArgumentError("cannot parse number '" + s + "'");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string alpha_label(const Alpha& a) { return a.is_infinite() ? "inf" : format_number(a.value()); }

Eigen::VectorXd json_vector(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ArgumentError(std::string(what) + " must be a non-empty array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Eigen::MatrixXd json_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ArgumentError(std::string(what) + " must be a non-empty array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw ArgumentError(std::string(what) + " rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = j[i][c].get<double>();
  }
  return m;
}

Alpha json_alpha(const json& j) {
  if (j.is_string()) return Alpha::parse(j.get<std::string>());
  return Alpha(j.get<double>());
}

CorruptionSpec parse_corruption_json(std::string_view text) {
  const json j = json::parse(text);
  CorruptionSpec c;
  c.flip_negative = j.value("flip_negative", 0.0);
  c.flip_positive = j.value("flip_positive", 0.0);
  c.normalize_features = j.value("normalize_features", false);
  if (j.contains("class_counts")) {
    const auto& counts = j.at("class_counts");
    if (!counts.is_array() || counts.size() != 2) throw ArgumentError("class_counts must be [negative, positive]");
    c.class_counts = {{counts[0].get<std::size_t>(), counts[1].get<std::size_t>()}};
  }
  c.validate();
  return c;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string render(const Manifest& manifest) const {
    std::string out = manifest.header();
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
      out += '\n';
    }
    return out;
  }
};

std::string bool_text(bool b) { return b ? "true" : "false"; }

// ---- subcommands ---------------------------------------------------------

struct TiltOptions {
  std::string pmf;
  std::string alphas = "0.5,1,3";
  std::string out;
};

void run_tilt(const TiltOptions& o, std::ostream& log) {
  const std::vector<double> masses = load_pmf(o.pmf);
  const ProbVector p(masses);
  const std::vector<Alpha> alphas = parse_alpha_list(o.alphas);
  Table t;
  t.columns = {"outcome", "pmf"};
  std::vector<ProbVector> tilted;
  for (const Alpha& a : alphas) {
    t.columns.push_back("alpha_" + alpha_label(a));
    tilted.push_back(tilt_posterior(p, a));
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<std::string> row{std::to_string(i), format_number(p[i])};
    for (const ProbVector& q : tilted) row.push_back(format_number(q[i]));
    t.rows.push_back(std::move(row));
  }
  Manifest m{"tilt", o.pmf, 0, o.out, {{"alphas", o.alphas}}};
  write_atomic(o.out, t.render(m));
  log << "wrote " << p.size() << " outcomes x " << alphas.size() << " alphas to " << o.out << '\n';
}

struct LandscapeOptions {
  std::string gmm = "preset:skewed_landscape";
  std::string alpha = "1";
  double radius = 1.0;
  int grid = 101;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  bool raw = false;
  bool compare_infinity = false;
  bool strict = false;
  std::string out;
};

void run_landscape(const LandscapeOptions& o, std::ostream& log) {
  const GmmSpec spec = load_gmm(o.gmm);
  if (spec.dim() != 2) throw ArgumentError("landscape needs a d = 2 mixture, got d = " + std::to_string(spec.dim()));
  const Alpha alpha = Alpha::parse(o.alpha);
  const std::optional<FeatureMap> map = o.raw ? std::nullopt : std::optional<FeatureMap>(FeatureMap::symmetric_box(2));
  const LabeledDataset data = sample_gmm(spec, o.samples, o.seed, map);
  const LandscapeGrid grid = landscape_grid(data, alpha, o.radius, o.grid);
  const BasinReport basin = single_basin_check(grid);

  Table t;
  t.columns = {"theta1\\theta2"};
  for (Eigen::Index j = 0; j < grid.axis.size(); ++j) t.columns.push_back(format_number(grid.axis[j]));
  for (Eigen::Index i = 0; i < grid.axis.size(); ++i) {
    std::vector<std::string> row{format_number(grid.axis[i])};
    for (Eigen::Index j = 0; j < grid.axis.size(); ++j) row.push_back(format_number(grid.values(i, j)));
    t.rows.push_back(std::move(row));
  }
  Manifest m{"landscape", o.gmm, o.seed, o.out,
             {{"alpha", alpha_label(alpha)},
              {"radius", format_number(o.radius)},
              {"grid", std::to_string(o.grid)},
              {"samples", std::to_string(o.samples)},
              {"features", o.raw ? "raw" : "box[-6,6]^2 -> [0,1]^2"},
              {"strict_local_minima", std::to_string(basin.strict_local_minima)},
              {"single_basin", bool_text(basin.single_basin)}}};
  write_atomic(o.out, t.render(m));
  log << "landscape: " << basin.strict_local_minima << " strict local minima, single basin "
      << bool_text(basin.single_basin) << '\n';

  if (o.compare_infinity) {
    const SaturationReport rep = saturation_report(data, alpha, o.radius, o.grid);
    Table s;
    s.columns = {"alpha", "max_value_gap", "value_allowance", "max_gradient_gap", "gradient_allowance", "holds"};
    s.rows.push_back({alpha_label(alpha), format_number(rep.max_value_gap), format_number(rep.value_allowance),
                      format_number(rep.max_gradient_gap), format_number(rep.gradient_allowance),
                      bool_text(rep.holds())});
    std::filesystem::path companion(o.out);
    companion.replace_extension(".saturation.csv");
    Manifest sm = m;
    sm.output = companion.string();
    write_atomic(companion, s.render(sm));
    log << "saturation: value gap " << format_number(rep.max_value_gap) << " vs " << format_number(rep.value_allowance)
        << ", gradient gap " << format_number(rep.max_gradient_gap) << " vs "
        << format_number(rep.gradient_allowance) << '\n';
    if (o.strict && !rep.holds()) throw AuditFailure("saturation audit violated");
  }
}

struct SynthOptions {
  std::string scenario;
  std::string alphas = "0.65,1,4";
  std::size_t runs = 100;
  std::uint64_t seed = 0;
  std::string gmm = "preset:symmetric";
  std::string corruption;
  bool no_bias = false;
  std::string averaging = "mean";
  double learning_rate = 0.01;
  double optimality = 1e-4;
  std::int64_t max_iterations = 200000;
  double radius = 10.0;
  std::size_t pool_size = 1000;
  std::size_t test_per_class = 1000;
  std::string out;
};

void run_synth(const SynthOptions& o, std::ostream& log) {
  const GmmSpec spec = load_gmm(o.gmm);
  const Scenario scenario = parse_scenario(o.scenario);
  const CorruptionSpec corruption =
      o.corruption.empty() ? scenario_corruption(scenario) : parse_corruption_json(read_file(o.corruption));
  const std::vector<Alpha> alphas = parse_alpha_list(o.alphas);
  ExperimentConfig cfg;
  cfg.runs = o.runs;
  cfg.seed = o.seed;
  cfg.bias = !o.no_bias;
  cfg.pool_size = o.pool_size;
  cfg.test_per_class = o.test_per_class;
  cfg.train.learning_rate = o.learning_rate;
  cfg.train.optimality = o.optimality;
  cfg.train.max_iterations = o.max_iterations;
  cfg.train.radius = o.radius;
  if (o.averaging == "mean") {
    cfg.averaging = Averaging::mean;
  } else if (o.averaging == "median") {
    cfg.averaging = Averaging::median;
  } else {
    throw ArgumentError("averaging must be mean or median");
  }
  const ExperimentSummary s = run_synthetic_experiment(spec, corruption, alphas, cfg);

  const Eigen::Index d = s.bayes_normal.size();
  std::string normal;
  for (Eigen::Index j = 0; j < d; ++j) normal += (j ? " " : "") + format_number(s.bayes_normal[j]);
  Manifest m{"synth", o.corruption.empty() ? o.gmm : o.gmm + " + " + o.corruption, o.seed, o.out,
             {{"scenario", to_string(scenario)},
              {"runs", std::to_string(o.runs)},
              {"bias", bool_text(cfg.bias)},
              {"averaging", o.averaging},
              {"learning_rate", format_number(o.learning_rate)},
              {"optimality", format_number(o.optimality)},
              {"max_iterations", std::to_string(o.max_iterations)},
              {"bayes_normal", normal}}};

  Table summary;
  summary.columns = {"alpha",    "angle_to_bayes_deg", "accuracy",  "accuracy_negative", "accuracy_positive",
                     "relative_gain_pct", "gain_sign", "converged_runs"};
  for (Eigen::Index j = 0; j < d; ++j) summary.columns.push_back("theta_" + std::to_string(j));
  for (const ArmSummary& arm : s.arms) {
    std::vector<std::string> row{alpha_label(arm.alpha),           format_number(arm.angle_to_bayes),
                                 format_number(arm.accuracy),      format_number(arm.accuracy_negative),
                                 format_number(arm.accuracy_positive), format_number(arm.relative_gain),
                                 std::to_string(arm.gain_sign),    std::to_string(arm.converged_runs)};
    for (Eigen::Index j = 0; j < d; ++j) row.push_back(format_number(arm.averaged_theta[j]));
    summary.rows.push_back(std::move(row));
  }
  Table runs;
  runs.columns = {"run", "alpha", "accuracy", "accuracy_negative", "accuracy_positive", "iterations", "converged"};
  for (Eigen::Index j = 0; j < d; ++j) runs.columns.push_back("theta_" + std::to_string(j));
  for (const RunRecord& r : s.runs) {
    std::vector<std::string> row{std::to_string(r.run),         alpha_label(r.alpha),
                                 format_number(r.accuracy),     format_number(r.accuracy_negative),
                                 format_number(r.accuracy_positive), std::to_string(r.iterations),
                                 bool_text(r.converged)};
    for (Eigen::Index j = 0; j < d; ++j) row.push_back(format_number(r.theta[j]));
    runs.rows.push_back(std::move(row));
  }
  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir);
  Manifest sm = m;
  sm.output = (dir / "summary.csv").string();
  write_atomic(dir / "summary.csv", summary.render(sm));
  Manifest rm = m;
  rm.output = (dir / "runs.csv").string();
  write_atomic(dir / "runs.csv", runs.render(rm));
  for (const ArmSummary& arm : s.arms) {
    log << "alpha " << alpha_label(arm.alpha) << ": angle " << format_number(arm.angle_to_bayes) << " deg, accuracy "
        << format_number(arm.accuracy) << ", converged " << arm.converged_runs << "/" << o.runs << '\n';
  }
}

struct AuditOptions {
  std::string gmm = "preset:symmetric";
  double alpha0 = 1.0;
  std::string targets;
  std::string fractions = "0.25,0.5,0.9";
  std::size_t samples = 512;
  std::size_t n = 50;
  double epsilon0 = 0.1;
  double radius = 1.0;
  double lambda = 0.5;
  std::uint64_t seed = 0;
  bool strict = false;
  std::string out;
};

void run_slqc_audit(const AuditOptions& o, std::ostream& log) {
  const GmmSpec spec = load_gmm(o.gmm);
  const LabeledDataset data = sample_gmm(spec, o.n, o.seed, FeatureMap::symmetric_box(spec.dim()));
  CertificateAuditConfig cfg;
  cfg.alpha0 = o.alpha0;
  cfg.epsilon0 = o.epsilon0;
  cfg.radius = o.radius;
  cfg.points = o.samples;
  cfg.seed = mix_seed(o.seed, 1);
  TargetRule rule;
  std::string target_text;
  if (!o.targets.empty()) {
    std::vector<double> values;
    for (const Alpha& a : parse_alpha_list(o.targets)) {
      values.push_back(a.is_infinite() ? std::numeric_limits<double>::infinity() : a.value());
    }
    rule = fixed_targets(values);
    target_text = "targets " + o.targets;
  } else {
    rule = fractional_targets(o.alpha0, parse_number_list(o.fractions));
    target_text = "fractions " + o.fractions;
  }
  const CertificateAudit audit = certificate_audit(data, cfg, rule);

  // bootstrapped certificate per audit point; needs a positive gradient floor over alpha >= alpha0
  const Eigen::Index d = data.dim();
  std::vector<std::optional<BootstrapResult>> boot(o.samples);
  std::vector<double> floors(o.samples, 0.0);
  std::vector<Eigen::VectorXd> thetas(o.samples);
  for (const auto& row : audit.rows) thetas[row.point] = row.theta;
  parallel_for(o.samples, [&](std::size_t i) {
    EvolutionInput in;
    in.alpha0 = o.alpha0;
    in.epsilon0 = o.epsilon0;
    in.kappa0 = audit.kappa0;
    floors[i] = gradient_norm_floor(data, thetas[i], o.alpha0).floor;
    in.gradient_norm = floors[i];
    in.lipschitz_risk = alpha_lipschitz_risk(thetas[i]);
    in.lipschitz_gradient = alpha_lipschitz_gradient(thetas[i]);
    in.radius = o.radius;
    if (in.gradient_norm > kZeroGradient) boot[i] = bootstrap_slqc(in, o.lambda);
  });

  Table t;
  t.columns = {"point"};
  for (Eigen::Index j = 0; j < d; ++j) t.columns.push_back("theta_" + std::to_string(j));
  for (const char* c : {"base_condition", "target", "admissible_sup", "status", "epsilon", "kappa", "rho", "condition",
                        "violation", "gradient_floor", "alpha_lambda", "epsilon_lambda", "rho_lambda_lower"}) {
    t.columns.emplace_back(c);
  }
  const std::string nan = format_number(std::numeric_limits<double>::quiet_NaN());
  for (const CertificateAuditRow& r : audit.rows) {
    std::vector<std::string> row{std::to_string(r.point)};
    for (Eigen::Index j = 0; j < d; ++j) row.push_back(format_number(r.theta[j]));
    row.push_back(to_string(r.base.condition));
    row.push_back(format_number(r.target));
    row.push_back(format_number(r.admissible_sup));
    row.push_back(r.admissible ? "evolved" : "RangeExceeded");
    row.push_back(r.admissible ? format_number(r.evolved.epsilon) : nan);
    row.push_back(r.admissible ? format_number(r.evolved.kappa) : nan);
    row.push_back(r.admissible ? format_number(r.evolved.rho) : nan);
    row.push_back(r.admissible ? to_string(r.verdict.condition) : "");
    row.push_back(r.admissible && r.verdict.condition == SlqcCondition::fails ? "true" : "false");
    const auto& b = boot[r.point];
    row.push_back(format_number(floors[r.point]));
    row.push_back(b ? format_number(b->alpha_lambda) : nan);
    row.push_back(b ? format_number(b->epsilon_lambda) : nan);
    row.push_back(b ? format_number(b->rho_lower_bound) : nan);
    t.rows.push_back(std::move(row));
  }
  std::string theta0;
  for (Eigen::Index j = 0; j < d; ++j) theta0 += (j ? " " : "") + format_number(audit.theta0[j]);
  Manifest m{"slqc-audit", o.gmm, o.seed, o.out,
             {{"alpha0", format_number(o.alpha0)},
              {"epsilon0", format_number(o.epsilon0)},
              {"kappa0", format_number(audit.kappa0)},
              {"theta0", theta0},
              {"radius", format_number(o.radius)},
              {"dataset_size", std::to_string(o.n)},
              {"lambda", format_number(o.lambda)},
              {"selection", target_text},
              {"violations", std::to_string(audit.violations)},
              {"base_violations", std::to_string(audit.base_violations)},
              {"inadmissible", std::to_string(audit.inadmissible)}}};
  write_atomic(o.out, t.render(m));
  log << "slqc-audit: " << audit.rows.size() - audit.inadmissible << " admissible rows, " << audit.violations
      << " violations, " << audit.inadmissible << " RangeExceeded\n";
  if (o.strict && (audit.violations > 0 || audit.base_violations > 0)) throw AuditFailure("certificate audit violated");
}

struct BoundsOptions {
  std::string query;
  bool audit = false;
  std::string gmm = "preset:symmetric";
  std::size_t trials = 50;
  std::size_t thetas = 200;
  std::size_t population = 1000000;
  std::uint64_t seed = 0;
  bool strict = false;
  std::string out;
};

void run_bounds(const BoundsOptions& o, std::ostream& log) {
  const json q = json::parse(read_file(o.query));
  std::vector<Alpha> alphas;
  if (q.contains("alphas")) {
    for (const auto& a : q.at("alphas")) alphas.push_back(json_alpha(a));
  } else {
    alphas.push_back(json_alpha(q.value("alpha", json(1.0))));
  }
  BoundQuery base;
  base.radius = q.value("radius", 1.0);
  base.dim = q.value("dim", 2);
  base.samples = q.value("samples", std::size_t{500});
  base.delta = q.value("delta", 0.05);
  Table t;
  t.columns = {"alpha", "radius", "dim", "samples", "delta", "rademacher_bound", "discrepancy_bound"};
  if (o.audit) {
    for (const char* c : {"audit_trials", "rademacher_violations", "rademacher_max_gap", "discrepancy_violations",
                          "discrepancy_max_gap"}) {
      t.columns.emplace_back(c);
    }
  }
  bool violated = false;
  for (const Alpha& a : alphas) {
    BoundQuery bq = base;
    bq.alpha = a;
    const bool has_disc = a.is_infinite() || a.value() >= 1.0;
    std::vector<std::string> row{alpha_label(a),
                                 format_number(bq.radius),
                                 std::to_string(bq.dim),
                                 std::to_string(bq.samples),
                                 format_number(bq.delta),
                                 format_number(rademacher_bound(bq)),
                                 has_disc ? format_number(uniform_discrepancy_bound(bq))
                                          : format_number(std::numeric_limits<double>::quiet_NaN())};
    if (o.audit) {
      BoundAuditConfig cfg;
      cfg.spec = load_gmm(o.gmm);
      if (cfg.spec.dim() != bq.dim) throw ArgumentError("audit mixture dimension differs from the query dimension");
      cfg.radius = bq.radius;
      cfg.samples = bq.samples;
      cfg.delta = bq.delta;
      cfg.trials = o.trials;
      cfg.thetas = o.thetas;
      cfg.population = o.population;
      cfg.seed = o.seed;
      auto max_gap = [](const BoundAudit& audit) {
        double g = -std::numeric_limits<double>::infinity();
        for (const BoundTrial& t : audit.trials) g = std::max(g, t.sup_gap);
        return g;
      };
      const BoundAudit r = rademacher_audit(cfg, a);
      row.push_back(std::to_string(r.trials.size()));
      row.push_back(std::to_string(r.violations));
      row.push_back(format_number(max_gap(r)));
      violated = violated || r.violation_rate() > bq.delta;
      if (has_disc) {
        const BoundAudit dsc = discrepancy_audit(cfg, a);
        row.push_back(std::to_string(dsc.violations));
        row.push_back(format_number(max_gap(dsc)));
        violated = violated || dsc.violations > 0;
      } else {
        row.push_back("");
        row.push_back(format_number(std::numeric_limits<double>::quiet_NaN()));
      }
    }
    t.rows.push_back(std::move(row));
  }
  Manifest m{"bounds", o.query, o.seed, o.out, {}};
  if (o.audit) m.extra.push_back({"audit_mixture", o.gmm});
  write_atomic(o.out, t.render(m));
  log << "bounds: " << alphas.size() << " rows written to " << o.out << '\n';
  if (o.strict && violated) throw AuditFailure("bound audit violated");
}

struct TrendOptions {
  std::string gmm = "preset:symmetric";
  std::string alpha = "1";
  std::string ns = "50,200,1000,5000";
  std::size_t runs = 30;
  std::uint64_t seed = 0;
  std::int64_t max_iterations = 200000;
  bool strict = false;
  std::string out;
};

void run_trend(const TrendOptions& o, std::ostream& log) {
  const GmmSpec spec = load_gmm(o.gmm);
  const Alpha alpha = Alpha::parse(o.alpha);
  TrendConfig cfg;
  cfg.sample_sizes.clear();
  for (double n : parse_number_list(o.ns)) {
    if (!(n >= 1.0) || n != std::floor(n)) throw ArgumentError("sample sizes must be positive integers");
    cfg.sample_sizes.push_back(static_cast<std::size_t>(n));
  }
  cfg.runs = o.runs;
  cfg.seed = o.seed;
  cfg.train.max_iterations = o.max_iterations;
  const TrendReport rep = optimality_trend(spec, alpha, cfg);
  Table t;
  t.columns = {"samples", "mean_risk", "bayes_risk", "mean_gap", "standard_error"};
  for (const TrendRow& r : rep.rows) {
    t.rows.push_back({std::to_string(r.samples), format_number(r.mean_risk), format_number(rep.bayes_risk),
                      format_number(r.mean_gap), format_number(r.standard_error)});
  }
  Manifest m{"trend", o.gmm, o.seed, o.out,
             {{"alpha", alpha_label(alpha)},
              {"runs", std::to_string(o.runs)},
              {"non_increasing", bool_text(rep.non_increasing)},
              {"note", "conditional on the logistic model attaining the minimum alpha-risk"}}};
  write_atomic(o.out, t.render(m));
  log << "trend: non-increasing within 1 SE " << bool_text(rep.non_increasing) << '\n';
  if (o.strict && !rep.non_increasing) throw AuditFailure("trend is not non-increasing");
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Alpha> parse_alpha_list(std::string_view text) {
  std::vector<Alpha> out;
  for (const std::string& part : split(text, ',')) {
    if (part.empty()) throw ArgumentError("empty entry in alpha list '" + std::string(text) + "'");
    out.push_back(Alpha::parse(part));
  }
  return out;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ',')) {
    if (part.empty()) throw ArgumentError("empty entry in list '" + std::string(text) + "'");
    out.push_back(parse_double(part));
  }
  return out;
}

std::vector<double> load_pmf(std::string_view source) {
  std::vector<double> masses;
  constexpr std::string_view kBinomial = "binomial:";
  if (source.substr(0, kBinomial.size()) == kBinomial) {
    const auto parts = split(source.substr(kBinomial.size()), ',');
    if (parts.size() != 2) throw ArgumentError("binomial pmf needs 'binomial:n,p'");
    const double n_value = parse_double(parts[0]);
    const double p = parse_double(parts[1]);
    if (!(n_value >= 0.0) || n_value != std::floor(n_value) || n_value > 1e6) {
      throw ArgumentError("binomial n must be a non-negative integer");
    }
    if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("binomial p must lie in [0, 1]");
    const auto n = static_cast<int>(n_value);
    for (int k = 0; k <= n; ++k) {
      if (p == 0.0 || p == 1.0) {
        masses.push_back((p == 0.0 ? k == 0 : k == n) ? 1.0 : 0.0);
        continue;
      }
      const double log_mass = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
                              k * std::log(p) + (n - k) * std::log1p(-p);
      masses.push_back(std::exp(log_mass));
    }
  } else {
    const std::string text = trim(read_file(std::string(source)));
    if (!text.empty() && text.front() == '[') {
      for (const auto& v : json::parse(text)) masses.push_back(v.get<double>());
    } else {
      std::string normalized = text;
      for (char& c : normalized) {
        if (c == ',' || c == '\n' || c == '\r' || c == '\t') c = ' ';
      }
      std::istringstream in(normalized);
      std::string token;
      while (in >> token) masses.push_back(parse_double(token));
    }
  }
  if (masses.empty()) throw ArgumentError("pmf is empty");
  double total = 0.0;
  for (double m : masses) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw ArgumentError("pmf masses must be finite and non-negative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ArgumentError("pmf masses sum to " + format_number(total));
  return masses;
}

GmmSpec parse_gmm_json(std::string_view text) {
  const json j = json::parse(text);
  if (j.contains("preset")) return load_gmm("preset:" + j.at("preset").get<std::string>());
  GmmSpec s;
  s.prior_negative = j.value("prior_negative", 0.5);
  s.mean_negative = json_vector(j.at("mean_negative"), "mean_negative");
  s.mean_positive = json_vector(j.at("mean_positive"), "mean_positive");
  if (j.contains("cov")) {
    s.cov_negative = json_matrix(j.at("cov"), "cov");
    s.cov_positive = s.cov_negative;
  } else {
    s.cov_negative = json_matrix(j.at("cov_negative"), "cov_negative");
    s.cov_positive = json_matrix(j.at("cov_positive"), "cov_positive");
  }
  s.validate();
  return s;
}

GmmSpec load_gmm(std::string_view source) {
  constexpr std::string_view kPreset = "preset:";
  if (source.substr(0, kPreset.size()) == kPreset) {
    const std::string_view name = source.substr(kPreset.size());
    if (name == "symmetric") return gmm_presets::symmetric();
    if (name == "skewed_landscape") return gmm_presets::skewed_landscape();
    if (name == "shared_covariance") return gmm_presets::shared_covariance();
    throw ArgumentError("unknown mixture preset '" + std::string(name) + "'");
  }
  return parse_gmm_json(read_file(std::string(source)));
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.empty()) throw ArgumentError("output path is empty");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw ArgumentError("failed writing '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

std::string Manifest::header() const {
  std::string h;
  h += "# tool: alpha-lab " ALPHA_LAB_VERSION "\n";
  h += "# subcommand: " + subcommand + "\n";
  h += "# config: " + (config.empty() ? std::string("-") : config) + "\n";
  h += "# seed: " + std::to_string(seed) + "\n";
  h += "# output: " + output + "\n";
  h += "# started: " + utc_now() + "\n";
  for (const auto& [k, v] : extra) h += "# " + k + ": " + v + "\n";
  return h;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Experiments and audits for the alpha-loss family", "alpha-lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", ALPHA_LAB_VERSION);

  TiltOptions tilt;
  auto* tilt_cmd = app.add_subcommand("tilt", "alpha-tilted versions of a pmf");
  tilt_cmd->add_option("--pmf", tilt.pmf, "pmf file or binomial:n,p")->required();
  tilt_cmd->add_option("--alphas", tilt.alphas, "comma-separated alphas (inf allowed)")->capture_default_str();
  tilt_cmd->add_option("--out", tilt.out, "output CSV")->required();

  LandscapeOptions land;
  auto* land_cmd = app.add_subcommand("landscape", "empirical alpha-risk over a lattice in the disc (d = 2)");
  land_cmd->add_option("--gmm", land.gmm, "mixture JSON or preset:<name>")->capture_default_str();
  land_cmd->add_option("--alpha", land.alpha, "alpha (inf allowed)")->capture_default_str();
  land_cmd->add_option("--radius", land.radius, "disc radius")->capture_default_str();
  land_cmd->add_option("--grid", land.grid, "lattice points per axis")->capture_default_str();
  land_cmd->add_option("--samples", land.samples, "dataset size")->capture_default_str();
  land_cmd->add_option("--seed", land.seed, "master seed")->capture_default_str();
  land_cmd->add_flag("--raw", land.raw, "keep raw features instead of mapping [-6,6]^2 onto the unit square");
  land_cmd->add_flag("--compare-infinity", land.compare_infinity, "also write the saturation report against alpha = inf");
  land_cmd->add_flag("--strict", land.strict, "exit 4 when the saturation audit fails");
  land_cmd->add_option("--out", land.out, "output CSV")->required();

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "seeded multi-run margin-geometry experiment");
  synth_cmd->add_option("--scenario", synth.scenario, "imbalance, noise or clean")->required();
  synth_cmd->add_option("--alphas", synth.alphas, "comma-separated alphas")->capture_default_str();
  synth_cmd->add_option("--runs", synth.runs, "number of runs")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "master seed")->capture_default_str();
  synth_cmd->add_option("--gmm", synth.gmm, "mixture JSON or preset:<name>")->capture_default_str();
  synth_cmd->add_option("--corruption", synth.corruption, "corruption JSON overriding the scenario");
  synth_cmd->add_flag("--no-bias", synth.no_bias, "train without the constant feature");
  synth_cmd->add_option("--averaging", synth.averaging, "mean or median")->capture_default_str();
  synth_cmd->add_option("--lr", synth.learning_rate, "gradient-descent step")->capture_default_str();
  synth_cmd->add_option("--optimality", synth.optimality, "stationarity stop")->capture_default_str();
  synth_cmd->add_option("--max-iterations", synth.max_iterations, "iteration cap per run")->capture_default_str();
  synth_cmd->add_option("--train-radius", synth.radius, "projection radius (inf disables)")->capture_default_str();
  synth_cmd->add_option("--pool-size", synth.pool_size, "samples drawn per run")->capture_default_str();
  synth_cmd->add_option("--test-per-class", synth.test_per_class, "clean test samples per class")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "output directory")->required();

  AuditOptions audit;
  auto* audit_cmd = app.add_subcommand("slqc-audit", "evolve and re-check SLQC certificates at sampled points");
  audit_cmd->add_option("--gmm", audit.gmm, "mixture JSON or preset:<name>")->capture_default_str();
  audit_cmd->add_option("--alpha0", audit.alpha0, "starting alpha (>= 1)")->capture_default_str();
  audit_cmd->add_option("--targets", audit.targets, "comma-separated target alphas");
  audit_cmd->add_option("--fractions", audit.fractions, "targets as fractions of each point's admissible range")
      ->capture_default_str();
  audit_cmd->add_option("--samples", audit.samples, "audit points")->capture_default_str();
  audit_cmd->add_option("--n", audit.n, "dataset size")->capture_default_str();
  audit_cmd->add_option("--epsilon0", audit.epsilon0, "starting epsilon")->capture_default_str();
  audit_cmd->add_option("--radius", audit.radius, "parameter-ball radius")->capture_default_str();
  audit_cmd->add_option("--lambda", audit.lambda, "bootstrap fraction in (0, 1)")->capture_default_str();
  audit_cmd->add_option("--seed", audit.seed, "master seed")->capture_default_str();
  audit_cmd->add_flag("--strict", audit.strict, "exit 4 on any violation");
  audit_cmd->add_option("--out", audit.out, "output CSV")->required();

  BoundsOptions bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "generalization bounds with optional Monte-Carlo audits");
  bounds_cmd->add_option("--query", bounds.query, "bound query JSON")->required();
  bounds_cmd->add_flag("--audit", bounds.audit, "run the empirical audits");
  bounds_cmd->add_option("--gmm", bounds.gmm, "audit mixture")->capture_default_str();
  bounds_cmd->add_option("--trials", bounds.trials, "audit dataset draws")->capture_default_str();
  bounds_cmd->add_option("--thetas", bounds.thetas, "random parameters per draw")->capture_default_str();
  bounds_cmd->add_option("--population", bounds.population, "population sample size")->capture_default_str();
  bounds_cmd->add_option("--seed", bounds.seed, "master seed")->capture_default_str();
  bounds_cmd->add_flag("--strict", bounds.strict, "exit 4 when an audit fails");
  bounds_cmd->add_option("--out", bounds.out, "output CSV")->required();

  TrendOptions trend;
  auto* trend_cmd = app.add_subcommand("trend", "0-1 risk gap to Bayes across sample sizes");
  trend_cmd->add_option("--gmm", trend.gmm, "mixture JSON or preset:<name>")->capture_default_str();
  trend_cmd->add_option("--alpha", trend.alpha, "alpha (inf allowed)")->capture_default_str();
  trend_cmd->add_option("--ns", trend.ns, "comma-separated sample sizes")->capture_default_str();
  trend_cmd->add_option("--runs", trend.runs, "runs per sample size")->capture_default_str();
  trend_cmd->add_option("--seed", trend.seed, "master seed")->capture_default_str();
  trend_cmd->add_option("--max-iterations", trend.max_iterations, "iteration cap per run")->capture_default_str();
  trend_cmd->add_flag("--strict", trend.strict, "exit 4 when the trend is not non-increasing");
  trend_cmd->add_option("--out", trend.out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    if (tilt_cmd->parsed()) run_tilt(tilt, out);
    if (land_cmd->parsed()) run_landscape(land, out);
    if (synth_cmd->parsed()) run_synth(synth, out);
    if (audit_cmd->parsed()) run_slqc_audit(audit, out);
    if (bounds_cmd->parsed()) run_bounds(bounds, out);
    if (trend_cmd->parsed()) run_trend(trend, out);
  } catch (const AuditFailure& e) {
    err << "alpha-lab: audit violation: " << e.what() << '\n';
    return kAuditViolation;
  } catch (const NumericError& e) {
    err << "alpha-lab: numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const DomainError& e) {
    err << "alpha-lab: numeric failure: " << e.what() << '\n';
    return kNumericFailure;
  } catch (const nlohmann::json::exception& e) {
    err << "alpha-lab: configuration error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "alpha-lab: configuration error: " << e.what() << '\n';
    return kConfigError;
  }
  return kSuccess;
}

}  // namespace alpha_lab::cli
