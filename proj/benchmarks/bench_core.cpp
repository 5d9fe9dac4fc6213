// Copyright 2026 The alpha-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "alpha_lab/gmm.hpp"
#include "alpha_lab/landscape.hpp"
#include "alpha_lab/logistic.hpp"
#include "alpha_lab/loss.hpp"
#include "alpha_lab/slqc.hpp"

using namespace alpha_lab;

namespace {

std::vector<double> margin_samples(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::vector<double> z(n);
  for (double& v : z) v = u(rng);
  return z;
}

void BM_MarginLoss(benchmark::State& state) {
  const Alpha alpha(static_cast<double>(state.range(0)) / 10.0);
  const auto z = margin_samples(4096);
  for (auto _ : state) {
    double sum = 0.0;
    for (double v : z) sum += margin_loss(alpha, v);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(z.size()));
}
BENCHMARK(BM_MarginLoss)->Arg(5)->Arg(10)->Arg(30);

void BM_MarginLossDerivative(benchmark::State& state) {
  const Alpha alpha(2.0);
  const auto z = margin_samples(4096);
  for (auto _ : state) {
    double sum = 0.0;
    for (double v : z) sum += margin_loss_derivative(alpha, v) + margin_loss_second_derivative(alpha, v);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(z.size()));
}
BENCHMARK(BM_MarginLossDerivative);

void BM_RiskGradient(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const LabeledDataset data = sample_gmm(gmm_presets::symmetric(), n, 3, FeatureMap::symmetric_box(2));
  const Alpha alpha(2.0);
  Eigen::VectorXd theta(2);
  theta << 0.4, -0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(risk_gradient(alpha, theta, data));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RiskGradient)->Arg(100)->Arg(1000)->Arg(10000);

void BM_RiskHessian(benchmark::State& state) {
  const LabeledDataset data = sample_gmm(gmm_presets::symmetric(), 1000, 3, FeatureMap::symmetric_box(2));
  const Alpha alpha(0.8);
  Eigen::VectorXd theta(2);
  theta << 0.4, -0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(risk_hessian(alpha, theta, data));
  }
}
BENCHMARK(BM_RiskHessian);

void BM_NormalizedGradientDescent(benchmark::State& state) {
  const LabeledDataset data = sample_gmm(gmm_presets::symmetric(), 200, 5, FeatureMap::symmetric_box(2));
  const Alpha alpha(0.7);
  const OracleFunction f([&](const Eigen::VectorXd& t) { return empirical_risk(alpha, t, data); },
                         [&](const Eigen::VectorXd& t) { return risk_gradient(alpha, t, data); }, 2);
  NgdConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.iterations = state.range(0);
  cfg.initial = Eigen::VectorXd::Zero(2);
  const Ball ball{Eigen::VectorXd::Zero(2), 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(ngd(f, cfg, ball));
  }
}
BENCHMARK(BM_NormalizedGradientDescent)->Arg(100)->Arg(1000);

void BM_LandscapeGrid(benchmark::State& state) {
  const LabeledDataset data = sample_gmm(gmm_presets::skewed_landscape(), 500, 1, FeatureMap::symmetric_box(2));
  const Alpha alpha(2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(landscape_grid(data, alpha, 1.0, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_LandscapeGrid)->Arg(21)->Arg(51);

}  // namespace

BENCHMARK_MAIN();
