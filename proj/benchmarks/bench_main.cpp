#include <random>

#include <benchmark/benchmark.h>

#include "hts/ed.hpp"
#include "hts/graph.hpp"
#include "hts/lhts.hpp"
#include "hts/nhts.hpp"
#include "hts/stats.hpp"
#include "hts/synth.hpp"

namespace {

using namespace hts;

Eigen::VectorXd uniform_column(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd v(n);
  for (int k = 0; k < n; ++k) v[k] = u(rng);
  return v;
}

Dataset dataset(int d, int n, Mechanism m) {
  ScmConfig c;
  c.mechanism = m;
  c.seed = 3;
  return simulate(erdos_renyi_dag(d, d, 1), n, c).data;
}

void BM_DistanceCovarianceTest(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = uniform_column(n, 1), y = uniform_column(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(marginal_independent(x, y, TestConfig{}));
  state.SetComplexityN(n);
}
BENCHMARK(BM_DistanceCovarianceTest)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000)->Complexity(benchmark::oNSquared);

void BM_KernelConditionalTest(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto x = uniform_column(n, 1), y = uniform_column(n, 2);
  Eigen::MatrixXd z(n, 2);
  z << uniform_column(n, 3), uniform_column(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(conditional_independent(x, y, z, TestConfig{}));
  state.SetComplexityN(n);
}
BENCHMARK(BM_KernelConditionalTest)->Arg(125)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNCubed);

void BM_KernelRidgeResiduals(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto y = uniform_column(n, 1);
  Eigen::MatrixXd x(n, 3);
  x << uniform_column(n, 2), uniform_column(n, 3), uniform_column(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(krr_residuals(y, x, default_layer_kernel()));
  state.SetComplexityN(n);
}
BENCHMARK(BM_KernelRidgeResiduals)->Arg(125)->Arg(250)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond)
    ->Complexity(benchmark::oNCubed);

void BM_Lhts(benchmark::State& state) {
  const auto ds = dataset(static_cast<int>(state.range(0)), 1000, Mechanism::linear);
  for (auto _ : state) benchmark::DoNotOptimize(lhts(ds, TestConfig{}));
}
BENCHMARK(BM_Lhts)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Nhts(benchmark::State& state) {
  const auto ds = dataset(static_cast<int>(state.range(0)), 300, Mechanism::quadratic);
  for (auto _ : state) benchmark::DoNotOptimize(nhts(ds, TestConfig{}));
}
BENCHMARK(BM_Nhts)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_EdgeDiscoveryOracle(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const Dag g = erdos_renyi_dag(d, 2.0 * d, 5);
  EdConfig cfg;
  cfg.oracle = g;
  const auto order = random_topological_order(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(ed_linear(Dataset(), order, cfg));
}
BENCHMARK(BM_EdgeDiscoveryOracle)->Arg(10)->Arg(20)->Arg(40);

void BM_DSeparation(benchmark::State& state) {
  const Dag g = erdos_renyi_dag(30, 60, 2);
  for (auto _ : state) benchmark::DoNotOptimize(d_separated(g, 0, 29, {5, 10, 15}));
}
BENCHMARK(BM_DSeparation);

}  // namespace

BENCHMARK_MAIN();
