// Serial reference against the OpenMP kernels, plus the sampling back ends.

#include <benchmark/benchmark.h>

#include "exceed/gaussian.hpp"
#include "exceed/montecarlo.hpp"

using namespace exceed;

namespace {

ExperimentConfig bench_config(std::uint64_t n) {
  ExperimentConfig c;
  c.n = n;
  c.replications = 128;
  c.levels = {{0.0, 0.0}, {1.0, 0.5}};
  c.intervals = {{0.0, 1.0}, {0.0, 0.5}, {0.5, 1.0}};
  c.k = 2;
  c.blocks = {0.5, 0.25, 0.25};
  return c;
}

void BM_EnsembleSerial(benchmark::State& state) {
  const auto c = bench_config(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ensemble(c, c.n, 1, Execution::kSerial));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.replications));
}

void BM_EnsembleParallel(benchmark::State& state) {
  const auto c = bench_config(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ensemble(c, c.n, 1, Execution::kParallel));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.replications));
}

void BM_CirculantPair(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const CirculantEmbedding e(CorrelationModel::geometric(0.5), n);
  auto ws = e.make_workspace();
  std::vector<double> a(n), b(n);
  std::uint64_t id = 0;
  for (auto _ : state) {
    e.sample_pair(1, id++, a, b, ws);
    benchmark::DoNotOptimize(a.data());
  }
  state.SetItemsProcessed(state.iterations() * 2);
}

void BM_DenseReference(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t id = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_path_dense(CorrelationModel::geometric(0.5), n, 1, id++));
}

void BM_BermanSerial(benchmark::State& state) {
  const auto m = CorrelationModel::power(2.0, 1.0);
  const auto d = ScaleDistribution::weibullian(1, 1, 0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(berman_sum(m, d, static_cast<std::uint64_t>(state.range(0)), 0.0, 1e-9, Execution::kSerial));
  }
}

void BM_BermanParallel(benchmark::State& state) {
  const auto m = CorrelationModel::power(2.0, 1.0);
  const auto d = ScaleDistribution::weibullian(1, 1, 0, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(berman_sum(m, d, static_cast<std::uint64_t>(state.range(0)), 0.0, 1e-9, Execution::kParallel));
  }
}

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnsembleParallel)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CirculantPair)->Arg(1 << 10)->Arg(1 << 16)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DenseReference)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BermanSerial)->Arg(1 << 12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BermanParallel)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
