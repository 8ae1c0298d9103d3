// Microbenchmarks for the layout builders and the mode-by-mode executor.
// Run manually: build/benchmarks/mttkrp_benchmarks --benchmark_min_time=0.5

#include <benchmark/benchmark.h>

#include "mttkrp/kernel.hpp"
#include "mttkrp/layout.hpp"
#include "mttkrp/oracle.hpp"
#include "mttkrp/synthetic.hpp"

namespace {

using namespace mttkrp;

SparseTensorCOO<float> bench_tensor() {
  SyntheticSpec spec;
  spec.dims = {512, 24, 512};
  spec.nnz = 100000;
  spec.dist = SyntheticDist::mode_skewed;
  spec.skew_mode = 1;
  spec.skew_distinct = 24;
  spec.seed = 1;
  return generate_synthetic<float>(spec);
}

const SparseTensorCOO<float>& tensor() {
  static const auto t = bench_tensor();
  return t;
}

void BM_build_mode_plans(benchmark::State& state) {
  const auto policy = static_cast<SchemePolicy>(state.range(0));
  for (auto _ : state) {
    auto plans = build_mode_plans(tensor(), 8, Strategy::cyclic, policy);
    benchmark::DoNotOptimize(plans);
  }
}

void BM_mttkrp_sweep(benchmark::State& state) {
  const auto policy = static_cast<SchemePolicy>(state.range(0));
  const bool deterministic = state.range(1) != 0;
  const std::size_t kappa = 8;
  const auto plans = build_mode_plans(tensor(), kappa, Strategy::cyclic, policy);
  const auto factors = random_factors<float>(tensor().shape(), 32, 7);
  const ExecConfig config{kappa, 32, deterministic};

  for (auto _ : state) {
    auto outs = mttkrp_all_modes(tensor(), plans, factors, config, false);
    benchmark::DoNotOptimize(outs);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * tensor().nnz() *
                          tensor().mode_count());
}

void BM_oracle_sweep(benchmark::State& state) {
  const auto factors = random_factors<float>(tensor().shape(), 32, 7);
  for (auto _ : state) {
    for (std::size_t d = 0; d < tensor().mode_count(); ++d) {
      auto out = oracle_mttkrp(tensor(), factors, d);
      benchmark::DoNotOptimize(out);
    }
  }
}

}  // namespace

BENCHMARK(BM_build_mode_plans)
    ->Arg(static_cast<int>(SchemePolicy::adaptive))
    ->Arg(static_cast<int>(SchemePolicy::scheme2_only))
    ->Unit(benchmark::kMillisecond);

BENCHMARK(BM_mttkrp_sweep)
    ->ArgsProduct({{static_cast<int>(SchemePolicy::adaptive),
                    static_cast<int>(SchemePolicy::scheme1_only),
                    static_cast<int>(SchemePolicy::scheme2_only)},
                   {0, 1}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK(BM_oracle_sweep)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
