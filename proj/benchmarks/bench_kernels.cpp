#include <benchmark/benchmark.h>

#include "nht/bridge_mc.hpp"
#include "nht/kernels.hpp"
#include "nht/subordinator.hpp"

namespace {

void BM_StableKernelTable(benchmark::State& state) {
  nht::KernelEvaluator eval({nht::Stable{1.5}, 1});
  double r = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(0.1, r));
    r = r < 10.0 ? r + 0.01 : 0.0;
  }
}
BENCHMARK(BM_StableKernelTable);

void BM_RelativisticKernel(benchmark::State& state) {
  nht::KernelEvaluator eval({nht::Relativistic{1.0, 1.0}, 1});
  double r = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(0.1, r));
    r = r < 10.0 ? r + 0.01 : 0.0;
  }
}
BENCHMARK(BM_RelativisticKernel);

void BM_StableKernelAdaptive(benchmark::State& state) {
  nht::QuadratureConfig cfg;
  nht::KernelSpec spec{nht::Stable{1.5}, 1};
  double r = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nht::eval_kernel(spec, 0.1, r, cfg));
    r = r < 10.0 ? r + 0.1 : 0.1;
  }
}
BENCHMARK(BM_StableKernelAdaptive);

void BM_SubordinatorSample(benchmark::State& state) {
  nht::SubordinatorSpec sub{0.75, std::nullopt};
  nht::CounterRng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(nht::sample_subordinator(sub, 1.0, rng));
}
BENCHMARK(BM_SubordinatorSample);

void BM_EtaDensity(benchmark::State& state) {
  nht::QuadratureConfig cfg;
  nht::SubordinatorSpec sub{0.75, std::nullopt};
  double s = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(nht::eta_density(sub, 1.0, s, cfg));
    s = s < 20.0 ? s * 1.1 : 0.1;
  }
}
BENCHMARK(BM_EtaDensity);

void BM_BridgeSkeleton(benchmark::State& state) {
  nht::BridgeMc mc({nht::Stable{1.5}, 1});
  nht::CounterRng rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(mc.sample_free_skeleton({0.0}, 0.2, 16, rng));
}
BENCHMARK(BM_BridgeSkeleton);

}  // namespace

BENCHMARK_MAIN();
