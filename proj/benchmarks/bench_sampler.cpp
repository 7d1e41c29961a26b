#include <benchmark/benchmark.h>

#include "mig/sampler.hpp"

namespace {

using namespace mig;

MigParams params_for(int d) {
  return MigParams(HalfSpace(Vector::Ones(d)), Vector(2.0 * Vector::Ones(d)),
                   SpdMatrix(equicorrelation(d, 0.5)));
}

void BM_MigDraw(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  MigSampler sampler(params_for(d));
  RngStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sampler.draw(rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MigDraw)->Arg(2)->Arg(3)->Arg(4);

void BM_IgDraw(benchmark::State& state) {
  IgParams p(1.0, 2.0);
  RngStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(ig_sample(p, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IgDraw);

void BM_TruncatedIgDraw(benchmark::State& state) {
  IgParams p(1.0, 1.0);
  RngStream rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(truncated_ig_sample(p, 0.5, 2.0, rng));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TruncatedIgDraw);

}  // namespace

BENCHMARK_MAIN();
