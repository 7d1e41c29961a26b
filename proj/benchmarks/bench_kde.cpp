#include <benchmark/benchmark.h>

#include "mig/kde.hpp"

namespace {

using namespace mig;

SampleBatch batch_for(int d, int n) {
  MigParams p(HalfSpace(Vector::Ones(d)), Vector(2.0 * Vector::Ones(d)),
              SpdMatrix(equicorrelation(d, 0.5)));
  RngStream rng(7);
  return mig_sample(p, n, rng);
}

void BM_KdeEval(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SampleBatch batch = batch_for(2, n);
  SpdMatrix h(0.2 * Matrix::Identity(2, 2));
  Vector xi(2);
  xi << 2.0, 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(kde_eval(batch, h, xi));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_KdeEval)->Arg(250)->Arg(1000)->Arg(4000);

void BM_LcvScore(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SampleBatch batch = batch_for(2, n);
  SpdMatrix h(0.2 * Matrix::Identity(2, 2));
  for (auto _ : state) benchmark::DoNotOptimize(lcv_score(batch, h));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_LcvScore)->Arg(100)->Arg(250)->Arg(500);

void BM_NormalReference(benchmark::State& state) {
  SampleBatch batch = batch_for(3, 500);
  for (auto _ : state)
    benchmark::DoNotOptimize(normal_reference_bandwidth(batch));
}
BENCHMARK(BM_NormalReference);

}  // namespace
