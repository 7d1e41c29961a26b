#include <benchmark/benchmark.h>

#include "mig/cdf.hpp"

namespace {

using namespace mig;

MigParams params_for(int d) {
  return MigParams(HalfSpace(Vector::Ones(d)), Vector(Vector::Ones(d)),
                   SpdMatrix(equicorrelation(d, 0.3)));
}

void BM_CdfPlainMc(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  MigParams p = params_for(d);
  const Vector q = 1.5 * Vector::Ones(d);
  RngStream rng(3);
  for (auto _ : state)
    benchmark::DoNotOptimize(cdf_plain_mc(p, q, 1000, rng));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_CdfPlainMc)->Arg(2)->Arg(3);

void BM_CdfSov(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  MigParams p = params_for(d);
  const Vector q = 1.5 * Vector::Ones(d);
  RngStream rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(cdf_sov(p, q, 1000, rng));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_CdfSov)->Arg(2)->Arg(3);

void BM_ZBoundsLp(benchmark::State& state) {
  Vector beta(3), q(3);
  beta << 1, 0.5, 0.25;
  q << 2, 2, 2;
  Rotation rot = orthonormal_complement(beta);
  for (auto _ : state)
    benchmark::DoNotOptimize(z_bounds_lp(beta, rot, q, 1.0, Vector(0)));
}
BENCHMARK(BM_ZBoundsLp);

}  // namespace
