#include "doctest.h"

#include <cmath>
#include <vector>

#include "mig/rng.hpp"

using namespace mig;

TEST_CASE("identical (seed, stream) reproduces the draw sequence") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different stream ids give different sequences") {
  RngStream a(42, 0);
  RngStream b(42, 1);
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("substream derivation is deterministic and order-free") {
  RngStream base(9, 3);
  RngStream c1 = base.substream(5);
  RngStream c2 = RngStream(9, 3).substream(5);
  CHECK(c1.next_u64() == c2.next_u64());
  // Deriving a substream does not consume state from the parent.
  RngStream p1(9, 3), p2(9, 3);
  (void)p1.substream(11);
  CHECK(p1.next_u64() == p2.next_u64());
}

TEST_CASE("uniform lies in (0,1) and has the right first moments") {
  RngStream rng(1234);
  const int n = 200000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    sum += u;
    sum_sq += u * u;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(std::abs(var - 1.0 / 12.0) < 5e-4);
}

TEST_CASE("normal draws have standard moments") {
  RngStream rng(99);
  const int n = 200000;
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    m1 += z;
    m2 += z * z;
    m3 += z * z * z;
    m4 += z * z * z * z;
  }
  m1 /= n; m2 /= n; m3 /= n; m4 /= n;
  CHECK(std::abs(m1) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(std::abs(m3) < 0.05);
  CHECK(m4 == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("gamma draws match mean and variance for several shapes") {
  RngStream rng(2024);
  for (double shape : {0.5, 1.0, 2.5, 7.0}) {
    const int n = 100000;
    double sum = 0, sum_sq = 0;
    for (int i = 0; i < n; ++i) {
      const double g = rng.gamma(shape);
      CHECK(g > 0.0);
      sum += g;
      sum_sq += g * g;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(mean == doctest::Approx(shape).epsilon(0.03));
    CHECK(var == doctest::Approx(shape).epsilon(0.08));
  }
}
