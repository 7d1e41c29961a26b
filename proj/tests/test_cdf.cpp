#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "mig/cdf.hpp"

using namespace mig;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MigParams make_params(std::initializer_list<double> beta,
                      std::initializer_list<double> xi, Matrix omega) {
  Vector b(beta.size()), m(xi.size());
  Eigen::Index i = 0;
  for (double v : beta) b(i++) = v;
  i = 0;
  for (double v : xi) m(i++) = v;
  return MigParams(HalfSpace(b), m, SpdMatrix(std::move(omega)));
}

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

bool agree(const McEstimate& a, const McEstimate& b) {
  const double se = std::sqrt(a.std_error * a.std_error +
                              b.std_error * b.std_error);
  return std::abs(a.value - b.value) <= 3.0 * std::max(se, 1e-12);
}

}  // namespace

TEST_CASE("radius bounds closed forms") {
  Vector beta = vec2(1, 1), q = vec2(1, 1);
  auto rb = radius_bounds(beta, q);
  CHECK(rb.r_min == 0.0);
  CHECK(rb.r_max == doctest::Approx(2.0));

  beta = vec2(-1, -1);
  q = vec2(-1, -3);
  rb = radius_bounds(beta, q);
  CHECK(rb.r_min == doctest::Approx(4.0));
  CHECK(rb.r_max == kInf);

  beta = vec2(1, -1);
  q = vec2(0.3, -0.7);
  rb = radius_bounds(beta, q);
  CHECK(rb.r_min == 0.0);
  CHECK(rb.r_max == kInf);
}

TEST_CASE("bivariate bound cases") {
  using Id = BivariateBoundCase::Id;

  SUBCASE("all-positive beta with q inside") {
    auto c = bivariate_bounds(vec2(1, 1), vec2(1, 1));
    CHECK(c.id == Id::PP);
    CHECK(c.r_min == 0.0);
    CHECK(c.r_max == doctest::Approx(2.0));
    REQUIRE(c.v1.has_value());
    REQUIRE(c.v2.has_value());
    CHECK((*c.v1)(0) == doctest::Approx(1.0));
    CHECK((*c.v1)(1) == doctest::Approx(-1.0));
    CHECK((*c.v2)(0) == doctest::Approx(-1.0));
    CHECK((*c.v2)(1) == doctest::Approx(1.0));
    // z_min(0) = Q2 v1, z_max(0) = Q2 v2 with Q2 = (-1,1)/sqrt(2).
    CHECK(c.z_min(0.0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
    CHECK(c.z_max(0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    // Apex: the interval collapses at r = beta^T q.
    CHECK(c.z_min(2.0) == doctest::Approx(c.z_max(2.0)).epsilon(1e-12));
  }

  SUBCASE("all-positive beta with q outside has zero probability") {
    CHECK(bivariate_bounds(vec2(1, 1), vec2(-1, -1)).id == Id::ZERO_PROB);
  }

  SUBCASE("beta1 = 0 with positive beta2") {
    auto c = bivariate_bounds(vec2(0, 1), vec2(3, 2));
    CHECK(c.id == Id::B1_zero_pos);
    CHECK(c.r_min == 0.0);
    CHECK(c.r_max == doctest::Approx(2.0));
    CHECK(c.z_min(1.0) == doctest::Approx(-3.0));
    CHECK(c.z_max(1.0) == kInf);
  }

  SUBCASE("mixed signs keep r unbounded") {
    auto c = bivariate_bounds(vec2(-1, 1), vec2(0, 5));
    CHECK((c.id == Id::NP_in));
    CHECK(c.r_min == 0.0);
    CHECK(c.r_max == kInf);
    CHECK(c.z_max(1.0) == kInf);
    auto c2 = bivariate_bounds(vec2(-1, 1), vec2(1, 0));
    CHECK((c2.id == Id::NP_out));
  }

  SUBCASE("z_min <= z_max across the r range (random cases)") {
    RngStream rng(7171);
    for (int rep = 0; rep < 200; ++rep) {
      Vector beta = vec2(rng.normal(), rng.normal());
      if (beta.cwiseAbs().maxCoeff() < 0.05) beta(0) = 1.0;
      if (rep % 5 == 0) beta(rep % 2) = 0.0;
      if (beta.cwiseAbs().maxCoeff() == 0.0) beta(0) = 1.0;
      const Vector q = vec2(2.0 * rng.normal(), 2.0 * rng.normal());
      const auto c = bivariate_bounds(beta, q);
      if (c.id == BivariateBoundCase::Id::ZERO_PROB) continue;
      const double hi = c.r_max == kInf ? c.r_min + 25.0 : c.r_max;
      for (int g = 0; g < 100; ++g) {
        const double r = c.r_min + (hi - c.r_min) * g / 99.0;
        CHECK(c.z_min(r) <= c.z_max(r) + 1e-9);
      }
    }
  }
}

TEST_CASE("z_bounds_lp reduces to the bivariate closed forms in d = 2") {
  RngStream rng(1234);
  int tested = 0;
  while (tested < 100) {
    Vector beta = vec2(rng.normal(), rng.normal());
    if (std::abs(beta(0)) < 0.05 || std::abs(beta(1)) < 0.05) continue;
    const Vector q = vec2(2.0 * rng.normal(), 2.0 * rng.normal());
    const auto c = bivariate_bounds(beta, q);
    if (c.id == BivariateBoundCase::Id::ZERO_PROB) continue;
    const double hi = c.r_max == kInf ? c.r_min + 10.0 : c.r_max;
    const double r = c.r_min + (hi - c.r_min) * (0.1 + 0.8 * rng.uniform());
    Rotation rot = orthonormal_complement(beta);
    const auto [zlo, zhi] = z_bounds_lp(beta, rot, q, r, Vector(0));
    if (c.z_min(r) == -kInf)
      CHECK(zlo == -kInf);
    else
      CHECK(std::abs(zlo - c.z_min(r)) < 1e-9);
    if (c.z_max(r) == kInf)
      CHECK(zhi == kInf);
    else
      CHECK(std::abs(zhi - c.z_max(r)) < 1e-9);
    ++tested;
  }
}

TEST_CASE("z_bounds_lp collapses at the apex for all-positive beta") {
  Vector beta(3), q(3);
  beta << 1, 2, 0.5;
  q << 1, 1, 2;
  Rotation rot = orthonormal_complement(beta);
  const double r_max = beta.dot(q);
  const auto [zlo, zhi] = z_bounds_lp(beta, rot, q, r_max, Vector(0));
  CHECK(zlo == doctest::Approx(zhi).epsilon(1e-9));
  // And the apex point is x = q itself.
  CHECK(zlo == doctest::Approx(rot.q2().row(0).dot(q)).epsilon(1e-9));
}

TEST_CASE("z_bounds_lp interval brackets rejection-sampled feasible points") {
  RngStream rng(5656);
  for (int rep = 0; rep < 5; ++rep) {
    Vector beta(3), q(3);
    for (int i = 0; i < 3; ++i) beta(i) = 0.3 + rng.uniform();
    for (int i = 0; i < 3; ++i) q(i) = 1.0 + rng.normal();
    const double btq = beta.dot(q);
    if (btq <= 0.1) continue;
    const double r = 0.6 * btq;
    Rotation rot = orthonormal_complement(beta);
    const auto [zlo, zhi] = z_bounds_lp(beta, rot, q, r, Vector(0));

    // Sample the slice {beta^T x = r, x <= q} by rejection in a box.
    double seen_lo = kInf, seen_hi = -kInf;
    long kept = 0;
    for (long t = 0; t < 100000 && kept < 2000; ++t) {
      Vector x(3);
      for (int i = 0; i < 2; ++i) x(i) = q(i) - 4.0 * rng.uniform();
      x(2) = (r - beta(0) * x(0) - beta(1) * x(1)) / beta(2);
      if (x(2) > q(2)) continue;
      ++kept;
      const double z1 = rot.q2().row(0).dot(x);
      seen_lo = std::min(seen_lo, z1);
      seen_hi = std::max(seen_hi, z1);
    }
    REQUIRE(kept > 100);
    CHECK(seen_lo >= zlo - 1e-9);
    CHECK(seen_hi <= zhi + 1e-9);
  }
}

TEST_CASE("plain MC endpoints") {
  MigParams p = make_params({1, 1}, {1, 1}, Matrix::Identity(2, 2));
  RngStream rng(1);
  auto all = cdf_plain_mc(p, vec2(kInf, kInf), 200, rng);
  CHECK(all.value == 1.0);
  CHECK(all.std_error == 0.0);
  auto none = cdf_plain_mc(p, vec2(-0.5, 0.2), 200, rng);
  CHECK(none.value == 0.0);  // beta^T q < 0 with positive beta
  CHECK_THROWS_AS(cdf_plain_mc(p, vec2(1, 1), 50, rng), std::invalid_argument);
}

TEST_CASE("SOV matches plain MC across the bivariate sign cases") {
  RngStream rng(909);
  const Matrix omega = equicorrelation(2, 0.3);
  struct Case {
    double b1, b2, x1, x2, q1, q2;
  };
  const std::vector<Case> cases = {
      {1, 1, 1, 1, 1, 1},        // PP
      {1, 1, 1, 1, 10, 10},      // PP, nearly full mass
      {-1, 1, -1, 2, 0.5, 1.5},  // NP with q in the half-space
      {-1, 1, -1, 2, -1, 0.5},   // NP with q outside
      {1, -1, 2, -1, 1.5, 0.2},  // PN
      {-1, -1, -1, -1, -0.2, -0.4},  // NN
      {0, 1, 1, 2, 3, 2},        // B1 zero, beta2 > 0
      {0, -1, 1, -2, 3, -1},     // B1 zero, beta2 < 0
      {1, 0, 2, 1, 3, 2},        // B2 zero, beta1 > 0
      {-1, 0, -2, 1, -1, 2},     // B2 zero, beta1 < 0
  };
  for (const auto& c : cases) {
    CAPTURE(c.b1);
    CAPTURE(c.b2);
    MigParams p = make_params({c.b1, c.b2}, {c.x1, c.x2}, omega);
    const Vector q = vec2(c.q1, c.q2);
    auto mc = cdf_plain_mc(p, q, 200000, rng);
    auto sov = cdf_sov(p, q, 20000, rng);
    CHECK(agree(mc, sov));
  }
}

TEST_CASE("SOV matches plain MC in d = 3 with LP bounds") {
  RngStream rng(808);
  MigParams p = make_params({1, 1, 1}, {1, 1, 1}, equicorrelation(3, 0.5));
  Vector q(3);
  q << 2, 2, 2;
  auto mc = cdf_plain_mc(p, q, 200000, rng);
  auto sov = cdf_sov(p, q, 5000, rng);
  CHECK(agree(mc, sov));

  // Mixed-sign direction exercises the unbounded radial case.
  MigParams p2 = make_params({1, -0.5, 0.25}, {2, 1, 1}, equicorrelation(3, 0.2));
  Vector q2(3);
  q2 << 2.5, 0.5, 1.5;
  auto mc2 = cdf_plain_mc(p2, q2, 200000, rng);
  auto sov2 = cdf_sov(p2, q2, 5000, rng);
  CHECK(agree(mc2, sov2));
}

TEST_CASE("SOV zero-probability geometry is exact") {
  RngStream rng(3);
  MigParams p = make_params({1, 1}, {1, 1}, Matrix::Identity(2, 2));
  auto est = cdf_sov(p, vec2(-1, -1), 500, rng);
  CHECK(est.value == 0.0);
  CHECK(est.std_error == 0.0);
}

TEST_CASE("SOV in d = 1 is the exact radial CDF") {
  RngStream rng(4);
  Vector b(1), m(1);
  b << 2;
  m << 1;
  MigParams p(HalfSpace(b), m, SpdMatrix(Matrix::Constant(1, 1, 0.5)));
  Vector q(1);
  q << 1.2;
  auto est = cdf_sov(p, q, 100, rng);
  auto mc = cdf_plain_mc(p, q, 400000, rng);
  CHECK(est.std_error == 0.0);
  CHECK(std::abs(est.value - mc.value) < 3.0 * mc.std_error);
}

TEST_CASE("monotonicity in q") {
  RngStream rng(66);
  MigParams p = make_params({1, 1}, {1, 1}, equicorrelation(2, 0.4));
  double prev = -1.0;
  for (double s : {0.5, 1.0, 1.8, 3.0, 6.0}) {
    auto est = cdf_sov(p, vec2(s, s), 20000, rng);
    CHECK(est.value + 3.0 * est.std_error >= prev);
    prev = est.value - 3.0 * est.std_error;
  }
}

TEST_CASE("SOV variance no larger than plain MC at equal draws (most cases)") {
  RngStream rng(2121);
  const Matrix omega = equicorrelation(2, 0.3);
  int wins = 0, total = 0;
  const std::vector<std::pair<Vector, Vector>> grid = {
      {vec2(1, 1), vec2(1, 1)},     {vec2(1, 1), vec2(2, 0.5)},
      {vec2(-1, 1), vec2(0.5, 2)},  {vec2(1, -1), vec2(2, -0.5)},
      {vec2(-1, -1), vec2(-0.3, -0.3)}, {vec2(0, 1), vec2(2, 1.5)},
      {vec2(1, 0), vec2(1.5, 2)},   {vec2(2, 1), vec2(1.5, 1.2)},
  };
  for (const auto& [beta, q] : grid) {
    Vector xi = beta / beta.squaredNorm() * 2.0;  // beta^T xi = 2
    MigParams p(HalfSpace(beta), xi, SpdMatrix(omega));
    auto mc = cdf_plain_mc(p, q, 10000, rng);
    auto sov = cdf_sov(p, q, 10000, rng);
    ++total;
    if (sov.std_error <= mc.std_error + 1e-12) ++wins;
  }
  CHECK(wins * 4 >= total * 3);  // >= 75% of the small grid
}

TEST_CASE("SOV matches plain MC in d = 4 (three sequential LP stages)") {
  RngStream rng(4040);
  MigParams p = make_params({1, 1, 1, 1}, {1, 1, 1, 1},
                            equicorrelation(4, 0.25));
  Vector q(4);
  q << 1.5, 1.5, 1.5, 1.5;
  auto mc = cdf_plain_mc(p, q, 200000, rng);
  auto sov = cdf_sov(p, q, 3000, rng);
  CHECK(agree(mc, sov));
}

TEST_CASE("z_bounds_lp rejects infeasible constraint sets") {
  Vector beta(3), q(3);
  beta << 1, 1, 1;
  q << 1, 1, 1;
  Rotation rot = orthonormal_complement(beta);
  // r above the box maximum of beta^T x makes the slice empty.
  CHECK_THROWS_AS(z_bounds_lp(beta, rot, q, 5.0, Vector(0)),
                  std::runtime_error);
}
