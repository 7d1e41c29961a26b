#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "mig/inverse_gaussian.hpp"
#include "mig/quadrature.hpp"
#include "mig/rng.hpp"

using namespace mig;

namespace {

// One-sample Kolmogorov-Smirnov statistic against a cdf.
template <typename Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::abs(f - (i + 1) / n));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

// Asymptotic one-sample KS critical value at level 0.01.
double ks_crit_01(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace

TEST_CASE("log density closed-form points") {
  // Exponent vanishes at x = mu.
  CHECK(ig_log_density(IgParams(1, 1), 1.0) ==
        doctest::Approx(-0.91893853320467274).epsilon(1e-14));
  CHECK(ig_log_density(IgParams(2, 3), 2.0) ==
        doctest::Approx(-1.40935315971053586).epsilon(1e-14));
  // 50-digit reference evaluation of the closed form.
  CHECK(ig_log_density(IgParams(1, 4), 0.5) ==
        doctest::Approx(-0.18607058180480947).epsilon(1e-14));
  CHECK_THROWS_AS(ig_log_density(IgParams(1, 1), 0.0), std::domain_error);
  CHECK_THROWS_AS(ig_log_density(IgParams(1, 1), -2.0), std::domain_error);
  CHECK_THROWS_AS(IgParams(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(IgParams(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("cdf integrates the density") {
  for (auto [mu, lambda] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {1.0, 25.0}}) {
    IgParams p(mu, lambda);
    for (double x : {0.3, 1.0, 2.7}) {
      const double quad =
          integrate([&](double t) { return std::exp(ig_log_density(p, t)); },
                    1e-12, x)
              .value;
      CHECK(ig_cdf(p, x) == doctest::Approx(quad).epsilon(1e-9));
    }
  }
  CHECK(ig_cdf(IgParams(1, 1), 0.0) == 0.0);
  CHECK(ig_cdf(IgParams(1, 1), -1.0) == 0.0);
  // Stable for large lambda/mu where exp(2 lambda/mu) overflows.
  const double far = ig_cdf(IgParams(1.0, 1e6), 0.99);
  CHECK(far > 0.0);
  CHECK(far < 0.5);
}

TEST_CASE("sampler moments match mu and mu^3/lambda") {
  RngStream rng(7);
  IgParams p(1.0, 1.0);
  const long n = 1000000;
  double sum = 0, sum_sq = 0;
  for (long i = 0; i < n; ++i) {
    const double x = ig_sample(p, rng);
    CHECK(x > 0.0);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  const double se_mean = std::sqrt(p.variance() / n);
  CHECK(std::abs(mean - p.mean()) < 3.0 * se_mean);
  // IG(1,1): E[(X-mu)^4] = 3 mu^6/l^2 (1 + 5 mu/l) = 18, se of var ~ sqrt((m4-var^2)/n).
  const double se_var = std::sqrt((18.0 - 1.0) / n);
  CHECK(std::abs(var - p.variance()) < 3.0 * se_var);
}

TEST_CASE("sampler empirical cdf passes KS against the closed form") {
  RngStream rng(17);
  IgParams p(2.0, 3.0);
  std::vector<double> xs(20000);
  for (auto& x : xs) x = ig_sample(p, rng);
  const double d = ks_statistic(xs, [&](double x) { return ig_cdf(p, x); });
  CHECK(d < ks_crit_01(xs.size()));
}

TEST_CASE("quantile inverts the cdf") {
  IgParams p(1.5, 0.8);
  for (double prob : {0.01, 0.2, 0.5, 0.9, 0.999}) {
    const double x = ig_quantile(p, prob);
    CHECK(ig_cdf(p, x) == doctest::Approx(prob).epsilon(1e-9));
  }
}

TEST_CASE("truncated sampler: untruncated interval reduces to plain draws") {
  RngStream rng(5);
  IgParams p(1.0, 1.0);
  std::vector<double> xs(20000);
  for (auto& x : xs)
    x = truncated_ig_sample(p, 0.0, std::numeric_limits<double>::infinity(), rng);
  const double d = ks_statistic(xs, [&](double x) { return ig_cdf(p, x); });
  CHECK(d < ks_crit_01(xs.size()));
}

TEST_CASE("truncated sampler matches the quadrature mean on [1,2]") {
  RngStream rng(11);
  IgParams p(1.0, 1.0);
  const long n = 100000;
  double sum = 0, sum_sq = 0;
  for (long i = 0; i < n; ++i) {
    const double x = truncated_ig_sample(p, 1.0, 2.0, rng);
    CHECK(x >= 1.0);
    CHECK(x <= 2.0);
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  auto dens = [&](double t) { return std::exp(ig_log_density(p, t)); };
  const double mass = integrate(dens, 1.0, 2.0).value;
  const double first = integrate([&](double t) { return t * dens(t); }, 1.0, 2.0).value;
  CHECK(std::abs(mean - first / mass) < 3.0 * se);
}

TEST_CASE("truncated sampler falls back to inversion on thin intervals") {
  RngStream rng(3);
  IgParams p(1.0, 1.0);
  // Pr(X in [8, 8.2]) is far below the 1% rejection threshold.
  for (int i = 0; i < 200; ++i) {
    const double x = truncated_ig_sample(p, 8.0, 8.2, rng);
    CHECK(x >= 8.0);
    CHECK(x <= 8.2);
  }
  CHECK_THROWS_AS(truncated_ig_sample(p, 1e8, 2e8, rng), std::runtime_error);
  CHECK_THROWS_AS(truncated_ig_sample(p, 2.0, 1.0, rng), std::invalid_argument);
}
