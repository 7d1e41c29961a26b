#pragma once

namespace mig {

/// Standard normal density.
double norm_pdf(double x);

/// Standard normal distribution function, accurate to full double precision.
double norm_cdf(double x);

/// ln Phi(x), stable far into the left tail (x << -37 where Phi underflows).
double norm_logcdf(double x);

/// Standard normal quantile function (Wichura's AS 241, PPND16 variant).
/// Accurate to ~1e-15 relative for p in (0, 1); throws std::domain_error
/// outside.
double norm_quantile(double p);

/// Scaled complementary error function exp(x^2) erfc(x) for x >= 0.
double erfcx(double x);

}  // namespace mig
