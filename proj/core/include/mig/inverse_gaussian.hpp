#pragma once

#include "mig/rng.hpp"

namespace mig {

// Univariate inverse Gaussian IG(mu, lambda) in the mean/shape
// parametrization; omega = mu^2/lambda gives the scale parametrization
// used by the multivariate family.
struct IgParams {
  double mu;
  double lambda;

  IgParams(double mu_, double lambda_);

  double omega() const { return mu * mu / lambda; }
  double mean() const { return mu; }
  double variance() const { return mu * mu * mu / lambda; }
};

/// Log density ln k_{mu,lambda}(x); throws std::domain_error for x <= 0.
double ig_log_density(const IgParams& p, double x);

/// Closed-form distribution function, stable for large lambda/mu.
double ig_cdf(const IgParams& p, double x);

/// Exact draw by the Michael-Schucany-Haas transformation-with-roots method.
double ig_sample(const IgParams& p, RngStream& rng);

/// Draw from IG(mu, lambda) conditioned on [lo, hi]. Rejection from the
/// untruncated sampler when the interval mass is at least 1%, inverse-CDF
/// bisection otherwise; throws std::runtime_error when the interval mass
/// is below 1e-300.
double truncated_ig_sample(const IgParams& p, double lo, double hi,
                           RngStream& rng);

/// Quantile by bisection on the closed-form CDF.
double ig_quantile(const IgParams& p, double prob);

}  // namespace mig
