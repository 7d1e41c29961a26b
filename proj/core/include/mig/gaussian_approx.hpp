#pragma once

#include <array>
#include <vector>

#include "mig/linalg.hpp"

namespace mig {

// Region where the Gaussian local approximation is controlled: points
// whose standardized deviation stays below radius tau.
struct BulkSpec {
  double tau = 1.0;
  int grid_points = 10000;
};

// Bulk suprema E_1..E_3 of the log-ratio truncation errors over a grid of
// mu values, with fitted decay exponents.
struct ErrorCurve {
  std::vector<double> mu_values;  // strictly increasing
  Matrix e_n;                     // 3 x m, E_n(mu) > 0
  std::array<double, 3> slopes;   // least-squares fit of -ln E_n on ln mu
                                  // over the top half of the grid
};

/// Exact log-ratio ln{k_{mu,lambda}(x)/phi_{mu,mu^3/lambda}(x)} from its
/// closed direct form; domain error outside the open bulk of radius
/// sqrt(lambda/mu).
double lr_exact_univariate(double mu, double lambda, double x);

/// Partial sum of the log-ratio series through k = n_terms.
double lr_series_univariate(double mu, double lambda, double x, int n_terms);

/// Multivariate exact log-ratio for MIG(beta, mu xi0, omega Omega0)
/// against the moment-matched Gaussian.
double lr_exact_multivariate(const Vector& beta, const Vector& xi0,
                             const SpdMatrix& omega0, double mu, double omega,
                             const Vector& x);

double lr_series_multivariate(const Vector& beta, const Vector& xi0,
                              const SpdMatrix& omega0, double mu, double omega,
                              const Vector& x, int n_terms);

/// Univariate E_1..E_3 over the closed bulk of radius bulk.tau with
/// lambda = mu^2, computed on a grid of bulk.grid_points standardized
/// deviations. Requires bulk.tau <= sqrt(lambda/mu) for every mu.
ErrorCurve bulk_sup_errors_univariate(const std::vector<double>& mu_grid,
                                      const BulkSpec& bulk = {});

/// Bivariate counterpart with omega = 1. The bulk slab of radius
/// bulk.tau is intersected with the fixed window
/// |delta|_2 <= window_radius (the slab alone is unbounded, see the
/// module notes), sampled with n_points quasi-uniform low-discrepancy
/// points.
ErrorCurve bulk_sup_errors_bivariate(const Vector& beta, const Vector& xi0,
                                     const SpdMatrix& omega0,
                                     const std::vector<double>& mu_grid,
                                     int n_points = 100000,
                                     double window_radius = 6.0,
                                     const BulkSpec& bulk = {});

/// Hellinger distance between IG(mu, lambda) and the moment-matched
/// Gaussian, by adaptive quadrature; absolute accuracy ~1e-8.
double hellinger_univariate(double mu, double lambda);

/// Kolmogorov distance sup_x |F_IG - F_N| over a 1e5-point grid.
double kolmogorov_univariate(double mu, double lambda);

}  // namespace mig
