#include "mig/gaussian_approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mig/inverse_gaussian.hpp"
#include "mig/quadrature.hpp"
#include "mig/special.hpp"

namespace mig {

namespace {

// k-th series coefficient (-1)^k {(d+2)/(2k) - |delta|^2/2}.
double series_coeff(int k, double d, double delta_sq) {
  const double c = (d + 2.0) / (2.0 * k) - 0.5 * delta_sq;
  return (k % 2 == 0) ? c : -c;
}

double series_partial(double d, double delta_sq, double y, int n_terms) {
  double sum = 0.0;
  double yk = 1.0;
  for (int k = 1; k <= n_terms; ++k) {
    yk *= y;
    sum += series_coeff(k, d, delta_sq) * yk;
  }
  return sum;
}

double fit_top_half_slope(const std::vector<double>& mu,
                          const std::vector<double>& neg_log_e) {
  const std::size_t m = mu.size();
  const std::size_t start = m / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(m - start);
  for (std::size_t i = start; i < m; ++i) {
    const double x = std::log(mu[i]);
    sx += x;
    sy += neg_log_e[i];
    sxx += x * x;
    sxy += x * neg_log_e[i];
  }
  return (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
}

void check_mu_grid(const std::vector<double>& mu_grid) {
  if (mu_grid.size() < 4)
    throw std::invalid_argument("bulk_sup_errors: need at least 4 mu values");
  for (std::size_t i = 0; i + 1 < mu_grid.size(); ++i)
    if (!(mu_grid[i] < mu_grid[i + 1]))
      throw std::invalid_argument("bulk_sup_errors: mu grid must increase");
}

ErrorCurve finish_curve(std::vector<double> mu_grid, Matrix e) {
  ErrorCurve curve;
  curve.mu_values = std::move(mu_grid);
  for (int n = 0; n < 3; ++n) {
    std::vector<double> neg_log(curve.mu_values.size());
    for (std::size_t i = 0; i < curve.mu_values.size(); ++i) {
      if (!(e(n, i) > 0.0))
        throw std::runtime_error("bulk_sup_errors: vanishing supremum");
      neg_log[i] = -std::log(e(n, i));
    }
    curve.slopes[n] = fit_top_half_slope(curve.mu_values, neg_log);
  }
  curve.e_n = std::move(e);
  return curve;
}

}  // namespace

double lr_exact_univariate(double mu, double lambda, double x) {
  const IgParams p(mu, lambda);
  if (!(x > 0.0))
    throw std::domain_error("lr_exact_univariate: x outside the bulk");
  const double sd = std::sqrt(mu * mu * mu / lambda);
  const double delta = (x - mu) / sd;
  if (!(std::abs(delta) < std::sqrt(lambda / mu)))
    throw std::domain_error("lr_exact_univariate: x outside the bulk");
  const double y = delta * std::sqrt(mu / lambda);  // = x/mu - 1
  return -1.5 * std::log1p(y) + 0.5 * delta * delta * y / (1.0 + y);
}

double lr_series_univariate(double mu, double lambda, double x, int n_terms) {
  const IgParams p(mu, lambda);
  if (n_terms < 0)
    throw std::invalid_argument("lr_series_univariate: negative n_terms");
  const double sd = std::sqrt(mu * mu * mu / lambda);
  const double delta = (x - mu) / sd;
  const double y = delta * std::sqrt(mu / lambda);
  if (!(std::abs(y) < 1.0))
    throw std::domain_error("lr_series_univariate: series diverges here");
  return series_partial(1.0, delta * delta, y, n_terms);
}

namespace {

struct MultivariateFrame {
  double btxi0;
  double delta_sq;
  double y;  // beta^T x / (mu beta^T xi0) - 1
};

MultivariateFrame multivariate_frame(const Vector& beta, const Vector& xi0,
                                     const SpdMatrix& omega0, double mu,
                                     double omega, const Vector& x,
                                     const char* who) {
  if (beta.size() != xi0.size() || beta.size() != x.size() ||
      omega0.dim() != beta.size())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  if (!(mu > 0.0) || !(omega > 0.0))
    throw std::invalid_argument(std::string(who) + ": mu, omega must be positive");
  MultivariateFrame fr;
  fr.btxi0 = beta.dot(xi0);
  if (!(fr.btxi0 > 0.0))
    throw std::invalid_argument(std::string(who) + ": xi0 outside the half-space");
  const Vector dev = x - mu * xi0;
  const Vector half =
      omega0.chol().triangularView<Eigen::Lower>().solve(dev);
  fr.delta_sq = half.squaredNorm() / (mu * omega * fr.btxi0);
  fr.y = beta.dot(x) / (mu * fr.btxi0) - 1.0;
  // Bulk: |slab coordinate| < tau = sqrt(mu/omega) iff |y| < 1.
  if (!(std::abs(fr.y) < 1.0))
    throw std::domain_error(std::string(who) + ": x outside the bulk");
  return fr;
}

}  // namespace

double lr_exact_multivariate(const Vector& beta, const Vector& xi0,
                             const SpdMatrix& omega0, double mu, double omega,
                             const Vector& x) {
  const MultivariateFrame fr = multivariate_frame(beta, xi0, omega0, mu, omega,
                                                  x, "lr_exact_multivariate");
  const double d = static_cast<double>(beta.size());
  return -(0.5 * d + 1.0) * std::log1p(fr.y) +
         0.5 * fr.delta_sq * fr.y / (1.0 + fr.y);
}

double lr_series_multivariate(const Vector& beta, const Vector& xi0,
                              const SpdMatrix& omega0, double mu, double omega,
                              const Vector& x, int n_terms) {
  if (n_terms < 0)
    throw std::invalid_argument("lr_series_multivariate: negative n_terms");
  const MultivariateFrame fr = multivariate_frame(beta, xi0, omega0, mu, omega,
                                                  x, "lr_series_multivariate");
  return series_partial(static_cast<double>(beta.size()), fr.delta_sq, fr.y,
                        n_terms);
}

ErrorCurve bulk_sup_errors_univariate(const std::vector<double>& mu_grid,
                                      const BulkSpec& bulk) {
  check_mu_grid(mu_grid);
  if (bulk.grid_points < 10)
    throw std::invalid_argument("bulk_sup_errors_univariate: grid too coarse");
  if (!(bulk.tau > 0.0))
    throw std::invalid_argument("bulk_sup_errors_univariate: tau must be positive");
  Matrix e = Matrix::Zero(3, mu_grid.size());
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    const double mu = mu_grid[i];
    const double lambda = mu * mu;  // omega = 1
    if (!(bulk.tau <= std::sqrt(lambda / mu)))
      throw std::invalid_argument(
          "bulk_sup_errors_univariate: tau exceeds sqrt(lambda/mu)");
    const double sd = std::sqrt(mu * mu * mu / lambda);
    for (int g = 0; g < bulk.grid_points; ++g) {
      const double delta =
          bulk.tau * (-1.0 + 2.0 * g / (bulk.grid_points - 1.0));
      const double x = mu + delta * sd;
      const double lr = lr_exact_univariate(mu, lambda, x);
      const double y = delta * std::sqrt(mu / lambda);
      const double d2 = delta * delta;
      double partial = 0.0;
      for (int n = 0; n < 3; ++n) {
        e(n, i) = std::max(e(n, i), std::abs(lr - partial));
        partial += series_coeff(n + 1, 1.0, d2) * std::pow(y, n + 1);
      }
    }
  }
  return finish_curve(mu_grid, std::move(e));
}

ErrorCurve bulk_sup_errors_bivariate(const Vector& beta, const Vector& xi0,
                                     const SpdMatrix& omega0,
                                     const std::vector<double>& mu_grid,
                                     int n_points, double window_radius,
                                     const BulkSpec& bulk) {
  check_mu_grid(mu_grid);
  if (beta.size() != 2)
    throw std::invalid_argument("bulk_sup_errors_bivariate: d must be 2");
  if (!(bulk.tau > 0.0) || !(bulk.tau <= std::sqrt(mu_grid.front() / 1.0)))
    throw std::invalid_argument(
        "bulk_sup_errors_bivariate: need 0 < tau <= sqrt(mu/omega)");
  const double btxi0 = beta.dot(xi0);
  if (!(btxi0 > 0.0))
    throw std::invalid_argument("bulk_sup_errors_bivariate: xi0 outside half-space");

  // Quasi-uniform points in the disc of radius window_radius via the R2
  // additive sequence; the set is mu-independent so the curves share one
  // point cloud.
  const Vector l0t_beta = omega0.chol().transpose() * beta;
  std::vector<Eigen::Vector2d> deltas;
  deltas.reserve(n_points / 4);
  const double a1 = 0.7548776662466927;  // 1/phi2, phi2 the plastic number
  const double a2 = 0.5698402909980532;  // 1/phi2^2
  double u1 = 0.5, u2 = 0.5;
  for (int t = 0; t < n_points; ++t) {
    u1 += a1;
    u1 -= std::floor(u1);
    u2 += a2;
    u2 -= std::floor(u2);
    const double rad = window_radius * std::sqrt(u1);
    const double ang = 2.0 * M_PI * u2;
    Eigen::Vector2d delta(rad * std::cos(ang), rad * std::sin(ang));
    // Keep points in the closed bulk slab of radius tau.
    if (std::abs(l0t_beta.dot(delta)) / std::sqrt(btxi0) <= bulk.tau)
      deltas.push_back(delta);
  }
  if (deltas.empty())
    throw std::runtime_error("bulk_sup_errors_bivariate: empty bulk intersection");

  const double omega = 1.0;
  Matrix e = Matrix::Zero(3, mu_grid.size());
  for (std::size_t i = 0; i < mu_grid.size(); ++i) {
    const double mu = mu_grid[i];
    const double scale = std::sqrt(mu * omega * btxi0);
    for (const auto& delta : deltas) {
      const Vector x = mu * xi0 + scale * (omega0.chol() * delta);
      const double lr = lr_exact_multivariate(beta, xi0, omega0, mu, omega, x);
      const double d2 = delta.squaredNorm();
      const double y = beta.dot(x) / (mu * btxi0) - 1.0;
      double partial = 0.0;
      for (int n = 0; n < 3; ++n) {
        e(n, i) = std::max(e(n, i), std::abs(lr - partial));
        partial += series_coeff(n + 1, 2.0, d2) * std::pow(y, n + 1);
      }
    }
  }
  return finish_curve(mu_grid, std::move(e));
}

namespace {

// Domain endpoint beyond which both tails are below 1e-13.
double upper_cutoff(const IgParams& p) {
  const double sd = std::sqrt(p.variance());
  double t = p.mu + 12.0 * sd;
  while (1.0 - ig_cdf(p, t) > 1e-13 ||
         norm_cdf(-(t - p.mu) / sd) > 1e-13) {
    t *= 2.0;
    if (t > 1e12 * p.mu)
      throw std::runtime_error("hellinger_univariate: tail cutoff not found");
  }
  return t;
}

}  // namespace

double hellinger_univariate(double mu, double lambda) {
  const IgParams p(mu, lambda);
  const double sd = std::sqrt(p.variance());
  const double t_max = upper_cutoff(p);
  auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    const double sk = std::exp(0.5 * ig_log_density(p, x));
    const double sphi = std::sqrt(norm_pdf((x - mu) / sd) / sd);
    const double diff = sk - sphi;
    return diff * diff;
  };
  // Anchor the subdivision at the density bulk so the adaptive pass
  // cannot miss a narrow peak.
  std::vector<double> knots = {0.0,
                               std::max(0.0, mu - 12.0 * sd),
                               std::max(0.0, mu - 4.0 * sd),
                               mu,
                               mu + 4.0 * sd,
                               std::min(mu + 12.0 * sd, t_max),
                               t_max};
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    if (knots[i + 1] > knots[i])
      integral += integrate(integrand, knots[i], knots[i + 1], 1e-13, 1e-10).value;
  const double left_mass = norm_cdf(-mu / sd);  // Gaussian mass on (-inf, 0]
  const double h_sq = 0.5 * (integral + left_mass);
  return std::sqrt(std::max(0.0, h_sq));
}

double kolmogorov_univariate(double mu, double lambda) {
  const IgParams p(mu, lambda);
  const double sd = std::sqrt(p.variance());
  const double lo = std::max(mu * 1e-12, mu - 14.0 * sd);
  const double hi = mu + 14.0 * sd;
  const int n = 100000;
  // x -> 0+ limit: F_IG -> 0 while the Gaussian keeps mass below zero.
  double sup = norm_cdf(-mu / sd);
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1.0);
    const double diff = std::abs(ig_cdf(p, x) - norm_cdf((x - mu) / sd));
    sup = std::max(sup, diff);
  }
  return sup;
}

}  // namespace mig
