#pragma once

#include <functional>

namespace mig {

struct QuadratureResult {
  double value;
  double error_estimate;
  int subdivisions;
  bool converged;
};

/// Adaptive Gauss-Kronrod (G7, K15) quadrature on a finite interval.
/// Splits the worst interval until the summed error estimate drops below
/// max(abs_tol, rel_tol * |value|); throws std::runtime_error if the
/// subdivision budget is exhausted without converging.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-12,
                           double rel_tol = 1e-12, int max_subdivisions = 2000);

}  // namespace mig
