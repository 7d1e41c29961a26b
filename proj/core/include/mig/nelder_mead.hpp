#pragma once

#include <functional>

#include "mig/linalg.hpp"

namespace mig {

struct NelderMeadResult {
  Vector x;
  double value;
  int iterations;
  bool converged;  // simplex diameter below tolerance (vs iteration cap)
};

/// Plain Nelder-Mead on R^k. Objectives may return +inf for infeasible
/// points; a non-finite value at the initial point throws
/// std::runtime_error. Stops when the simplex diameter (max distance of
/// any vertex from the best, infinity norm) drops below `tol` or after
/// `max_iterations` reflections.
NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f,
                             const Vector& x0, double initial_step = 0.25,
                             double tol = 1e-4, int max_iterations = 500);

}  // namespace mig
