#pragma once

#include "mig/linalg.hpp"

namespace mig {

// Small dense LP in the form used by the CDF bound computations:
// optimize objective^T x subject to eq_lhs x = eq_rhs and x <= upper_bounds,
// variables otherwise free. Every variable must carry a finite upper bound;
// the solver substitutes s = upper_bounds - x >= 0, which puts the problem
// in standard form.
struct LinearProgram {
  Vector objective;
  Matrix eq_lhs;      // m x n, m may be zero
  Vector eq_rhs;      // length m
  Vector upper_bounds;
};

enum class LpSense { minimize, maximize };

struct LpResult {
  double value = 0.0;
  bool unbounded = false;
  bool infeasible = false;
};

/// Two-phase dense simplex with Bland's rule; throws std::runtime_error
/// if the 1e4 iteration cap is exceeded.
LpResult simplex_solve(const LinearProgram& lp, LpSense sense);

}  // namespace mig
