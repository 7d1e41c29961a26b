#pragma once

#include <optional>
#include <vector>

#include "mig/mig_distribution.hpp"
#include "mig/rotation.hpp"
#include "mig/sampler.hpp"
#include "mig/simplex.hpp"

namespace mig {

// Monte Carlo estimate of Pr(X <= q) with its standard error.
struct McEstimate {
  enum class Method { plain_mc, sov };
  double value = 0.0;
  double std_error = 0.0;
  long draws = 0;
  Method method = Method::plain_mc;
};

// Feasible range of the radius R = beta^T X over {x <= q}, clamped to
// [0, inf).
struct RadialBounds {
  double r_min = 0.0;
  double r_max = 0.0;  // may be +inf
};

/// Closed-form radius bounds: the box LPs max/min beta^T x over x <= q
/// solve by inspection of the signs of beta.
RadialBounds radius_bounds(const Vector& beta, const Vector& q);

// One affine piece z(r) = slope * r + intercept of a conditional bound.
struct AffinePiece {
  double slope = 0.0;
  double intercept = 0.0;
  double at(double r) const { return slope * r + intercept; }
};

// Bivariate integration region in rotated coordinates (r, z): the radius
// range plus z_min(r) / z_max(r), each the max/min of at most two affine
// pieces or unbounded when no piece is present.
struct BivariateBoundCase {
  enum class Id {
    PP,            // beta1 > 0, beta2 > 0, q in the half-space
    NP_out,        // beta1 < 0, beta2 > 0, q outside
    NP_in,         // beta1 < 0, beta2 > 0, q inside
    PN,            // beta1 > 0, beta2 < 0
    NN,            // beta1 < 0, beta2 < 0
    B1_zero_pos,   // beta1 = 0, beta2 > 0
    B1_zero_neg,   // beta1 = 0, beta2 < 0
    B2_zero_pos,   // beta2 = 0, beta1 > 0
    B2_zero_neg,   // beta2 = 0, beta1 < 0
    ZERO_PROB,
  };

  Id id = Id::ZERO_PROB;
  double r_min = 0.0;
  double r_max = 0.0;
  std::vector<AffinePiece> lower;  // z_min(r) = max over pieces, -inf if none
  std::vector<AffinePiece> upper;  // z_max(r) = min over pieces, +inf if none
  std::optional<Eigen::Vector2d> v1, v2;  // box-edge / hyperplane vertices

  double z_min(double r) const;
  double z_max(double r) const;
};

/// Case analysis of the rotated region {x <= q} in d = 2, with
/// Q2 = (-beta2, beta1)/|beta|.
BivariateBoundCase bivariate_bounds(const Vector& beta, const Vector& q);

/// Conditional truncation interval for the i-th rotated coordinate given
/// beta^T x = r and (Q2 x)_j = z_j for j < i, where i = z_prefix.size()+1.
/// Two simplex solves; +-inf when unbounded, std::runtime_error when the
/// constraint set is infeasible.
std::pair<double, double> z_bounds_lp(const Vector& beta, const Rotation& rot,
                                      const Vector& q, double r,
                                      const Vector& z_prefix);

/// Plain Monte Carlo: fraction of sampler draws dominated by q.
McEstimate cdf_plain_mc(const MigParams& p, const Vector& q, long n,
                        RngStream& rng);

/// Separation-of-variables sequential importance sampler. Bounds come
/// from the bivariate closed forms in d = 2 and from LPs in d >= 3;
/// requires finite q.
McEstimate cdf_sov(const MigParams& p, const Vector& q, long t_draws,
                   RngStream& rng);

}  // namespace mig
