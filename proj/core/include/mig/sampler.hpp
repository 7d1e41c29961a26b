#pragma once

#include "mig/mig_distribution.hpp"
#include "mig/rotation.hpp"

namespace mig {

// Conditional Gaussian piece of the stochastic representation:
// Z | R = r is Normal_{d-1}(mu(r), r Sigma) with mu(r) affine in r.
struct ConditionalGaussian {
  Vector mu_slope;      // length d-1
  Vector mu_intercept;  // length d-1
  Matrix sigma;         // (d-1) x (d-1), SPD (empty when d = 1)
  Matrix sigma_chol;    // lower Cholesky factor of sigma

  Vector mu_at(double r) const { return mu_intercept + r * mu_slope; }
};

ConditionalGaussian conditional_gaussian(const MigParams& p,
                                         const Rotation& rot);

// Exact MIG sampler: R from the univariate IG projection law, Z | R from
// the conditional Gaussian, then x = Q^{-1} (r, z). The rotation and the
// Cholesky factors are computed once at construction.
class MigSampler {
 public:
  explicit MigSampler(MigParams p);

  const MigParams& params() const { return params_; }
  const Rotation& rotation() const { return rot_; }
  const ConditionalGaussian& conditional() const { return cond_; }

  /// Law of R = beta^T X: IG(beta^T xi, (beta^T xi)^2 / (beta^T Omega beta)).
  const IgParams& radial_law() const { return radial_; }

  Vector draw(RngStream& rng) const;
  SampleBatch sample(Eigen::Index n, RngStream& rng) const;

 private:
  MigParams params_;
  Rotation rot_;
  ConditionalGaussian cond_;
  IgParams radial_;
};

/// One-shot convenience wrapper around MigSampler.
SampleBatch mig_sample(const MigParams& p, Eigen::Index n, RngStream& rng);

/// Inverse-CDF draw from the standard normal truncated to [a, b],
/// computed in the tail-stable parametrization.
double truncated_std_normal(double a, double b, RngStream& rng);

}  // namespace mig
