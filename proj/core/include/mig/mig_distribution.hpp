#pragma once

#include <utility>

#include "mig/inverse_gaussian.hpp"
#include "mig/linalg.hpp"

namespace mig {

// Support of the MIG distribution: the open half-space {x : beta^T x > 0}.
class HalfSpace {
 public:
  explicit HalfSpace(Vector beta);

  const Vector& beta() const { return beta_; }
  Eigen::Index dim() const { return beta_.size(); }
  bool contains(const Vector& x) const;

 private:
  Vector beta_;
};

// Parameters (beta, xi, Omega) of one MIG law: direction, mean and scale.
// Invariants checked at construction: beta^T xi > 0 strictly and Omega
// symmetric positive definite.
class MigParams {
 public:
  MigParams(HalfSpace halfspace, Vector xi, SpdMatrix omega);

  /// Factored parametrization xi = mu xi0, Omega = omega Omega0.
  static MigParams factored(HalfSpace halfspace, double mu, const Vector& xi0,
                            double omega, const Matrix& omega0);

  const HalfSpace& halfspace() const { return halfspace_; }
  const Vector& beta() const { return halfspace_.beta(); }
  const Vector& xi() const { return xi_; }
  const SpdMatrix& omega() const { return omega_; }
  Eigen::Index dim() const { return xi_.size(); }
  double beta_dot_xi() const { return beta_dot_xi_; }

 private:
  HalfSpace halfspace_;
  Vector xi_;
  SpdMatrix omega_;
  double beta_dot_xi_;
};

// n x d matrix of observations, every row inside the half-space.
class SampleBatch {
 public:
  SampleBatch(Matrix data, HalfSpace halfspace);

  const Matrix& data() const { return data_; }
  const HalfSpace& halfspace() const { return halfspace_; }
  const Vector& beta() const { return halfspace_.beta(); }
  Eigen::Index size() const { return data_.rows(); }
  Eigen::Index dim() const { return data_.cols(); }
  Vector row(Eigen::Index i) const { return data_.row(i).transpose(); }

 private:
  Matrix data_;
  HalfSpace halfspace_;
};

/// Log density; -inf off the half-space, error on dimension mismatch.
double mig_log_density(const MigParams& p, const Vector& x);

/// (E X, Var X) = (xi, beta^T xi Omega).
std::pair<Vector, Matrix> mig_mean_cov(const MigParams& p);

/// Gradient of the log density in x; requires beta^T x > 0.
Vector mig_grad_log_density(const MigParams& p, const Vector& x);

/// Hessian of the log density in x; requires beta^T x > 0.
Matrix mig_hessian_log_density(const MigParams& p, const Vector& x);

/// Hessian of the density itself, f (g g^T + H_log).
Matrix mig_hessian_density(const MigParams& p, const Vector& x);

/// Maximum likelihood estimator for (xi, Omega) with beta known
/// (taken from the batch). Throws std::runtime_error when n < 2 or the
/// estimated scale matrix is singular.
MigParams mig_mle(const SampleBatch& samples);

/// Method-of-moments estimator: xi = mean, Omega = S / (beta^T mean)
/// with S the n-1 denominator sample covariance.
MigParams mig_method_of_moments(const SampleBatch& samples);

/// Uniform upper bound on the density over the half-space.
double mig_density_upper_bound(const MigParams& p);

/// Parameters of L^{-1} X for invertible L:
/// MIG(L^T beta, L^{-1} xi, L^{-1} Omega L^{-T}).
MigParams mig_affine_transform(const MigParams& p, const Matrix& l);

}  // namespace mig
