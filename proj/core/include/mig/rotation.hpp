#pragma once

#include "mig/linalg.hpp"

namespace mig {

// Change of basis used by the stochastic representation: Q has first row
// beta^T and remaining rows an orthonormal basis of the complement of
// beta. Q2 is deterministic (Householder construction), so identical
// parameters always give identical rotations.
class Rotation {
 public:
  const Matrix& q2() const { return q2_; }        // (d-1) x d
  const Matrix& q() const { return q_; }          // d x d, first row beta^T
  const Matrix& q_inv() const { return q_inv_; }  // d x d
  Eigen::Index dim() const { return q_.rows(); }

  friend Rotation orthonormal_complement(const Vector& beta);

 private:
  Rotation() = default;
  Matrix q2_, q_, q_inv_;
};

/// Deterministic orthonormal complement of beta: rows 2..d of the
/// Householder reflector carrying beta/|beta| to the first basis vector.
/// In d = 2 the row is canonicalized to (-beta2, beta1)/|beta|, the
/// orientation the bivariate CDF bound formulas assume.
Rotation orthonormal_complement(const Vector& beta);

}  // namespace mig
