#pragma once

#include <Eigen/Dense>

namespace mig {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Symmetric positive definite matrix carrying its lower Cholesky factor.
// Validation happens once at construction: symmetry to 1e-12 relative and
// a successful factorization with strictly positive pivots. Non-SPD input
// throws std::invalid_argument.
class SpdMatrix {
 public:
  explicit SpdMatrix(Matrix m);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& entries() const { return m_; }
  const Matrix& chol() const { return chol_; }

  double log_det() const;
  Matrix inverse() const;
  Vector solve(const Vector& b) const;

  /// Largest eigenvalue by symmetric power iteration (200 iterations,
  /// 1e-12 convergence check).
  double spectral_norm() const;

 private:
  Matrix m_;
  Matrix chol_;
};

/// Equicorrelation matrix (1-rho) I + rho 11^T, rho in (-1/(d-1), 1).
Matrix equicorrelation(int d, double rho);

}  // namespace mig
