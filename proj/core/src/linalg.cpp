#include "mig/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace mig {

SpdMatrix::SpdMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1)
    throw std::invalid_argument("SpdMatrix: matrix must be square");
  const double scale = m_.cwiseAbs().maxCoeff();
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-12 * std::max(scale, 1e-300)))
    throw std::invalid_argument("SpdMatrix: matrix is not symmetric");
  Eigen::LLT<Matrix> llt(m_);
  if (llt.info() != Eigen::Success)
    throw std::invalid_argument("SpdMatrix: Cholesky factorization failed (not positive definite)");
  chol_ = llt.matrixL();
  for (Eigen::Index i = 0; i < chol_.rows(); ++i)
    if (!(chol_(i, i) > 0.0))
      throw std::invalid_argument("SpdMatrix: nonpositive Cholesky pivot");
}

double SpdMatrix::log_det() const {
  double s = 0.0;
  for (Eigen::Index i = 0; i < chol_.rows(); ++i) s += std::log(chol_(i, i));
  return 2.0 * s;
}

Matrix SpdMatrix::inverse() const {
  Matrix id = Matrix::Identity(dim(), dim());
  Matrix y = chol_.triangularView<Eigen::Lower>().solve(id);
  Matrix inv = chol_.transpose().triangularView<Eigen::Upper>().solve(y);
  return 0.5 * (inv + inv.transpose());
}

Vector SpdMatrix::solve(const Vector& b) const {
  Vector y = chol_.triangularView<Eigen::Lower>().solve(b);
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

double SpdMatrix::spectral_norm() const {
  const Eigen::Index d = dim();
  if (d == 1) return m_(0, 0);
  Vector v = Vector::Ones(d) / std::sqrt(static_cast<double>(d));
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vector w = m_ * v;
    double nw = w.norm();
    if (nw == 0.0) return 0.0;  // only for the zero matrix, excluded by SPD
    w /= nw;
    double next = w.dot(m_ * w);
    if (std::abs(next - lambda) <= 1e-12 * std::max(1.0, std::abs(next))) {
      return next;
    }
    lambda = next;
    v = w;
  }
  return lambda;
}

Matrix equicorrelation(int d, double rho) {
  if (d < 1) throw std::invalid_argument("equicorrelation: d must be >= 1");
  if (d > 1 && (rho <= -1.0 / (d - 1) || rho >= 1.0))
    throw std::invalid_argument("equicorrelation: rho outside (-1/(d-1), 1)");
  Matrix r = Matrix::Constant(d, d, rho);
  r.diagonal().setOnes();
  return r;
}

}  // namespace mig
