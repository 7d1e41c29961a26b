#include "mig/rotation.hpp"

#include <cmath>
#include <stdexcept>

namespace mig {

Rotation orthonormal_complement(const Vector& beta) {
  const Eigen::Index d = beta.size();
  if (d < 1 || beta.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("orthonormal_complement: beta must be nonzero");

  Rotation rot;
  if (d == 1) {
    rot.q2_ = Matrix(0, 1);
    rot.q_ = beta.transpose();
    rot.q_inv_ = Matrix::Constant(1, 1, 1.0 / beta(0));
    return rot;
  }

  const double nb = beta.norm();
  if (d == 2) {
    rot.q2_ = Matrix(1, 2);
    rot.q2_ << -beta(1) / nb, beta(0) / nb;
  } else {
    const Vector u = beta / nb;
    Vector w = u;
    w(0) += (u(0) >= 0.0 ? 1.0 : -1.0);
    const Matrix h =
        Matrix::Identity(d, d) - (2.0 / w.squaredNorm()) * (w * w.transpose());
    rot.q2_ = h.bottomRows(d - 1);
  }

  rot.q_ = Matrix(d, d);
  rot.q_.row(0) = beta.transpose();
  rot.q_.bottomRows(d - 1) = rot.q2_;
  rot.q_inv_ = rot.q_.partialPivLu().inverse();

  if ((rot.q2_ * beta).cwiseAbs().maxCoeff() > 1e-12 * nb)
    throw std::runtime_error("orthonormal_complement: Q2 beta != 0");
  const Matrix gram =
      rot.q2_ * rot.q2_.transpose() - Matrix::Identity(d - 1, d - 1);
  if (gram.cwiseAbs().maxCoeff() > 1e-12)
    throw std::runtime_error("orthonormal_complement: Q2 not orthonormal");
  const Matrix resid = rot.q_ * rot.q_inv_ - Matrix::Identity(d, d);
  if (resid.cwiseAbs().maxCoeff() > 1e-10)
    throw std::runtime_error("orthonormal_complement: Q inverse inaccurate");
  return rot;
}

}  // namespace mig
