#include "mig/mig_distribution.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace mig {

namespace {
constexpr double kLogTwoPi = 1.8378770664093453;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_dim(const MigParams& p, const Vector& x, const char* who) {
  if (x.size() != p.dim())
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
}
}  // namespace

HalfSpace::HalfSpace(Vector beta) : beta_(std::move(beta)) {
  if (beta_.size() < 1)
    throw std::invalid_argument("HalfSpace: dimension must be >= 1");
  if (beta_.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("HalfSpace: beta must have a nonzero entry");
}

bool HalfSpace::contains(const Vector& x) const {
  if (x.size() != beta_.size())
    throw std::invalid_argument("HalfSpace::contains: dimension mismatch");
  return beta_.dot(x) > 0.0;
}

MigParams::MigParams(HalfSpace halfspace, Vector xi, SpdMatrix omega)
    : halfspace_(std::move(halfspace)),
      xi_(std::move(xi)),
      omega_(std::move(omega)) {
  if (xi_.size() != halfspace_.dim() || omega_.dim() != halfspace_.dim())
    throw std::invalid_argument("MigParams: inconsistent dimensions");
  beta_dot_xi_ = halfspace_.beta().dot(xi_);
  if (!(beta_dot_xi_ > 0.0))
    throw std::invalid_argument("MigParams: beta^T xi must be positive");
}

MigParams MigParams::factored(HalfSpace halfspace, double mu, const Vector& xi0,
                              double omega, const Matrix& omega0) {
  if (!(mu > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("MigParams::factored: mu, omega must be positive");
  return MigParams(std::move(halfspace), mu * xi0, SpdMatrix(omega * omega0));
}

SampleBatch::SampleBatch(Matrix data, HalfSpace halfspace)
    : data_(std::move(data)), halfspace_(std::move(halfspace)) {
  if (data_.cols() != halfspace_.dim())
    throw std::invalid_argument("SampleBatch: dimension mismatch");
  const Vector proj = data_ * halfspace_.beta();
  for (Eigen::Index i = 0; i < proj.size(); ++i)
    if (!(proj(i) > 0.0))
      throw std::invalid_argument("SampleBatch: row outside the half-space");
}

double mig_log_density(const MigParams& p, const Vector& x) {
  check_dim(p, x, "mig_log_density");
  const double btx = p.beta().dot(x);
  if (!(btx > 0.0)) return -kInf;
  const double d = static_cast<double>(p.dim());
  const Vector dev = x - p.xi();
  const double quad = dev.dot(p.omega().solve(dev));
  return -0.5 * d * kLogTwoPi + std::log(p.beta_dot_xi()) -
         0.5 * p.omega().log_det() - (0.5 * d + 1.0) * std::log(btx) -
         quad / (2.0 * btx);
}

std::pair<Vector, Matrix> mig_mean_cov(const MigParams& p) {
  return {p.xi(), p.beta_dot_xi() * p.omega().entries()};
}

Vector mig_grad_log_density(const MigParams& p, const Vector& x) {
  check_dim(p, x, "mig_grad_log_density");
  const double btx = p.beta().dot(x);
  if (!(btx > 0.0))
    throw std::domain_error("mig_grad_log_density: x outside the half-space");
  const double d = static_cast<double>(p.dim());
  const Vector dev = x - p.xi();
  const Vector oinv_dev = p.omega().solve(dev);
  const double quad = dev.dot(oinv_dev);
  return -((1.0 + 0.5 * d) * p.beta() + oinv_dev) / btx +
         quad * p.beta() / (2.0 * btx * btx);
}

Matrix mig_hessian_log_density(const MigParams& p, const Vector& x) {
  check_dim(p, x, "mig_hessian_log_density");
  const double btx = p.beta().dot(x);
  if (!(btx > 0.0))
    throw std::domain_error("mig_hessian_log_density: x outside the half-space");
  const double d = static_cast<double>(p.dim());
  const Vector dev = x - p.xi();
  const Vector oinv_dev = p.omega().solve(dev);
  const double quad = dev.dot(oinv_dev);
  const Matrix bbt = p.beta() * p.beta().transpose();
  const Matrix cross = oinv_dev * p.beta().transpose();
  // Grouped so each term is entrywise symmetric in exact float arithmetic.
  Matrix h = -p.omega().inverse() / btx;
  h += ((1.0 + 0.5 * d) * bbt + (cross + cross.transpose())) / (btx * btx);
  h -= quad * bbt / (btx * btx * btx);
  return h;
}

Matrix mig_hessian_density(const MigParams& p, const Vector& x) {
  const Vector g = mig_grad_log_density(p, x);
  const Matrix hlog = mig_hessian_log_density(p, x);
  const double f = std::exp(mig_log_density(p, x));
  return f * (g * g.transpose() + hlog);
}

MigParams mig_mle(const SampleBatch& samples) {
  const Eigen::Index n = samples.size();
  if (n < 2) throw std::runtime_error("mig_mle: need at least two observations");
  const Vector xbar = samples.data().colwise().mean().transpose();
  const Vector proj = samples.data() * samples.beta();
  Matrix omega = Matrix::Zero(samples.dim(), samples.dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vector dev = samples.row(i) - xbar;
    omega.noalias() += dev * dev.transpose() / proj(i);
  }
  omega /= static_cast<double>(n);
  try {
    return MigParams(samples.halfspace(), xbar, SpdMatrix(omega));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("mig_mle: ") + e.what());
  }
}

MigParams mig_method_of_moments(const SampleBatch& samples) {
  const Eigen::Index n = samples.size();
  if (n < 2)
    throw std::runtime_error("mig_method_of_moments: need at least two observations");
  const Vector xbar = samples.data().colwise().mean().transpose();
  const Matrix centered = samples.data().rowwise() - xbar.transpose();
  const Matrix s =
      centered.transpose() * centered / static_cast<double>(n - 1);
  const double btm = samples.beta().dot(xbar);
  try {
    return MigParams(samples.halfspace(), xbar, SpdMatrix(s / btm));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("mig_method_of_moments: ") + e.what());
  }
}

double mig_density_upper_bound(const MigParams& p) {
  const double d = static_cast<double>(p.dim());
  const double btxi = p.beta_dot_xi();
  const double norm_beta2 = p.beta().squaredNorm();
  const double norm_omega = p.omega().spectral_norm();
  const double inner = std::max(
      2.0 / btxi,
      (0.5 * d + 1.0) / std::exp(1.0) * 8.0 * norm_omega * norm_beta2 /
          (btxi * btxi));
  return std::exp(-0.5 * d * kLogTwoPi - 0.5 * p.omega().log_det() +
                  std::log(btxi) + (0.5 * d + 1.0) * std::log(inner));
}

MigParams mig_affine_transform(const MigParams& p, const Matrix& l) {
  if (l.rows() != p.dim() || l.cols() != p.dim())
    throw std::invalid_argument("mig_affine_transform: L has wrong shape");
  Eigen::PartialPivLU<Matrix> lu(l);
  const Matrix linv = lu.inverse();
  if (!linv.allFinite() || std::abs(lu.determinant()) < 1e-300)
    throw std::invalid_argument("mig_affine_transform: L is singular");
  Matrix omega_t = linv * p.omega().entries() * linv.transpose();
  // Exact symmetry can be lost to rounding; restore it before validation.
  omega_t = 0.5 * (omega_t + omega_t.transpose()).eval();
  return MigParams(HalfSpace(l.transpose() * p.beta()), linv * p.xi(),
                   SpdMatrix(std::move(omega_t)));
}

}  // namespace mig
