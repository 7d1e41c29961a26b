#include "mig/sampler.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mig/special.hpp"

namespace mig {

ConditionalGaussian conditional_gaussian(const MigParams& p,
                                         const Rotation& rot) {
  const Eigen::Index d = p.dim();
  ConditionalGaussian cg;
  if (d == 1) {
    cg.mu_slope = Vector(0);
    cg.mu_intercept = Vector(0);
    cg.sigma = Matrix(0, 0);
    cg.sigma_chol = Matrix(0, 0);
    return cg;
  }
  const Vector omega_beta = p.omega().entries() * p.beta();
  const double btob = p.beta().dot(omega_beta);
  cg.mu_slope = rot.q2() * omega_beta / btob;
  cg.mu_intercept = rot.q2() * p.xi() - p.beta_dot_xi() * cg.mu_slope;
  const Matrix oinv = p.omega().inverse();
  Matrix inner = rot.q2() * oinv * rot.q2().transpose();
  inner = 0.5 * (inner + inner.transpose()).eval();
  cg.sigma = SpdMatrix(inner).inverse();
  cg.sigma = 0.5 * (cg.sigma + cg.sigma.transpose()).eval();
  cg.sigma_chol = SpdMatrix(cg.sigma).chol();
  return cg;
}

MigSampler::MigSampler(MigParams p)
    : params_(std::move(p)),
      rot_(orthonormal_complement(params_.beta())),
      cond_(conditional_gaussian(params_, rot_)),
      radial_(params_.beta_dot_xi(),
              params_.beta_dot_xi() * params_.beta_dot_xi() /
                  params_.beta().dot(params_.omega().entries() * params_.beta())) {}

Vector MigSampler::draw(RngStream& rng) const {
  const Eigen::Index d = params_.dim();
  const double r = ig_sample(radial_, rng);
  Vector rz(d);
  rz(0) = r;
  if (d > 1) {
    Vector y(d - 1);
    for (Eigen::Index j = 0; j < d - 1; ++j) y(j) = rng.normal();
    rz.tail(d - 1) = cond_.mu_at(r) + std::sqrt(r) * (cond_.sigma_chol * y);
  }
  Vector x = rot_.q_inv() * rz;
  if (!(params_.beta().dot(x) > 0.0))
    throw std::runtime_error("MigSampler: generated point left the half-space");
  return x;
}

SampleBatch MigSampler::sample(Eigen::Index n, RngStream& rng) const {
  if (n < 1) throw std::invalid_argument("MigSampler::sample: n must be >= 1");
  Matrix out(n, params_.dim());
  for (Eigen::Index i = 0; i < n; ++i) out.row(i) = draw(rng).transpose();
  return SampleBatch(std::move(out), params_.halfspace());
}

SampleBatch mig_sample(const MigParams& p, Eigen::Index n, RngStream& rng) {
  return MigSampler(p).sample(n, rng);
}

double truncated_std_normal(double a, double b, RngStream& rng) {
  if (!(a <= b))
    throw std::invalid_argument("truncated_std_normal: need a <= b");
  const double u = rng.uniform();
  if (a >= 0.0) {
    // Both endpoints in the right tail: work with upper-tail probabilities.
    const double qa = norm_cdf(-a);
    const double qb = b == std::numeric_limits<double>::infinity()
                          ? 0.0
                          : norm_cdf(-b);
    const double v = qb + u * (qa - qb);
    return v > 0.0 ? -norm_quantile(v) : b;
  }
  if (b <= 0.0) {
    const double pa = a == -std::numeric_limits<double>::infinity()
                          ? 0.0
                          : norm_cdf(a);
    const double pb = norm_cdf(b);
    const double v = pa + u * (pb - pa);
    return v > 0.0 ? norm_quantile(v) : a;
  }
  const double pa = norm_cdf(a);
  const double pb = norm_cdf(b);
  const double v = pa + u * (pb - pa);
  if (v <= 0.0) return a;
  if (v >= 1.0) return b;
  return norm_quantile(v);
}

}  // namespace mig
