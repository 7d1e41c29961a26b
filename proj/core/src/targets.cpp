#include "mig/targets.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mig/special.hpp"

namespace mig {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr long kNormConstDraws = 1000000;

Vector iota(int d) {
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = i + 1.0;
  return v;
}

Matrix scaled_equicorrelation(const Vector& sd, double rho) {
  const int d = static_cast<int>(sd.size());
  Matrix r = equicorrelation(d, rho);
  return sd.asDiagonal() * r * sd.asDiagonal();
}

// Base (untruncated) component law with exact log density and sampler.
class Component {
 public:
  virtual ~Component() = default;
  virtual double log_density(const Vector& x) const = 0;
  virtual Vector sample(RngStream& rng) const = 0;
};

class StudentT : public Component {
 public:
  StudentT(Vector loc, Matrix scale, double nu)
      : loc_(std::move(loc)), scale_(scale), nu_(nu) {
    const int d = static_cast<int>(loc_.size());
    log_const_ = std::lgamma(0.5 * (nu_ + d)) - std::lgamma(0.5 * nu_) -
                 0.5 * d * std::log(nu_ * M_PI) - 0.5 * scale_.log_det();
  }

  double log_density(const Vector& x) const override {
    const double d = static_cast<double>(loc_.size());
    const Vector half =
        scale_.chol().triangularView<Eigen::Lower>().solve(x - loc_);
    return log_const_ -
           0.5 * (nu_ + d) * std::log1p(half.squaredNorm() / nu_);
  }

  Vector sample(RngStream& rng) const override {
    const Eigen::Index d = loc_.size();
    Vector z(d);
    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal();
    const double w = rng.chi_squared(nu_);
    return loc_ + std::sqrt(nu_ / w) * (scale_.chol() * z);
  }

 private:
  Vector loc_;
  SpdMatrix scale_;
  double nu_;
  double log_const_;
};

class Gaussian : public Component {
 public:
  Gaussian(Vector loc, Matrix scale) : loc_(std::move(loc)), scale_(scale) {
    log_const_ = -0.5 * static_cast<double>(loc_.size()) * kLogTwoPi -
                 0.5 * scale_.log_det();
  }

  double log_density(const Vector& x) const override {
    const Vector half =
        scale_.chol().triangularView<Eigen::Lower>().solve(x - loc_);
    return log_const_ - 0.5 * half.squaredNorm();
  }

  Vector sample(RngStream& rng) const override {
    const Eigen::Index d = loc_.size();
    Vector z(d);
    for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal();
    return loc_ + scale_.chol() * z;
  }

 private:
  Vector loc_;
  SpdMatrix scale_;
  double log_const_;
};

// Azzalini-Capitanio skew Gaussian: density 2 phi_d(x; xi, Omega)
// Phi(alpha^T omega^{-1} (x - xi)), sampled through the augmented
// (d+1)-dimensional Gaussian with a sign flip.
class SkewGaussian : public Component {
 public:
  SkewGaussian(Vector loc, Matrix scale, Vector alpha)
      : loc_(std::move(loc)), scale_(scale), alpha_(std::move(alpha)) {
    const int d = static_cast<int>(loc_.size());
    omega_diag_ = scale_.entries().diagonal().cwiseSqrt();
    const Matrix corr = omega_diag_.cwiseInverse().asDiagonal() *
                        scale_.entries() *
                        omega_diag_.cwiseInverse().asDiagonal();
    const Vector corr_alpha = corr * alpha_;
    const Vector delta = corr_alpha / std::sqrt(1.0 + alpha_.dot(corr_alpha));
    Matrix aug = Matrix::Zero(d + 1, d + 1);
    aug(0, 0) = 1.0;
    aug.block(0, 1, 1, d) = delta.transpose();
    aug.block(1, 0, d, 1) = delta;
    aug.block(1, 1, d, d) = corr;
    aug = 0.5 * (aug + aug.transpose()).eval();
    aug_chol_ = SpdMatrix(aug).chol();
    log_const_ = std::log(2.0) -
                 0.5 * static_cast<double>(d) * kLogTwoPi -
                 0.5 * scale_.log_det();
  }

  double log_density(const Vector& x) const override {
    const Vector dev = x - loc_;
    const Vector half = scale_.chol().triangularView<Eigen::Lower>().solve(dev);
    const double skew = alpha_.dot(dev.cwiseQuotient(omega_diag_));
    return log_const_ - 0.5 * half.squaredNorm() + norm_logcdf(skew);
  }

  Vector sample(RngStream& rng) const override {
    const Eigen::Index d = loc_.size();
    Vector z(d + 1);
    for (Eigen::Index j = 0; j <= d; ++j) z(j) = rng.normal();
    const Vector w = aug_chol_ * z;
    Vector v = w.tail(d);
    if (w(0) <= 0.0) v = -v;
    return loc_ + omega_diag_.cwiseProduct(v);
  }

 private:
  Vector loc_;
  SpdMatrix scale_;
  Vector alpha_;
  Vector omega_diag_;
  Matrix aug_chol_;
  double log_const_;
};

}  // namespace

struct TargetDistribution::Impl {
  // Weighted truncated components; MIG kind uses the exact law instead.
  std::vector<std::unique_ptr<Component>> components;
  std::vector<double> weights;
  std::vector<double> log_norm_const;  // per component, log acceptance
  std::optional<MigParams> mig_params;
  std::optional<MigSampler> mig_sampler;

  Vector sample_component(std::size_t c, const HalfSpace& hs,
                          RngStream& rng) const {
    for (long attempt = 0; attempt < 100000000L; ++attempt) {
      Vector x = components[c]->sample(rng);
      if (hs.contains(x)) return x;
    }
    throw std::runtime_error("TargetDistribution: rejection sampling stalled");
  }
};

TargetDistribution::TargetDistribution(Kind kind, HalfSpace hs,
                                       std::unique_ptr<Impl> impl)
    : kind_(kind), halfspace_(std::move(hs)), impl_(std::move(impl)) {}

TargetDistribution::~TargetDistribution() = default;
TargetDistribution::TargetDistribution(TargetDistribution&&) noexcept = default;
TargetDistribution& TargetDistribution::operator=(TargetDistribution&&) noexcept =
    default;

TargetDistribution TargetDistribution::build(Kind kind, int d,
                                             RngStream& rng) {
  if (d < 2 || d > 4)
    throw std::invalid_argument("TargetDistribution: d must be in {2,3,4}");
  HalfSpace hs(Vector::Ones(d));
  auto impl = std::make_unique<Impl>();
  const Vector ones = Vector::Ones(d);
  const Vector iota_d = iota(d);
  const Vector sqrt_iota = iota_d.cwiseSqrt();

  switch (kind) {
    case Kind::trunc_t:
      impl->components.push_back(std::make_unique<StudentT>(
          Vector(1.1 * ones), scaled_equicorrelation(sqrt_iota, 0.5), 5.0));
      impl->weights = {1.0};
      break;
    case Kind::mixture:
      impl->components.push_back(std::make_unique<StudentT>(
          ones, equicorrelation(d, 0.5), 5.0));
      impl->components.push_back(std::make_unique<Gaussian>(
          Vector(11.0 * ones - iota_d),
          scaled_equicorrelation(sqrt_iota, -0.2)));
      impl->weights = {0.6, 0.4};
      break;
    case Kind::trunc_skew_gauss:
      impl->components.push_back(std::make_unique<SkewGaussian>(
          Vector(4.0 * ones), scaled_equicorrelation(sqrt_iota, 0.9),
          Vector(-5.0 * ones)));
      impl->weights = {1.0};
      break;
    case Kind::mig: {
      impl->mig_params.emplace(hs, Vector(2.0 * ones),
                               SpdMatrix(equicorrelation(d, 0.5)));
      impl->mig_sampler.emplace(*impl->mig_params);
      return TargetDistribution(kind, std::move(hs), std::move(impl));
    }
  }

  // Acceptance fraction of each component on the half-space.
  for (std::size_t c = 0; c < impl->components.size(); ++c) {
    long hits = 0;
    for (long t = 0; t < kNormConstDraws; ++t)
      if (hs.contains(impl->components[c]->sample(rng))) ++hits;
    const double frac = static_cast<double>(hits) / kNormConstDraws;
    if (frac < 1e-4)
      throw std::runtime_error(
          "TargetDistribution: half-space acceptance fraction below 1e-4");
    impl->log_norm_const.push_back(std::log(frac));
  }
  return TargetDistribution(kind, std::move(hs), std::move(impl));
}

double TargetDistribution::log_density(const Vector& x) const {
  if (x.size() != dim())
    throw std::invalid_argument("TargetDistribution: dimension mismatch");
  if (!halfspace_.contains(x)) return -kInf;
  if (impl_->mig_params) return mig_log_density(*impl_->mig_params, x);
  double acc = 0.0;
  for (std::size_t c = 0; c < impl_->components.size(); ++c)
    acc += impl_->weights[c] * std::exp(impl_->components[c]->log_density(x) -
                                        impl_->log_norm_const[c]);
  return std::log(acc);
}

Vector TargetDistribution::sample(RngStream& rng) const {
  if (impl_->mig_sampler) return impl_->mig_sampler->draw(rng);
  std::size_t c = 0;
  if (impl_->weights.size() > 1) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k < impl_->weights.size(); ++k) {
      acc += impl_->weights[k];
      if (u <= acc) {
        c = k;
        break;
      }
      c = k;
    }
  }
  return impl_->sample_component(c, halfspace_, rng);
}

SampleBatch TargetDistribution::sample_batch(Eigen::Index n,
                                             RngStream& rng) const {
  if (n < 1)
    throw std::invalid_argument("TargetDistribution: n must be >= 1");
  Matrix out(n, dim());
  for (Eigen::Index i = 0; i < n; ++i) out.row(i) = sample(rng).transpose();
  return SampleBatch(std::move(out), halfspace_);
}

TargetDistribution::Kind target_kind_from_name(const std::string& name) {
  if (name == "F1" || name == "f1") return TargetDistribution::Kind::trunc_t;
  if (name == "F2" || name == "f2") return TargetDistribution::Kind::mixture;
  if (name == "F3" || name == "f3")
    return TargetDistribution::Kind::trunc_skew_gauss;
  if (name == "F4" || name == "f4") return TargetDistribution::Kind::mig;
  throw std::invalid_argument("unknown target: " + name);
}

const char* to_string(TargetDistribution::Kind kind) {
  switch (kind) {
    case TargetDistribution::Kind::trunc_t: return "F1";
    case TargetDistribution::Kind::mixture: return "F2";
    case TargetDistribution::Kind::trunc_skew_gauss: return "F3";
    case TargetDistribution::Kind::mig: return "F4";
  }
  return "?";
}

}  // namespace mig
