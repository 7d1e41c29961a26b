#include "mig/kde.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mig/nelder_mead.hpp"
#include "mig/parallel.hpp"
#include "mig/special.hpp"

namespace mig {

namespace {

constexpr double kLogTwoPi = 1.8378770664093453;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared state for kernel sums: whitened data W = L^{-1} X^T column-wise
// and the projections p_i = beta^T x_i.
struct KernelWorkspace {
  Matrix w;        // d x n
  Vector proj;     // n
  Vector log_proj; // n
  double log_const;  // -(d/2) ln 2pi - 1/2 ln|H|
  double half_d_plus_one;

  KernelWorkspace(const SampleBatch& s, const SpdMatrix& h) {
    const Eigen::Index d = s.dim();
    w = h.chol().triangularView<Eigen::Lower>().solve(s.data().transpose());
    proj = s.data() * s.beta();
    log_proj = proj.array().log();
    log_const = -0.5 * static_cast<double>(d) * kLogTwoPi - 0.5 * h.log_det();
    half_d_plus_one = 0.5 * static_cast<double>(d) + 1.0;
  }
};

double logsumexp(const Vector& v) {
  const double m = v.maxCoeff();
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::exp(v(i) - m);
  return m + std::log(s);
}

// log k_{beta, xi, H}(x_j) for every data point x_j, with the evaluation
// point described by its projection beta^T xi and whitened image L^{-1} xi.
Vector log_kernel_row(const KernelWorkspace& ws, double proj_xi,
                      const Vector& w_xi) {
  const Eigen::Index n = ws.proj.size();
  Vector out(n);
  const double base = ws.log_const + std::log(proj_xi);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double qf = (ws.w.col(j) - w_xi).squaredNorm();
    out(j) = base - ws.half_d_plus_one * ws.log_proj(j) -
             qf / (2.0 * ws.proj(j));
  }
  return out;
}

}  // namespace

const char* to_string(Bandwidth::Method m) {
  switch (m) {
    case Bandwidth::Method::amise_full: return "amise-full";
    case Bandwidth::Method::amise_iso: return "amise-iso";
    case Bandwidth::Method::lcv_full: return "lcv-full";
    case Bandwidth::Method::lcv_iso: return "lcv-iso";
    case Bandwidth::Method::lscv: return "lscv";
    case Bandwidth::Method::normal_ref: return "normal-ref";
  }
  return "?";
}

double kde_eval(const SampleBatch& samples, const SpdMatrix& h,
                const Vector& xi) {
  if (xi.size() != samples.dim())
    throw std::invalid_argument("kde_eval: dimension mismatch");
  const double proj_xi = samples.beta().dot(xi);
  if (!(proj_xi > 0.0)) return 0.0;
  const KernelWorkspace ws(samples, h);
  const Vector w_xi = h.chol().triangularView<Eigen::Lower>().solve(xi);
  const Vector lk = log_kernel_row(ws, proj_xi, w_xi);
  const double lse = logsumexp(lk);
  return lse == -kInf
             ? 0.0
             : std::exp(lse - std::log(static_cast<double>(samples.size())));
}

Vector kde_eval_many(const SampleBatch& samples, const SpdMatrix& h,
                     const Matrix& points, int threads) {
  if (points.cols() != samples.dim())
    throw std::invalid_argument("kde_eval_many: dimension mismatch");
  const KernelWorkspace ws(samples, h);
  const double log_n = std::log(static_cast<double>(samples.size()));
  Vector out(points.rows());
  parallel_for(points.rows(), threads, [&](long i) {
    const Vector xi = points.row(i).transpose();
    const double proj_xi = samples.beta().dot(xi);
    if (!(proj_xi > 0.0)) {
      out(i) = 0.0;
      return;
    }
    const Vector w_xi = h.chol().triangularView<Eigen::Lower>().solve(xi);
    const double lse = logsumexp(log_kernel_row(ws, proj_xi, w_xi));
    out(i) = lse == -kInf ? 0.0 : std::exp(lse - log_n);
  });
  return out;
}

namespace {

// Per-point leave-one-out log densities ln fhat^{-i}(x_i).
Vector loo_log_densities(const SampleBatch& samples, const SpdMatrix& h,
                         int threads) {
  const Eigen::Index n = samples.size();
  if (n < 2) throw std::invalid_argument("leave-one-out: need n >= 2");
  const KernelWorkspace ws(samples, h);
  const double log_nm1 = std::log(static_cast<double>(n - 1));
  Vector out(n);
  parallel_for(n, threads, [&](long i) {
    Vector lk = log_kernel_row(ws, ws.proj(i), ws.w.col(i));
    lk(i) = -kInf;
    const double lse = logsumexp(lk);
    out(i) = lse == -kInf ? -kInf : lse - log_nm1;
  });
  return out;
}

}  // namespace

double lcv_score(const SampleBatch& samples, const SpdMatrix& h, int threads) {
  const Vector loo = loo_log_densities(samples, h, threads);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < loo.size(); ++i) {
    if (loo(i) == -kInf) return -kInf;
    acc += loo(i);
  }
  return acc / static_cast<double>(loo.size());
}

PluginModel::PluginModel(Kind kind, const SampleBatch& samples, int mc_draws,
                         RngStream& rng)
    : kind_(kind), halfspace_(samples.halfspace()) {
  if (mc_draws < 1)
    throw std::invalid_argument("PluginModel: mc_draws must be >= 1");
  const Eigen::Index d = samples.dim();
  const Vector& beta = halfspace_.beta();

  if (kind == Kind::mig_mle) {
    mig_.emplace(mig_mle(samples));
  } else if (kind == Kind::mig_moments) {
    mig_.emplace(mig_method_of_moments(samples));
  } else {
    // Moment matching with buffer delta = 0; rejection draws from the
    // untruncated Gaussian.
    tg_mean_ = samples.data().colwise().mean().transpose();
    const Matrix centered = samples.data().rowwise() - tg_mean_.transpose();
    tg_cov_ = centered.transpose() * centered /
              static_cast<double>(samples.size() - 1);
    const SpdMatrix cov(tg_cov_);
    tg_cov_inv_ = cov.inverse();
    tg_chol_ = cov.chol();
    tg_log_det_ = cov.log_det();
    const double margin =
        beta.dot(tg_mean_) / std::sqrt(beta.dot(tg_cov_ * beta));
    tg_log_norm_ = norm_logcdf(margin);
  }

  draws_ = Matrix(mc_draws, d);
  if (mig_) {
    const MigSampler sampler(*mig_);
    for (int t = 0; t < mc_draws; ++t)
      draws_.row(t) = sampler.draw(rng).transpose();
  } else {
    long attempts = 0;
    for (int t = 0; t < mc_draws; ++t) {
      for (;;) {
        if (++attempts > 20'000'000L)
          throw std::runtime_error(
              "PluginModel: truncated-Gaussian rejection acceptance too low");
        Vector z(d);
        for (Eigen::Index j = 0; j < d; ++j) z(j) = rng.normal();
        const Vector x = tg_mean_ + tg_chol_ * z;
        if (beta.dot(x) > 0.0) {
          draws_.row(t) = x.transpose();
          break;
        }
      }
    }
  }

  // Frozen per-draw quantities for the bandwidth criteria.
  g_ = Vector(mc_draws);
  a_ = Vector(mc_draws);
  w_ = Vector(mc_draws);
  iso_ = Vector(mc_draws);
  hess_.reserve(mc_draws);
  const double d_real = static_cast<double>(d);
  Eigen::Index keep = 0;
  for (int t = 0; t < mc_draws; ++t) {
    const Vector x = draws_.row(t).transpose();
    const double g = std::exp(log_density(x));
    if (!(g > 0.0) || !std::isfinite(g)) {
      ++excluded_;
      continue;
    }
    const Matrix hess = density_hessian(x);
    const double btx = beta.dot(x);
    draws_.row(keep) = x.transpose();
    g_(keep) = g;
    a_(keep) = std::pow(4.0 * M_PI * btx, -0.5 * d_real);
    w_(keep) = btx * btx / (4.0 * g);
    iso_(keep) = btx * btx * hess.trace() * hess.trace() / g;
    hess_.push_back(hess);
    ++keep;
  }
  if (keep == 0)
    throw std::runtime_error("PluginModel: every draw had zero density");
  draws_.conservativeResize(keep, d);
  g_.conservativeResize(keep);
  a_.conservativeResize(keep);
  w_.conservativeResize(keep);
  iso_.conservativeResize(keep);
}

double PluginModel::log_density(const Vector& x) const {
  if (mig_) return mig_log_density(*mig_, x);
  if (!(halfspace_.beta().dot(x) > 0.0)) return -kInf;
  const Vector dev = x - tg_mean_;
  const Vector half = tg_chol_.triangularView<Eigen::Lower>().solve(dev);
  const double d_real = static_cast<double>(x.size());
  return -0.5 * d_real * kLogTwoPi - 0.5 * tg_log_det_ -
         0.5 * half.squaredNorm() - tg_log_norm_;
}

Matrix PluginModel::density_hessian(const Vector& x) const {
  if (mig_) return mig_hessian_density(*mig_, x);
  const double f = std::exp(log_density(x));
  const Vector u = tg_cov_inv_ * (x - tg_mean_);
  return f * (u * u.transpose() - tg_cov_inv_);
}

double amise_objective_full(const SpdMatrix& h, const PluginModel& plugin,
                            long n) {
  if (n < 1) throw std::invalid_argument("amise_objective_full: n must be >= 1");
  const long t = plugin.mc_draws();
  double b_term = 0.0;
  for (long i = 0; i < t; ++i) {
    const double tr = (h.entries().cwiseProduct(plugin.hessians()[i])).sum();
    b_term += plugin.quad_weights()(i) * tr * tr;
  }
  b_term /= static_cast<double>(t);
  const double a_term = plugin.a_terms().mean();
  return std::exp(-0.5 * h.log_det()) * a_term / static_cast<double>(n) +
         b_term;
}

double amise_isotropic_h(const PluginModel& plugin, long n) {
  if (n < 1) throw std::invalid_argument("amise_isotropic_h: n must be >= 1");
  const double d = static_cast<double>(plugin.dim());
  const double num = plugin.a_terms().mean();
  const double den = plugin.iso_denominator().mean();
  if (!(den > 0.0))
    throw std::runtime_error(
        "amise_isotropic_h: nonpositive denominator estimate");
  return std::pow(d / static_cast<double>(n) * num / den, 1.0 / (d + 4.0));
}

double lscv_score(const SampleBatch& samples, const SpdMatrix& h,
                  const PluginModel& plugin, int threads) {
  const Vector loo = loo_log_densities(samples, h, threads);
  double term1 = 0.0;
  for (Eigen::Index i = 0; i < loo.size(); ++i)
    term1 += loo(i) == -kInf ? 0.0 : std::exp(loo(i));
  term1 /= static_cast<double>(loo.size());

  const Vector fhat = kde_eval_many(samples, h, plugin.draws(), threads);
  double term2 = 0.0;
  for (Eigen::Index t = 0; t < fhat.size(); ++t)
    term2 += fhat(t) * fhat(t) / plugin.g_values()(t);
  term2 /= static_cast<double>(fhat.size());
  return term1 - 0.5 * term2;
}

Bandwidth normal_reference_bandwidth(const SampleBatch& samples) {
  const Eigen::Index n = samples.size();
  const Eigen::Index d = samples.dim();
  if (n < 2)
    throw std::invalid_argument("normal_reference_bandwidth: need n >= 2");
  const Vector mean = samples.data().colwise().mean().transpose();
  const Matrix centered = samples.data().rowwise() - mean.transpose();
  const double factor =
      std::pow(4.0 / ((static_cast<double>(d) + 2.0) * static_cast<double>(n)),
               1.0 / (static_cast<double>(d) + 4.0));
  Matrix h = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double sd = std::sqrt(centered.col(j).squaredNorm() /
                                static_cast<double>(n - 1));
    if (!(sd > 0.0))
      throw std::runtime_error(
          "normal_reference_bandwidth: zero-variance margin");
    h(j, j) = sd * factor;
  }
  return Bandwidth{SpdMatrix(std::move(h)), Bandwidth::Method::normal_ref, 0.0};
}

namespace {

Matrix chol_from_params(const Vector& theta, Eigen::Index d) {
  Matrix l = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) l(i, i) = std::exp(theta(i));
  Eigen::Index k = d;
  for (Eigen::Index i = 1; i < d; ++i)
    for (Eigen::Index j = 0; j < i; ++j) l(i, j) = theta(k++);
  return l;
}

SpdMatrix spd_from_chol(const Matrix& l) {
  Matrix h = l * l.transpose();
  h = 0.5 * (h + h.transpose()).eval();
  return SpdMatrix(std::move(h));
}

}  // namespace

Bandwidth optimize_bandwidth(const SampleBatch& samples,
                             Bandwidth::Method method,
                             const PluginModel* plugin, int threads) {
  using Method = Bandwidth::Method;
  if (method == Method::normal_ref) return normal_reference_bandwidth(samples);
  const bool needs_plugin = method == Method::amise_full ||
                            method == Method::amise_iso ||
                            method == Method::lscv;
  if (needs_plugin && plugin == nullptr)
    throw std::invalid_argument("optimize_bandwidth: objective needs a plug-in");
  const Eigen::Index d = samples.dim();
  const long n = samples.size();
  const bool isotropic =
      method == Method::amise_iso || method == Method::lcv_iso;
  const bool maximize_score =
      method == Method::lcv_full || method == Method::lcv_iso ||
      method == Method::lscv;

  const Bandwidth nr = normal_reference_bandwidth(samples);

  auto objective_for = [&](const SpdMatrix& h) -> double {
    switch (method) {
      case Method::amise_full:
      case Method::amise_iso:
        return amise_objective_full(h, *plugin, n);
      case Method::lcv_full:
      case Method::lcv_iso: {
        const double s = lcv_score(samples, h, threads);
        return s == -kInf ? kInf : -s;
      }
      case Method::lscv:
        return -lscv_score(samples, h, *plugin, threads);
      default:
        throw std::logic_error("optimize_bandwidth: unreachable");
    }
  };

  Vector theta0;
  std::function<SpdMatrix(const Vector&)> build;
  if (isotropic) {
    // Determinant-matching isotropic projection of the reference matrix.
    theta0 = Vector(1);
    theta0(0) = nr.h.log_det() / (2.0 * static_cast<double>(d));
    build = [d](const Vector& th) {
      const double h2 = std::exp(2.0 * th(0));
      return SpdMatrix(h2 * Matrix::Identity(d, d));
    };
  } else {
    theta0 = Vector(d * (d + 1) / 2);
    for (Eigen::Index i = 0; i < d; ++i)
      theta0(i) = 0.5 * std::log(nr.h.entries()(i, i));
    theta0.tail(d * (d - 1) / 2).setZero();
    build = [d](const Vector& th) {
      return spd_from_chol(chol_from_params(th, d));
    };
  }

  auto wrapped = [&](const Vector& th) -> double {
    SpdMatrix h = build(th);
    const double v = objective_for(h);
    return std::isnan(v) ? kInf : v;
  };

  const NelderMeadResult res = nelder_mead(wrapped, theta0, 0.25, 1e-4, 500);
  Bandwidth out{build(res.x), method,
                maximize_score ? -res.value : res.value};
  return out;
}

Bandwidth spherical_bandwidth_pipeline(
    const SampleBatch& samples,
    const std::function<Bandwidth(const SampleBatch&)>& inner_selector,
    bool scaling_only) {
  const Eigen::Index d = samples.dim();
  const Vector mean = samples.data().colwise().mean().transpose();
  const Matrix centered = samples.data().rowwise() - mean.transpose();
  Matrix s =
      centered.transpose() * centered / static_cast<double>(samples.size() - 1);
  if (scaling_only) {
    Matrix diag = Matrix::Zero(d, d);
    diag.diagonal() = s.diagonal();
    s = diag;
  }
  const SpdMatrix cov(s);  // throws when singular
  const Matrix& l = cov.chol();

  const Matrix transformed =
      l.triangularView<Eigen::Lower>().solve(samples.data().transpose())
          .transpose();
  const HalfSpace star(l.transpose() * samples.beta());
  const SampleBatch batch_star(transformed, star);

  const Bandwidth inner = inner_selector(batch_star);
  const Matrix& hi = inner.h.entries();
  const double h2 = hi(0, 0);
  const double off = (hi - h2 * Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (off > 1e-9 * std::max(1.0, h2))
    throw std::invalid_argument(
        "spherical_bandwidth_pipeline: inner selector was not isotropic");
  Matrix h = h2 * s;
  h = 0.5 * (h + h.transpose()).eval();
  return Bandwidth{SpdMatrix(std::move(h)), inner.method,
                   inner.criterion_value};
}

Bandwidth spherical_bandwidth_pipeline(const SampleBatch& samples,
                                       Bandwidth::Method inner,
                                       PluginModel::Kind plugin_kind,
                                       int mc_draws, RngStream& rng,
                                       bool scaling_only, int threads) {
  if (inner != Bandwidth::Method::amise_iso &&
      inner != Bandwidth::Method::lcv_iso)
    throw std::invalid_argument(
        "spherical_bandwidth_pipeline: inner selector must be isotropic");
  auto selector = [&](const SampleBatch& star) -> Bandwidth {
    if (inner == Bandwidth::Method::amise_iso) {
      PluginModel plugin(plugin_kind, star, mc_draws, rng);
      const double h = amise_isotropic_h(plugin, star.size());
      SpdMatrix hm(h * h * Matrix::Identity(star.dim(), star.dim()));
      const double crit = amise_objective_full(hm, plugin, star.size());
      return Bandwidth{std::move(hm), Bandwidth::Method::amise_iso, crit};
    }
    return optimize_bandwidth(star, Bandwidth::Method::lcv_iso, nullptr,
                              threads);
  };
  return spherical_bandwidth_pipeline(samples, selector, scaling_only);
}

}  // namespace mig
