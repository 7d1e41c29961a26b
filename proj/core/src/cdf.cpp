#include "mig/cdf.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mig/special.hpp"

namespace mig {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RadialBounds radius_bounds(const Vector& beta, const Vector& q) {
  if (beta.size() != q.size())
    throw std::invalid_argument("radius_bounds: dimension mismatch");
  if (!q.allFinite())
    throw std::invalid_argument("radius_bounds: q must be finite");
  double hi = 0.0;
  double lo = 0.0;
  bool hi_unbounded = false;
  bool lo_unbounded = false;
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    if (beta(i) > 0.0) {
      hi += beta(i) * q(i);
      lo_unbounded = true;  // x_i -> -inf drives beta^T x down
    } else if (beta(i) < 0.0) {
      lo += beta(i) * q(i);
      hi_unbounded = true;
    }
  }
  RadialBounds rb;
  rb.r_max = hi_unbounded ? kInf : std::max(0.0, hi);
  rb.r_min = lo_unbounded ? 0.0 : std::max(0.0, lo);
  return rb;
}

double BivariateBoundCase::z_min(double r) const {
  double v = -kInf;
  for (const auto& p : lower) v = std::max(v, p.at(r));
  return v;
}

double BivariateBoundCase::z_max(double r) const {
  double v = kInf;
  for (const auto& p : upper) v = std::min(v, p.at(r));
  return v;
}

// The rotated coordinates are r = beta^T x, z = (-beta2 x1 + beta1 x2)/n
// with n = |beta|. Inverting, x1 = beta1 r/n^2 - beta2 z/n and
// x2 = beta2 r/n^2 + beta1 z/n, so each box constraint x_i <= q_i becomes
// one affine bound on z (or, when its z coefficient vanishes, a pure
// constraint on r).
BivariateBoundCase bivariate_bounds(const Vector& beta, const Vector& q) {
  if (beta.size() != 2 || q.size() != 2)
    throw std::invalid_argument("bivariate_bounds: d must be 2");
  if (beta.cwiseAbs().maxCoeff() == 0.0)
    throw std::invalid_argument("bivariate_bounds: beta must be nonzero");
  const double b1 = beta(0), b2 = beta(1);
  const double n = beta.norm();
  const double btq = beta.dot(q);
  using Id = BivariateBoundCase::Id;

  BivariateBoundCase out;
  // Piece induced by x1 <= q1: z >= or <= (b1 r/n - n q1)/b2.
  const AffinePiece piece1{b1 / (n * b2), -n * q(0) / b2};
  // Piece induced by x2 <= q2: z <= or >= (n q2 - b2 r/n)/b1.
  const AffinePiece piece2{-b2 / (n * b1), n * q(1) / b1};

  if (b1 != 0.0 && b2 != 0.0) {
    out.v1 = Eigen::Vector2d(q(0), -b1 * q(0) / b2);
    out.v2 = Eigen::Vector2d(-b2 * q(1) / b1, q(1));
  }

  if (b1 > 0.0 && b2 > 0.0) {
    if (btq <= 0.0) {
      out.id = Id::ZERO_PROB;
      return out;
    }
    out.id = Id::PP;
    out.r_min = 0.0;
    out.r_max = btq;
    out.lower = {piece1};
    out.upper = {piece2};
  } else if (b1 < 0.0 && b2 > 0.0) {
    out.id = btq > 0.0 ? Id::NP_in : Id::NP_out;
    out.r_min = 0.0;
    out.r_max = kInf;
    out.lower = {piece1, piece2};  // both constraints bound z from below
  } else if (b1 > 0.0 && b2 < 0.0) {
    out.id = Id::PN;
    out.r_min = 0.0;
    out.r_max = kInf;
    out.upper = {piece1, piece2};
  } else if (b1 < 0.0 && b2 < 0.0) {
    out.id = Id::NN;
    out.r_min = std::max(0.0, btq);
    out.r_max = kInf;
    out.lower = {piece2};
    out.upper = {piece1};
  } else if (b1 == 0.0) {
    // z = sign(b2) * x1; constraint x2 <= q2 restricts r only.
    if (b2 > 0.0) {
      if (btq <= 0.0) {
        out.id = Id::ZERO_PROB;
        return out;
      }
      out.id = Id::B1_zero_pos;
      out.r_min = 0.0;
      out.r_max = btq;
      out.lower = {AffinePiece{0.0, -q(0)}};
    } else {
      out.id = Id::B1_zero_neg;
      out.r_min = std::max(0.0, btq);
      out.r_max = kInf;
      out.upper = {AffinePiece{0.0, q(0)}};
    }
  } else {
    // b2 == 0: z = sign(b1) * x2; constraint x1 <= q1 restricts r only.
    if (b1 > 0.0) {
      if (btq <= 0.0) {
        out.id = Id::ZERO_PROB;
        return out;
      }
      out.id = Id::B2_zero_pos;
      out.r_min = 0.0;
      out.r_max = btq;
      out.upper = {AffinePiece{0.0, q(1)}};
    } else {
      out.id = Id::B2_zero_neg;
      out.r_min = std::max(0.0, btq);
      out.r_max = kInf;
      out.lower = {AffinePiece{0.0, -q(1)}};
    }
  }
  return out;
}

std::pair<double, double> z_bounds_lp(const Vector& beta, const Rotation& rot,
                                      const Vector& q, double r,
                                      const Vector& z_prefix) {
  const Eigen::Index d = beta.size();
  const Eigen::Index i = z_prefix.size();  // zero-based index of target row
  if (i >= d - 1)
    throw std::invalid_argument("z_bounds_lp: prefix too long for dimension");
  LinearProgram lp;
  lp.objective = rot.q2().row(i).transpose();
  lp.upper_bounds = q;
  lp.eq_lhs = Matrix(i + 1, d);
  lp.eq_rhs = Vector(i + 1);
  lp.eq_lhs.row(0) = beta.transpose();
  lp.eq_rhs(0) = r;
  for (Eigen::Index j = 0; j < i; ++j) {
    lp.eq_lhs.row(j + 1) = rot.q2().row(j);
    lp.eq_rhs(j + 1) = z_prefix(j);
  }
  const LpResult lo = simplex_solve(lp, LpSense::minimize);
  if (lo.infeasible)
    throw std::runtime_error("z_bounds_lp: infeasible constraint set");
  const LpResult hi = simplex_solve(lp, LpSense::maximize);
  if (hi.infeasible)
    throw std::runtime_error("z_bounds_lp: infeasible constraint set");
  return {lo.value, hi.value};
}

McEstimate cdf_plain_mc(const MigParams& p, const Vector& q, long n,
                        RngStream& rng) {
  if (q.size() != p.dim())
    throw std::invalid_argument("cdf_plain_mc: dimension mismatch");
  if (n < 100) throw std::invalid_argument("cdf_plain_mc: need n >= 100");
  const MigSampler sampler(p);
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    const Vector x = sampler.draw(rng);
    if ((x.array() <= q.array()).all()) ++hits;
  }
  McEstimate est;
  est.method = McEstimate::Method::plain_mc;
  est.draws = n;
  est.value = static_cast<double>(hits) / static_cast<double>(n);
  est.std_error = std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(n));
  return est;
}

namespace {

McEstimate sov_zero(long t_draws) {
  McEstimate est;
  est.method = McEstimate::Method::sov;
  est.draws = t_draws;
  return est;
}

}  // namespace

McEstimate cdf_sov(const MigParams& p, const Vector& q, long t_draws,
                   RngStream& rng) {
  const Eigen::Index d = p.dim();
  if (q.size() != d) throw std::invalid_argument("cdf_sov: dimension mismatch");
  if (t_draws < 100) throw std::invalid_argument("cdf_sov: need T >= 100");
  if (!q.allFinite())
    throw std::invalid_argument("cdf_sov: q must be finite");

  const MigSampler sampler(p);
  const IgParams& radial = sampler.radial_law();

  if (d == 1) {
    // Exact: X = R / beta with R ~ IG, no Monte Carlo needed.
    McEstimate est = sov_zero(t_draws);
    const double b = p.beta()(0);
    est.value = b > 0.0 ? ig_cdf(radial, b * q(0))
                        : 1.0 - ig_cdf(radial, b * q(0));
    return est;
  }

  BivariateBoundCase biv;
  RadialBounds rb;
  if (d == 2) {
    biv = bivariate_bounds(p.beta(), q);
    if (biv.id == BivariateBoundCase::Id::ZERO_PROB) return sov_zero(t_draws);
    rb.r_min = biv.r_min;
    rb.r_max = biv.r_max;
  } else {
    rb = radius_bounds(p.beta(), q);
  }
  if (!(rb.r_max > rb.r_min)) return sov_zero(t_draws);

  const double f_lo = ig_cdf(radial, rb.r_min);
  const double f_hi = rb.r_max == kInf ? 1.0 : ig_cdf(radial, rb.r_max);
  const double mass = f_hi - f_lo;
  if (!(mass > 1e-300)) return sov_zero(t_draws);

  const ConditionalGaussian& cg = sampler.conditional();
  const Matrix& l = cg.sigma_chol;

  double sum = 0.0;
  double sum_sq = 0.0;
  Vector y(d - 1);
  for (long t = 0; t < t_draws; ++t) {
    const double r = truncated_ig_sample(radial, rb.r_min, rb.r_max, rng);
    const double sqrt_r = std::sqrt(r);
    const Vector mu = cg.mu_at(r);
    double prod = 1.0;
    Vector z_prefix(d - 1);
    for (Eigen::Index j = 0; j < d - 1; ++j) {
      double zmin, zmax;
      if (d == 2) {
        zmin = biv.z_min(r);
        zmax = biv.z_max(r);
      } else {
        std::tie(zmin, zmax) = z_bounds_lp(p.beta(), sampler.rotation(), q, r,
                                           z_prefix.head(j));
      }
      double carry = 0.0;
      for (Eigen::Index k = 0; k < j; ++k) carry += l(j, k) * y(k);
      const double a = zmin == -kInf
                           ? -kInf
                           : ((zmin - mu(j)) / sqrt_r - carry) / l(j, j);
      const double b = zmax == kInf
                           ? kInf
                           : ((zmax - mu(j)) / sqrt_r - carry) / l(j, j);
      const double pa = a == -kInf ? 0.0 : norm_cdf(a);
      const double pb = b == kInf ? 1.0 : norm_cdf(b);
      const double width = pb - pa;
      if (!(width > 0.0)) {
        prod = 0.0;
        break;
      }
      prod *= width;
      y(j) = truncated_std_normal(a, b, rng);
      z_prefix(j) = mu(j) + sqrt_r * (carry + l(j, j) * y(j));
    }
    sum += prod;
    sum_sq += prod * prod;
  }

  const double tn = static_cast<double>(t_draws);
  const double mean = sum / tn;
  const double var = std::max(0.0, sum_sq / tn - mean * mean);
  McEstimate est;
  est.method = McEstimate::Method::sov;
  est.draws = t_draws;
  est.value = mass * mean;
  est.std_error = mass * std::sqrt(var / tn);
  return est;
}

}  // namespace mig
