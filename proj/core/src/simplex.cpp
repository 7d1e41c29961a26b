#include "mig/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxIterations = 10000;

// Standard-form minimization: min c^T s, A s = b, s >= 0. Returns
// {value, unbounded, infeasible}.
struct StdResult {
  double value = 0.0;
  bool unbounded = false;
  bool infeasible = false;
};

// Dense tableau simplex, Bland's rule throughout. The tableau holds the
// constraint rows in basis-reduced form plus the reduced-cost row.
class Tableau {
 public:
  Tableau(const Matrix& a, const Vector& b) : m_(a.rows()), n_(a.cols()) {
    t_ = Matrix::Zero(m_ + 1, n_ + m_ + 1);
    t_.block(0, 0, m_, n_) = a;
    t_.block(0, n_, m_, m_) = Matrix::Identity(m_, m_);
    t_.col(n_ + m_).head(m_) = b;
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) basis_[i] = n_ + i;
    // Flip rows so the rhs is nonnegative (artificials start feasible).
    for (int i = 0; i < m_; ++i)
      if (t_(i, n_ + m_) < 0.0) {
        t_.row(i) = -t_.row(i);
        t_(i, n_ + i) = 1.0;
      }
  }

  // Phase 1: minimize the sum of artificial variables.
  bool phase1(double tol) {
    t_.row(m_).setZero();
    for (int j = n_; j < n_ + m_; ++j) t_(m_, j) = 1.0;
    for (int j = 0; j < n_ + m_; ++j)
      for (int i = 0; i < m_; ++i)
        if (basis_[i] >= n_) t_(m_, j) -= t_(i, j);
    double rhs = 0.0;
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= n_) rhs -= t_(i, n_ + m_);
    t_(m_, n_ + m_) = rhs;
    iterate(n_ + m_, tol);
    const double infeas = -t_(m_, n_ + m_);
    if (infeas > tol) return false;
    // Pivot remaining artificials out of the basis where possible.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int enter = -1;
      for (int j = 0; j < n_; ++j)
        if (std::abs(t_(i, j)) > tol) { enter = j; break; }
      if (enter >= 0) pivot(i, enter);
    }
    return true;
  }

  StdResult phase2(const Vector& c, double tol) {
    t_.row(m_).setZero();
    t_.row(m_).head(n_) = c.transpose();
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_)
        t_.row(m_) -= c(basis_[i]) * t_.row(i);
    StdResult res;
    if (!iterate(n_, tol)) {
      res.unbounded = true;
      res.value = -kInf;
      return res;
    }
    res.value = -t_(m_, n_ + m_);
    return res;
  }

 private:
  void pivot(int row, int col) {
    t_.row(row) /= t_(row, col);
    for (int i = 0; i <= m_; ++i) {
      if (i == row) continue;
      const double factor = t_(i, col);
      if (factor != 0.0) t_.row(i) -= factor * t_.row(row);
    }
    basis_[row] = col;
  }

  // Returns false on unboundedness.
  bool iterate(int ncols, double tol) {
    for (int it = 0; it < kMaxIterations; ++it) {
      int enter = -1;
      for (int j = 0; j < ncols; ++j)
        if (t_(m_, j) < -tol) { enter = j; break; }  // Bland: lowest index
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < m_; ++i) {
        if (t_(i, enter) > tol) {
          const double ratio = t_(i, n_ + m_) / t_(i, enter);
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 &&
               (leave < 0 || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    throw std::runtime_error("simplex_solve: iteration cap exceeded");
  }

  int m_, n_;
  Matrix t_;
  std::vector<int> basis_;
};

StdResult standard_simplex_min(const Vector& c, const Matrix& a,
                               const Vector& b) {
  const double scale =
      std::max({1.0, b.size() ? b.cwiseAbs().maxCoeff() : 0.0,
                a.size() ? a.cwiseAbs().maxCoeff() : 0.0});
  const double tol = 1e-9 * scale;
  Tableau tab(a, b);
  if (!tab.phase1(tol)) return {0.0, false, true};
  return tab.phase2(c, tol);
}

}  // namespace

LpResult simplex_solve(const LinearProgram& lp, LpSense sense) {
  const Eigen::Index n = lp.objective.size();
  if (lp.upper_bounds.size() != n ||
      (lp.eq_lhs.rows() > 0 && lp.eq_lhs.cols() != n) ||
      lp.eq_rhs.size() != lp.eq_lhs.rows())
    throw std::invalid_argument("simplex_solve: inconsistent dimensions");
  if (!lp.upper_bounds.allFinite())
    throw std::invalid_argument("simplex_solve: upper bounds must be finite");

  // Substitute s = q - x >= 0:  c^T x = c^T q - c^T s,  A s = A q - b.
  const Vector bhat = lp.eq_lhs.rows() > 0
                          ? Vector(lp.eq_lhs * lp.upper_bounds - lp.eq_rhs)
                          : Vector(0);
  const double cq = lp.objective.dot(lp.upper_bounds);

  LpResult out;
  if (sense == LpSense::maximize) {
    StdResult r = standard_simplex_min(lp.objective, lp.eq_lhs, bhat);
    out.infeasible = r.infeasible;
    out.unbounded = r.unbounded;
    out.value = r.unbounded ? kInf : cq - r.value;
  } else {
    StdResult r = standard_simplex_min(Vector(-lp.objective), lp.eq_lhs, bhat);
    out.infeasible = r.infeasible;
    out.unbounded = r.unbounded;
    out.value = r.unbounded ? -kInf : cq + r.value;
  }
  if (out.infeasible) out.value = std::numeric_limits<double>::quiet_NaN();
  return out;
}

}  // namespace mig
