#include "mig/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mig {

NelderMeadResult nelder_mead(const std::function<double(const Vector&)>& f,
                             const Vector& x0, double initial_step, double tol,
                             int max_iterations) {
  const int k = static_cast<int>(x0.size());
  if (k < 1) throw std::invalid_argument("nelder_mead: empty parameter vector");
  const double f0 = f(x0);
  if (!std::isfinite(f0))
    throw std::runtime_error("nelder_mead: objective not finite at the initial point");

  std::vector<Vector> xs(k + 1, x0);
  std::vector<double> fs(k + 1, f0);
  for (int i = 0; i < k; ++i) {
    xs[i + 1](i) += initial_step;
    fs[i + 1] = f(xs[i + 1]);
  }
  std::vector<int> order(k + 1);
  std::iota(order.begin(), order.end(), 0);

  auto sort_simplex = [&] {
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fs[a] < fs[b]; });
  };
  auto diameter = [&] {
    double d = 0.0;
    for (int i = 0; i <= k; ++i)
      d = std::max(d, (xs[order[i]] - xs[order[0]]).cwiseAbs().maxCoeff());
    return d;
  };

  int it = 0;
  for (; it < max_iterations; ++it) {
    sort_simplex();
    if (diameter() < tol) break;
    const int best = order[0], worst = order[k], second = order[k - 1];
    Vector centroid = Vector::Zero(k);
    for (int i = 0; i <= k; ++i)
      if (order[i] != worst) centroid += xs[order[i]];
    centroid /= k;

    const Vector xr = centroid + (centroid - xs[worst]);
    const double fr = f(xr);
    if (fr < fs[best]) {
      const Vector xe = centroid + 2.0 * (centroid - xs[worst]);
      const double fe = f(xe);
      if (fe < fr) {
        xs[worst] = xe;
        fs[worst] = fe;
      } else {
        xs[worst] = xr;
        fs[worst] = fr;
      }
    } else if (fr < fs[second]) {
      xs[worst] = xr;
      fs[worst] = fr;
    } else {
      const bool outside = fr < fs[worst];
      const Vector xc = outside ? Vector(centroid + 0.5 * (centroid - xs[worst]))
                                : Vector(centroid - 0.5 * (centroid - xs[worst]));
      const double fc = f(xc);
      if (fc < std::min(fr, fs[worst])) {
        xs[worst] = xc;
        fs[worst] = fc;
      } else {
        // Shrink toward the best vertex.
        for (int i = 0; i <= k; ++i) {
          if (order[i] == best) continue;
          xs[order[i]] = xs[best] + 0.5 * (xs[order[i]] - xs[best]);
          fs[order[i]] = f(xs[order[i]]);
        }
      }
    }
  }
  sort_simplex();
  NelderMeadResult res;
  res.x = xs[order[0]];
  res.value = fs[order[0]];
  res.iterations = it;
  res.converged = diameter() < tol;
  return res;
}

}  // namespace mig
