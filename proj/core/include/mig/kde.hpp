#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mig/mig_distribution.hpp"
#include "mig/sampler.hpp"

namespace mig {

// Selected smoothing matrix together with the criterion that chose it.
struct Bandwidth {
  enum class Method {
    amise_full,
    amise_iso,
    lcv_full,
    lcv_iso,
    lscv,
    normal_ref,
  };

  SpdMatrix h;
  Method method;
  double criterion_value;
};

const char* to_string(Bandwidth::Method m);

/// Kernel smoother value (1/n) sum_i k_{beta, xi, H}(X_i); 0 off the
/// half-space.
double kde_eval(const SampleBatch& samples, const SpdMatrix& h,
                const Vector& xi);

/// kde_eval at many points (rows); parallel over points, deterministic.
Vector kde_eval_many(const SampleBatch& samples, const SpdMatrix& h,
                     const Matrix& points, int threads = 1);

/// Leave-one-out log-likelihood score (1/n) sum_i ln fhat^{-i}(x_i);
/// -inf when any leave-one-out density vanishes.
double lcv_score(const SampleBatch& samples, const SpdMatrix& h,
                 int threads = 1);

// Parametric stand-in for the unknown target inside the AMISE and LSCV
// integrals. Fitting freezes mc_draws Monte Carlo draws from the fitted
// density together with every per-draw quantity the criteria need, so
// bandwidth objectives are deterministic functions of H during one
// selection run (common random numbers).
class PluginModel {
 public:
  enum class Kind { mig_mle, mig_moments, trunc_gaussian };

  PluginModel(Kind kind, const SampleBatch& samples, int mc_draws,
              RngStream& rng);

  Kind kind() const { return kind_; }
  const HalfSpace& halfspace() const { return halfspace_; }
  Eigen::Index dim() const { return halfspace_.dim(); }
  long mc_draws() const { return draws_.rows(); }
  long excluded_draws() const { return excluded_; }

  double log_density(const Vector& x) const;
  Matrix density_hessian(const Vector& x) const;
  /// Fitted MIG parameters; null for the truncated-Gaussian kind.
  const MigParams* mig_params() const { return mig_ ? &*mig_ : nullptr; }

  const Matrix& draws() const { return draws_; }
  const Vector& g_values() const { return g_; }
  const Vector& a_terms() const { return a_; }            // (4 pi b^T x)^{-d/2}
  const Vector& quad_weights() const { return w_; }       // (b^T x)^2/(4 g)
  const Vector& iso_denominator() const { return iso_; }  // (b^T x)^2 lap^2/g
  const std::vector<Matrix>& hessians() const { return hess_; }

 private:
  Kind kind_;
  HalfSpace halfspace_;
  std::optional<MigParams> mig_;
  // Truncated-Gaussian plug-in state.
  Vector tg_mean_;
  Matrix tg_cov_, tg_cov_inv_, tg_chol_;
  double tg_log_norm_ = 0.0;  // log Phi(beta^T m / sqrt(beta^T S beta))
  double tg_log_det_ = 0.0;

  Matrix draws_;
  Vector g_, a_, w_, iso_;
  std::vector<Matrix> hess_;
  long excluded_ = 0;
};

/// AMISE objective n^{-1}|H|^{-1/2} A + B(H) on the plug-in's frozen draws.
double amise_objective_full(const SpdMatrix& h, const PluginModel& plugin,
                            long n);

/// Closed-form isotropic AMISE bandwidth h_opt on the frozen draws;
/// throws std::runtime_error on a nonpositive denominator estimate.
double amise_isotropic_h(const PluginModel& plugin, long n);

/// Least-squares cross-validation score; the integral of fhat^2 is
/// importance-sampled from the plug-in's frozen draws.
double lscv_score(const SampleBatch& samples, const SpdMatrix& h,
                  const PluginModel& plugin, int threads = 1);

/// Diagonal normal-reference rule (H)_ii = sd_i [4/((d+2)n)]^{1/(d+4)}.
Bandwidth normal_reference_bandwidth(const SampleBatch& samples);

/// Nelder-Mead over the Cholesky parametrization (full, d(d+1)/2
/// parameters, log-diagonal) or over log h (isotropic), initialized at
/// the normal-reference bandwidth. `plugin` is required for the AMISE
/// and LSCV objectives.
Bandwidth optimize_bandwidth(const SampleBatch& samples,
                             Bandwidth::Method method,
                             const PluginModel* plugin = nullptr,
                             int threads = 1);

/// Whiten by the Cholesky factor of the sample covariance (or of the
/// diagonal of variances when scaling_only), select an isotropic h on the
/// transformed data, and return h^2 S in the original coordinates.
Bandwidth spherical_bandwidth_pipeline(
    const SampleBatch& samples,
    const std::function<Bandwidth(const SampleBatch&)>& inner_selector,
    bool scaling_only = false);

/// Spherical pipeline with the standard inner selectors (Method must be
/// amise_iso or lcv_iso); the plug-in is refitted on the transformed data.
Bandwidth spherical_bandwidth_pipeline(const SampleBatch& samples,
                                       Bandwidth::Method inner,
                                       PluginModel::Kind plugin_kind,
                                       int mc_draws, RngStream& rng,
                                       bool scaling_only = false,
                                       int threads = 1);

}  // namespace mig
