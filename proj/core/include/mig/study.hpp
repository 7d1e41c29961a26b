#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mig/kde.hpp"
#include "mig/targets.hpp"

namespace mig {

// Monte Carlo metric estimate with its standard error; `zero_density_draws`
// counts target draws where the fitted density underflowed to zero, which
// makes the KL estimate infinite.
struct MetricEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long draws = 0;
  long zero_density_draws = 0;
  bool clamped = false;
};

/// Root integrated squared error sqrt(int (fhat - f)^2), importance-sampled
/// from the target itself; the standard error is delta-method propagated
/// through the square root.
MetricEstimate rmise_estimate(const TargetDistribution& target,
                              const SampleBatch& fit_samples,
                              const SpdMatrix& h, long mc_draws,
                              RngStream& rng, int threads = 1);

/// KL(f || fhat) = E_f[ln f - ln fhat] >= 0. Sign convention recorded in
/// the study manifest.
MetricEstimate kl_estimate(const TargetDistribution& target,
                           const SampleBatch& fit_samples, const SpdMatrix& h,
                           long mc_draws, RngStream& rng, int threads = 1);

/// Same metrics against an arbitrary density estimate (natural scale).
MetricEstimate rmise_estimate(const TargetDistribution& target,
                              const std::function<double(const Vector&)>& fhat,
                              long mc_draws, RngStream& rng);
MetricEstimate kl_estimate(const TargetDistribution& target,
                           const std::function<double(const Vector&)>& fhat,
                           long mc_draws, RngStream& rng);

// Bandwidth rules of the simulation study. B5 (robust LCV) is not part of
// the grid; its criterion is only cited in the source literature.
enum class BandwidthRule { B1, B2, B3, B4, B6 };

BandwidthRule bandwidth_rule_from_name(const std::string& name);
const char* to_string(BandwidthRule rule);

/// One bandwidth selection following the study's rule definitions.
Bandwidth select_bandwidth(BandwidthRule rule, const SampleBatch& samples,
                           int plugin_draws, RngStream& rng, int threads = 1);

struct StudyConfig {
  std::vector<int> dims = {2};
  std::vector<TargetDistribution::Kind> targets;
  std::vector<int> sizes = {250};
  std::vector<BandwidthRule> methods;
  int replications = 100;
  std::uint64_t seed = 0;
  long metric_draws = 10000;
  int plugin_draws = 10000;
  int threads = 1;
};

struct CellResult {
  int d = 0;
  TargetDistribution::Kind target = TargetDistribution::Kind::mig;
  int n = 0;
  BandwidthRule method = BandwidthRule::B6;
  double rmise_median = 0.0, rmise_iqr = 0.0;
  double kl_median = 0.0, kl_iqr = 0.0;
  int n_replications = 0;
  int n_failures = 0;
  double wall_time_s = 0.0;  // manifest only, never in the CSV
  std::vector<double> rmise_values, kl_values;
};

struct StudyResult {
  StudyConfig config;
  std::vector<CellResult> cells;
  double total_wall_time_s = 0.0;
};

/// Full replication driver. Deterministic given (seed, config) at any
/// thread count: every replication derives its streams from
/// (seed, cell index, replication index).
StudyResult run_study(const StudyConfig& cfg);

/// Type-7 (linear interpolation) sample quantile.
double quantile_type7(std::vector<double> values, double prob);

/// CSV rows d,target,n,method,metric,median,iqr,n_replications,n_failures.
std::string study_csv(const StudyResult& result);

/// JSON manifest: config echo, conventions, versions, wall times.
std::string study_manifest_json(const StudyResult& result);

}  // namespace mig
