#include "mig/study.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "mig/csv.hpp"
#include "mig/parallel.hpp"

namespace mig {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kVersion = "0.1.0";

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

namespace {

Matrix draw_points(const TargetDistribution& target, long mc_draws,
                   RngStream& rng) {
  if (mc_draws < 2)
    throw std::invalid_argument("metric estimate: mc_draws must be >= 2");
  Matrix points(mc_draws, target.dim());
  for (long t = 0; t < mc_draws; ++t)
    points.row(t) = target.sample(rng).transpose();
  return points;
}

MetricEstimate rmise_from_values(const TargetDistribution& target,
                                 const Matrix& points, const Vector& fhat) {
  const long mc_draws = points.rows();
  double sum = 0.0, sum_sq = 0.0;
  for (long t = 0; t < mc_draws; ++t) {
    const double f = std::exp(target.log_density(points.row(t).transpose()));
    const double diff = fhat(t) - f;
    const double term = diff * diff / f;
    sum += term;
    sum_sq += term * term;
  }
  const double tn = static_cast<double>(mc_draws);
  double inner = sum / tn;
  const double inner_se =
      std::sqrt(std::max(0.0, sum_sq / tn - inner * inner) / tn);
  MetricEstimate est;
  est.draws = mc_draws;
  if (inner < 0.0) {  // cannot occur with nonnegative terms; kept as a guard
    inner = 0.0;
    est.clamped = true;
  }
  est.value = std::sqrt(inner);
  est.std_error = est.value > 0.0 ? inner_se / (2.0 * est.value) : inner_se;
  return est;
}

MetricEstimate kl_from_values(const TargetDistribution& target,
                              const Matrix& points, const Vector& fhat) {
  const long mc_draws = points.rows();
  double sum = 0.0, sum_sq = 0.0;
  long zeros = 0;
  for (long t = 0; t < mc_draws; ++t) {
    if (!(fhat(t) > 0.0)) {
      ++zeros;
      continue;
    }
    const double term =
        target.log_density(points.row(t).transpose()) - std::log(fhat(t));
    sum += term;
    sum_sq += term * term;
  }
  MetricEstimate est;
  est.draws = mc_draws;
  est.zero_density_draws = zeros;
  if (zeros > 0) {
    est.value = kInf;
    est.std_error = kInf;
    return est;
  }
  const double tn = static_cast<double>(mc_draws);
  est.value = sum / tn;
  est.std_error =
      std::sqrt(std::max(0.0, sum_sq / tn - est.value * est.value) / tn);
  return est;
}

Vector apply_density(const std::function<double(const Vector&)>& fhat,
                     const Matrix& points) {
  Vector out(points.rows());
  for (Eigen::Index t = 0; t < points.rows(); ++t)
    out(t) = fhat(points.row(t).transpose());
  return out;
}

}  // namespace

MetricEstimate rmise_estimate(const TargetDistribution& target,
                              const SampleBatch& fit_samples,
                              const SpdMatrix& h, long mc_draws,
                              RngStream& rng, int threads) {
  const Matrix points = draw_points(target, mc_draws, rng);
  return rmise_from_values(target, points,
                           kde_eval_many(fit_samples, h, points, threads));
}

MetricEstimate kl_estimate(const TargetDistribution& target,
                           const SampleBatch& fit_samples, const SpdMatrix& h,
                           long mc_draws, RngStream& rng, int threads) {
  const Matrix points = draw_points(target, mc_draws, rng);
  return kl_from_values(target, points,
                        kde_eval_many(fit_samples, h, points, threads));
}

MetricEstimate rmise_estimate(const TargetDistribution& target,
                              const std::function<double(const Vector&)>& fhat,
                              long mc_draws, RngStream& rng) {
  const Matrix points = draw_points(target, mc_draws, rng);
  return rmise_from_values(target, points, apply_density(fhat, points));
}

MetricEstimate kl_estimate(const TargetDistribution& target,
                           const std::function<double(const Vector&)>& fhat,
                           long mc_draws, RngStream& rng) {
  const Matrix points = draw_points(target, mc_draws, rng);
  return kl_from_values(target, points, apply_density(fhat, points));
}

BandwidthRule bandwidth_rule_from_name(const std::string& name) {
  if (name == "B1" || name == "b1") return BandwidthRule::B1;
  if (name == "B2" || name == "b2") return BandwidthRule::B2;
  if (name == "B3" || name == "b3") return BandwidthRule::B3;
  if (name == "B4" || name == "b4") return BandwidthRule::B4;
  if (name == "B6" || name == "b6") return BandwidthRule::B6;
  throw std::invalid_argument("unknown bandwidth rule: " + name +
                              " (B5 is not implemented)");
}

const char* to_string(BandwidthRule rule) {
  switch (rule) {
    case BandwidthRule::B1: return "B1";
    case BandwidthRule::B2: return "B2";
    case BandwidthRule::B3: return "B3";
    case BandwidthRule::B4: return "B4";
    case BandwidthRule::B6: return "B6";
  }
  return "?";
}

Bandwidth select_bandwidth(BandwidthRule rule, const SampleBatch& samples,
                           int plugin_draws, RngStream& rng, int threads) {
  switch (rule) {
    case BandwidthRule::B1: {
      PluginModel plugin(PluginModel::Kind::mig_mle, samples, plugin_draws,
                         rng);
      return optimize_bandwidth(samples, Bandwidth::Method::amise_full,
                                &plugin, threads);
    }
    case BandwidthRule::B2:
      return optimize_bandwidth(samples, Bandwidth::Method::lcv_full, nullptr,
                                threads);
    case BandwidthRule::B3:
      return spherical_bandwidth_pipeline(samples,
                                          Bandwidth::Method::amise_iso,
                                          PluginModel::Kind::mig_mle,
                                          plugin_draws, rng, false, threads);
    case BandwidthRule::B4:
      return spherical_bandwidth_pipeline(samples, Bandwidth::Method::lcv_iso,
                                          PluginModel::Kind::mig_mle,
                                          plugin_draws, rng, false, threads);
    case BandwidthRule::B6:
      return normal_reference_bandwidth(samples);
  }
  throw std::logic_error("select_bandwidth: unreachable");
}

double quantile_type7(std::vector<double> values, double prob) {
  if (values.empty())
    throw std::invalid_argument("quantile_type7: empty sample");
  if (!(prob >= 0.0) || !(prob <= 1.0))
    throw std::invalid_argument("quantile_type7: prob outside [0,1]");
  std::sort(values.begin(), values.end());
  const double idx = prob * (values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
  if (lo + 1 >= values.size()) return values.back();
  const double frac = idx - lo;
  return (1.0 - frac) * values[lo] + frac * values[lo + 1];
}

StudyResult run_study(const StudyConfig& cfg) {
  if (cfg.dims.empty() || cfg.targets.empty() || cfg.sizes.empty() ||
      cfg.methods.empty() || cfg.replications < 1)
    throw std::invalid_argument("run_study: empty configuration");
  const auto t_start = std::chrono::steady_clock::now();
  const int threads = resolve_threads(cfg.threads);

  StudyResult result;
  result.config = cfg;

  const RngStream base(cfg.seed, 0);

  // Targets built once per (kind, d), streams keyed independently of the
  // cell enumeration so configs sharing a seed share targets.
  struct BuiltTarget {
    int d;
    TargetDistribution::Kind kind;
    TargetDistribution target;
  };
  std::vector<BuiltTarget> built;
  for (int d : cfg.dims)
    for (auto kind : cfg.targets) {
      RngStream trng = base.substream(900000 + 10 * d + static_cast<int>(kind));
      built.push_back({d, kind, TargetDistribution::build(kind, d, trng)});
    }
  auto find_target = [&](int d, TargetDistribution::Kind kind)
      -> const TargetDistribution& {
    for (const auto& b : built)
      if (b.d == d && b.kind == kind) return b.target;
    throw std::logic_error("run_study: missing target");
  };

  long cell_index = 0;
  for (int d : cfg.dims) {
    for (auto kind : cfg.targets) {
      const TargetDistribution& target = find_target(d, kind);
      for (int n : cfg.sizes) {
        for (auto rule : cfg.methods) {
          const auto t_cell = std::chrono::steady_clock::now();
          CellResult cell;
          cell.d = d;
          cell.target = kind;
          cell.n = n;
          cell.method = rule;
          cell.n_replications = cfg.replications;

          std::vector<double> rmise(cfg.replications,
                                    std::numeric_limits<double>::quiet_NaN());
          std::vector<double> kl(cfg.replications,
                                 std::numeric_limits<double>::quiet_NaN());
          std::vector<char> failed(cfg.replications, 0);

          const RngStream cell_base = base.substream(cell_index);
          parallel_for(cfg.replications, threads, [&](long rep) {
            try {
              RngStream rep_base = cell_base.substream(rep);
              RngStream rng_sample = rep_base.substream(0);
              RngStream rng_select = rep_base.substream(1);
              RngStream rng_rmise = rep_base.substream(2);
              RngStream rng_kl = rep_base.substream(3);
              const SampleBatch batch = target.sample_batch(n, rng_sample);
              const Bandwidth bw =
                  select_bandwidth(rule, batch, cfg.plugin_draws, rng_select);
              rmise[rep] = rmise_estimate(target, batch, bw.h,
                                          cfg.metric_draws, rng_rmise)
                               .value;
              kl[rep] =
                  kl_estimate(target, batch, bw.h, cfg.metric_draws, rng_kl)
                      .value;
            } catch (const std::exception&) {
              failed[rep] = 1;
            }
          });

          for (int rep = 0; rep < cfg.replications; ++rep) {
            if (failed[rep]) {
              ++cell.n_failures;
              continue;
            }
            cell.rmise_values.push_back(rmise[rep]);
            cell.kl_values.push_back(kl[rep]);
          }
          if (cell.n_failures * 10 > cfg.replications ||
              cell.rmise_values.empty()) {
            cell.rmise_median = cell.rmise_iqr = cell.kl_median = cell.kl_iqr =
                std::numeric_limits<double>::quiet_NaN();
          } else {
            cell.rmise_median = quantile_type7(cell.rmise_values, 0.5);
            cell.rmise_iqr = quantile_type7(cell.rmise_values, 0.75) -
                             quantile_type7(cell.rmise_values, 0.25);
            cell.kl_median = quantile_type7(cell.kl_values, 0.5);
            cell.kl_iqr = quantile_type7(cell.kl_values, 0.75) -
                          quantile_type7(cell.kl_values, 0.25);
          }
          cell.wall_time_s = elapsed_s(t_cell);
          result.cells.push_back(std::move(cell));
          ++cell_index;
        }
      }
    }
  }
  result.total_wall_time_s = elapsed_s(t_start);
  return result;
}

std::string study_csv(const StudyResult& result) {
  std::ostringstream os;
  os << "d,target,n,method,metric,median,iqr,n_replications,n_failures\n";
  for (const auto& c : result.cells) {
    for (int metric = 0; metric < 2; ++metric) {
      os << c.d << ',' << to_string(c.target) << ',' << c.n << ','
         << to_string(c.method) << ',' << (metric == 0 ? "rmise" : "kl") << ','
         << format_double(metric == 0 ? c.rmise_median : c.kl_median) << ','
         << format_double(metric == 0 ? c.rmise_iqr : c.kl_iqr) << ','
         << c.n_replications << ',' << c.n_failures << '\n';
    }
  }
  return os.str();
}

std::string study_manifest_json(const StudyResult& result) {
  nlohmann::ordered_json j;
  j["tool"] = "mig";
  j["version"] = kVersion;
  const auto& cfg = result.config;
  nlohmann::ordered_json jc;
  jc["seed"] = cfg.seed;
  jc["dims"] = cfg.dims;
  {
    std::vector<std::string> t;
    for (auto k : cfg.targets) t.emplace_back(to_string(k));
    jc["targets"] = t;
  }
  jc["sizes"] = cfg.sizes;
  {
    std::vector<std::string> m;
    for (auto r : cfg.methods) m.emplace_back(to_string(r));
    jc["methods"] = m;
  }
  jc["replications"] = cfg.replications;
  jc["metric_draws"] = cfg.metric_draws;
  jc["plugin_draws"] = cfg.plugin_draws;
  jc["threads"] = resolve_threads(cfg.threads);
  j["config"] = jc;
  j["conventions"] = {
      {"quartiles", "linear interpolation (type 7)"},
      {"kl_sign", "KL(f||fhat) = E_f[ln f - ln fhat], nonnegative"},
      {"csv_columns",
       "d,target,n,method,metric,median,iqr,n_replications,n_failures"}};
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : result.cells) {
    cells.push_back({{"d", c.d},
                     {"target", to_string(c.target)},
                     {"n", c.n},
                     {"method", to_string(c.method)},
                     {"n_failures", c.n_failures},
                     {"wall_time_s", c.wall_time_s}});
  }
  j["cells"] = cells;
  j["total_wall_time_s"] = result.total_wall_time_s;
  return j.dump(2) + "\n";
}

}  // namespace mig
