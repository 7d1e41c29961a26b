// Command-line interface for the MIG toolkit: sampling, density
// evaluation, parameter fitting, distribution-function estimation, kernel
// smoothing with bandwidth selection, Gaussian-approximation diagnostics,
// and the simulation-study driver.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mig/cdf.hpp"
#include "mig/csv.hpp"
#include "mig/gaussian_approx.hpp"
#include "mig/kde.hpp"
#include "mig/mig_distribution.hpp"
#include "mig/parallel.hpp"
#include "mig/sampler.hpp"
#include "mig/study.hpp"
#include "mig/targets.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace mig;

constexpr const char* kVersion = "0.1.0";

json params_to_json(const MigParams& p) {
  const Eigen::Index d = p.dim();
  json j;
  j["d"] = d;
  j["beta"] = std::vector<double>(p.beta().data(), p.beta().data() + d);
  j["xi"] = std::vector<double>(p.xi().data(), p.xi().data() + d);
  std::vector<double> omega;
  omega.reserve(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j2 = 0; j2 < d; ++j2)
      omega.push_back(p.omega().entries()(i, j2));
  j["omega"] = omega;
  return j;
}

Vector to_vector(const std::vector<double>& v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out(i) = v[i];
  return out;
}

Matrix row_major_matrix(const Vector& flat, Eigen::Index d) {
  if (flat.size() != d * d)
    throw std::invalid_argument("omega must hold d*d row-major entries");
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = flat(i * d + j);
  return m;
}

MigParams params_from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open params file: " + path);
  json j = json::parse(is);
  const Vector beta = to_vector(j.at("beta").get<std::vector<double>>());
  const Vector xi = to_vector(j.at("xi").get<std::vector<double>>());
  const Vector omega = to_vector(j.at("omega").get<std::vector<double>>());
  if (j.contains("d") && j["d"].get<Eigen::Index>() != beta.size())
    throw std::runtime_error("params file: d does not match beta length");
  return MigParams(HalfSpace(beta), xi,
                   SpdMatrix(row_major_matrix(omega, beta.size())));
}

// Shared option block: parameters either from --params or from the
// --beta/--xi/--omega triple.
struct ParamsOpts {
  std::string params_file;
  std::string beta, xi, omega;

  MigParams resolve() const {
    if (!params_file.empty()) return params_from_json_file(params_file);
    if (beta.empty() || xi.empty() || omega.empty())
      throw CLI::ValidationError(
          "parameters", "need --params or all of --beta/--xi/--omega");
    const Vector b = parse_vector(beta);
    const Vector x = parse_vector(xi);
    const Vector o = parse_vector(omega);
    return MigParams(HalfSpace(b), x, SpdMatrix(row_major_matrix(o, b.size())));
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--params", params_file,
                    "JSON file with beta, xi, omega (row-major)");
    cmd->add_option("--beta", beta, "direction vector, comma-separated");
    cmd->add_option("--xi", xi, "mean vector, comma-separated");
    cmd->add_option("--omega", omega, "scale matrix, row-major comma-separated");
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << text;
}

std::vector<std::string> point_header(Eigen::Index d) {
  std::vector<std::string> h;
  for (Eigen::Index i = 0; i < d; ++i) h.push_back("x" + std::to_string(i + 1));
  return h;
}

Bandwidth::Method select_from_name(const std::string& name) {
  if (name == "amise-full") return Bandwidth::Method::amise_full;
  if (name == "amise-iso") return Bandwidth::Method::amise_iso;
  if (name == "lcv-full") return Bandwidth::Method::lcv_full;
  if (name == "lcv-iso") return Bandwidth::Method::lcv_iso;
  if (name == "lscv") return Bandwidth::Method::lscv;
  if (name == "normal-ref") return Bandwidth::Method::normal_ref;
  throw CLI::ValidationError("--select", "unknown selector: " + name);
}

PluginModel::Kind plugin_from_name(const std::string& name) {
  if (name == "mig-mle") return PluginModel::Kind::mig_mle;
  if (name == "mig-mom") return PluginModel::Kind::mig_moments;
  if (name == "tgauss") return PluginModel::Kind::trunc_gaussian;
  throw CLI::ValidationError("--plugin", "unknown plug-in: " + name);
}

template <typename T>
std::vector<T> split_as(const std::string& text,
                        T (*convert)(const std::string&)) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(convert(cell));
  if (out.empty()) throw std::invalid_argument("empty list: " + text);
  return out;
}

int run_sample(const ParamsOpts& popts, long n, std::uint64_t seed,
               std::uint64_t stream, const std::string& out, bool header) {
  const MigParams p = popts.resolve();
  RngStream rng(seed, stream);
  const SampleBatch batch = mig_sample(p, n, rng);
  std::ostringstream os;
  write_csv(os, batch.data(),
            header ? point_header(p.dim()) : std::vector<std::string>{});
  write_text(out, os.str());
  return 0;
}

int run_density(const ParamsOpts& popts, const std::string& at,
                const std::string& out, bool log_scale) {
  const MigParams p = popts.resolve();
  const Matrix points = read_csv_file(at);
  if (points.cols() != p.dim())
    throw std::runtime_error("points dimension does not match parameters");
  Matrix result(points.rows(), points.cols() + 1);
  result.leftCols(points.cols()) = points;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const double ld = mig_log_density(p, points.row(i).transpose());
    result(i, points.cols()) = log_scale ? ld : std::exp(ld);
  }
  std::ostringstream os;
  auto head = point_header(p.dim());
  head.push_back(log_scale ? "log_density" : "density");
  write_csv(os, result, head);
  write_text(out, os.str());
  return 0;
}

int run_fit(const std::string& data, const std::string& beta,
            const std::string& method, const std::string& out) {
  const Matrix points = read_csv_file(data);
  const Vector b = parse_vector(beta);
  SampleBatch batch(points, HalfSpace(b));
  const MigParams fit =
      method == "mom" ? mig_method_of_moments(batch) : mig_mle(batch);
  json j = params_to_json(fit);
  j["method"] = method == "mom" ? "mom" : "mle";
  j["n"] = batch.size();
  write_text(out, j.dump(2) + "\n");
  return 0;
}

int run_cdf(const ParamsOpts& popts, const std::string& q_text,
            const std::string& method, long draws, std::uint64_t seed,
            const std::string& out) {
  const MigParams p = popts.resolve();
  const Vector q = parse_vector(q_text);
  RngStream rng(seed, 0);
  McEstimate est;
  if (method == "sov")
    est = cdf_sov(p, q, draws, rng);
  else if (method == "mc")
    est = cdf_plain_mc(p, q, draws, rng);
  else
    throw CLI::ValidationError("--method", "must be mc or sov");
  json j;
  j["value"] = est.value;
  j["std_error"] = est.std_error;
  j["draws"] = est.draws;
  j["method"] = method;
  write_text(out, j.dump(2) + "\n");
  return 0;
}

int run_kde(const std::string& data, const std::string& beta,
            const std::string& select, const std::string& plugin_name,
            const std::string& eval, const std::string& out, long plugin_draws,
            std::uint64_t seed, int threads) {
  const auto t0 = std::chrono::steady_clock::now();
  const Matrix points = read_csv_file(data);
  const Vector b = parse_vector(beta);
  SampleBatch batch(points, HalfSpace(b));
  const int nthreads = resolve_threads(threads);
  RngStream rng(seed, 0);

  const Bandwidth::Method method = select_from_name(select);
  const PluginModel::Kind kind = plugin_from_name(plugin_name);

  Bandwidth bw = [&]() -> Bandwidth {
    switch (method) {
      case Bandwidth::Method::normal_ref:
        return normal_reference_bandwidth(batch);
      case Bandwidth::Method::lcv_full:
        return optimize_bandwidth(batch, method, nullptr, nthreads);
      case Bandwidth::Method::amise_iso:
      case Bandwidth::Method::lcv_iso:
        // Spherical transformation pipeline around the isotropic core.
        return spherical_bandwidth_pipeline(batch, method, kind,
                                            static_cast<int>(plugin_draws),
                                            rng, false, nthreads);
      case Bandwidth::Method::amise_full:
      case Bandwidth::Method::lscv: {
        PluginModel plugin(kind, batch, static_cast<int>(plugin_draws), rng);
        return optimize_bandwidth(batch, method, &plugin, nthreads);
      }
    }
    throw std::logic_error("unreachable");
  }();

  const Matrix grid = read_csv_file(eval);
  if (grid.cols() != batch.dim())
    throw std::runtime_error("eval grid dimension does not match data");
  const Vector density = kde_eval_many(batch, bw.h, grid, nthreads);
  Matrix result(grid.rows(), grid.cols() + 1);
  result.leftCols(grid.cols()) = grid;
  result.col(grid.cols()) = density;
  std::ostringstream os;
  auto head = point_header(batch.dim());
  head.push_back("density");
  write_csv(os, result, head);
  write_text(out, os.str());

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  json meta;
  meta["method"] = to_string(bw.method);
  meta["plugin"] = plugin_name;
  meta["d"] = batch.dim();
  meta["n"] = batch.size();
  std::vector<double> h;
  for (Eigen::Index i = 0; i < batch.dim(); ++i)
    for (Eigen::Index j = 0; j < batch.dim(); ++j)
      h.push_back(bw.h.entries()(i, j));
  meta["h"] = h;
  meta["criterion_value"] = bw.criterion_value;
  meta["seed"] = seed;
  meta["wall_time_s"] = wall;
  if (!out.empty() && out != "-")
    write_text(out + ".meta.json", meta.dump(2) + "\n");
  else
    std::cout << meta.dump(2) << "\n";
  return 0;
}

int run_llt_check(int dim, const std::string& beta, const std::string& xi0,
                  const std::string& omega0, double mu_min, double mu_max,
                  int points, const std::string& out) {
  std::vector<double> mu_grid;
  for (double mu = mu_min; mu <= mu_max * 1.0000001; mu *= 2.0)
    mu_grid.push_back(mu);
  ErrorCurve curve;
  if (dim == 1) {
    curve = bulk_sup_errors_univariate(mu_grid,
                                       BulkSpec{1.0, points > 0 ? points : 10000});
  } else if (dim == 2) {
    const Vector b = parse_vector(beta);
    const Vector x0 = parse_vector(xi0);
    const Vector o0 = parse_vector(omega0);
    curve = bulk_sup_errors_bivariate(b, x0,
                                      SpdMatrix(row_major_matrix(o0, 2)),
                                      mu_grid, points > 0 ? points : 100000);
  } else {
    throw CLI::ValidationError("--dim", "must be 1 or 2");
  }
  Matrix table(curve.mu_values.size(), 4);
  for (std::size_t i = 0; i < curve.mu_values.size(); ++i) {
    table(i, 0) = curve.mu_values[i];
    for (int n = 0; n < 3; ++n) table(i, n + 1) = curve.e_n(n, i);
  }
  std::ostringstream os;
  write_csv(os, table, {"mu", "E1", "E2", "E3"});
  write_text(out, os.str());
  json j;
  j["dim"] = dim;
  j["mu_min"] = mu_grid.front();
  j["mu_max"] = mu_grid.back();
  j["slopes"] = {{"E1", curve.slopes[0]},
                 {"E2", curve.slopes[1]},
                 {"E3", curve.slopes[2]}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_study_cmd(const std::string& dims, const std::string& targets,
                  const std::string& sizes, const std::string& methods,
                  int replications, std::uint64_t seed, long metric_draws,
                  long plugin_draws, int threads, const std::string& out) {
  StudyConfig cfg;
  cfg.dims = split_as<int>(dims, +[](const std::string& s) { return std::stoi(s); });
  cfg.targets = split_as<TargetDistribution::Kind>(
      targets, +[](const std::string& s) { return target_kind_from_name(s); });
  cfg.sizes = split_as<int>(sizes, +[](const std::string& s) { return std::stoi(s); });
  cfg.methods = split_as<BandwidthRule>(
      methods, +[](const std::string& s) { return bandwidth_rule_from_name(s); });
  cfg.replications = replications;
  cfg.seed = seed;
  cfg.metric_draws = metric_draws;
  cfg.plugin_draws = static_cast<int>(plugin_draws);
  cfg.threads = threads;

  const StudyResult result = run_study(cfg);
  write_text(out, study_csv(result));
  const std::string manifest = study_manifest_json(result);
  if (!out.empty() && out != "-")
    write_text(out + ".manifest.json", manifest);
  else
    std::cout << manifest;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIG distributions on half-spaces: sampling, CDF, kernel "
               "smoothing, and Gaussian-approximation diagnostics"};
  app.set_version_flag("--version", std::string("mig ") + kVersion);
  app.require_subcommand(1);
  int global_threads = 0;
  app.add_option("--threads", global_threads,
                 "worker threads for parallel subcommands "
                 "(default: available parallelism; MIG_THREADS overrides)");

  // ---- sample ----
  auto* sample = app.add_subcommand("sample", "draw from a MIG distribution");
  ParamsOpts sample_params;
  sample_params.attach(sample);
  long sample_n = 1000;
  std::uint64_t sample_seed = 0, sample_stream = 0;
  std::string sample_out = "-";
  bool sample_header = false;
  sample->add_option("--n", sample_n, "number of draws")->check(CLI::PositiveNumber);
  sample->add_option("--seed", sample_seed, "RNG seed");
  sample->add_option("--stream", sample_stream, "RNG stream id");
  sample->add_option("-o,--out", sample_out, "output CSV (default stdout)");
  sample->add_flag("--header", sample_header, "write a CSV header line");

  // ---- density ----
  auto* density = app.add_subcommand("density", "evaluate the MIG density");
  ParamsOpts density_params;
  density_params.attach(density);
  std::string density_at, density_out = "-";
  bool density_log = false;
  density->add_option("--at", density_at, "CSV of evaluation points")->required();
  density->add_option("-o,--out", density_out, "output CSV (default stdout)");
  density->add_flag("--log", density_log, "emit log density");

  // ---- fit ----
  auto* fit = app.add_subcommand("fit", "estimate (xi, Omega) with beta known");
  std::string fit_data, fit_beta, fit_method = "mle", fit_out = "-";
  fit->add_option("--data", fit_data, "CSV of observations")->required();
  fit->add_option("--beta", fit_beta, "direction vector")->required();
  fit->add_option("--method", fit_method, "mle or mom")
      ->check(CLI::IsMember({"mle", "mom"}));
  fit->add_option("-o,--out", fit_out, "output JSON (default stdout)");

  // ---- cdf ----
  auto* cdf = app.add_subcommand("cdf", "estimate Pr(X <= q)");
  ParamsOpts cdf_params;
  cdf_params.attach(cdf);
  std::string cdf_q, cdf_method = "mc", cdf_out = "-";
  long cdf_draws = 100000;
  std::uint64_t cdf_seed = 0;
  cdf->add_option("--q", cdf_q, "upper corner, comma-separated")->required();
  cdf->add_option("--method", cdf_method, "mc (default) or sov")
      ->check(CLI::IsMember({"mc", "sov"}));
  cdf->add_option("--draws", cdf_draws, "Monte Carlo draws")
      ->check(CLI::PositiveNumber);
  cdf->add_option("--seed", cdf_seed, "RNG seed");
  cdf->add_option("-o,--out", cdf_out, "output JSON (default stdout)");

  // ---- kde ----
  auto* kde = app.add_subcommand(
      "kde", "kernel density estimate with bandwidth selection");
  std::string kde_data, kde_beta, kde_select = "normal-ref";
  std::string kde_plugin = "mig-mle", kde_eval_file, kde_out;
  long kde_plugin_draws = 10000;
  std::uint64_t kde_seed = 0;
  int kde_threads = 0;
  kde->add_option("--data", kde_data, "CSV of observations")->required();
  kde->add_option("--beta", kde_beta, "direction vector")->required();
  kde->add_option("--select", kde_select,
                  "bandwidth selector: amise-full|amise-iso|lcv-full|lcv-iso|"
                  "lscv|normal-ref")
      ->check(CLI::IsMember({"amise-full", "amise-iso", "lcv-full", "lcv-iso",
                             "lscv", "normal-ref"}));
  kde->add_option("--plugin", kde_plugin, "plug-in: mig-mle|mig-mom|tgauss")
      ->check(CLI::IsMember({"mig-mle", "mig-mom", "tgauss"}));
  kde->add_option("--eval", kde_eval_file, "CSV grid of evaluation points")
      ->required();
  kde->add_option("-o,--out", kde_out, "output CSV; sidecar <out>.meta.json")
      ->required();
  kde->add_option("--plugin-draws", kde_plugin_draws,
                  "Monte Carlo draws for plug-in integrals")
      ->check(CLI::PositiveNumber);
  kde->add_option("--seed", kde_seed, "RNG seed");
  kde->add_option("--threads", kde_threads,
                  "worker threads (default: available parallelism)");

  // ---- llt-check ----
  auto* llt = app.add_subcommand(
      "llt-check", "bulk suprema of the Gaussian-approximation error");
  int llt_dim = 1;
  std::string llt_beta = "0.5,0.5", llt_xi0 = "1,1", llt_omega0 = "2,1,1,2";
  std::string llt_out = "-";
  double llt_mu_min = 4.0, llt_mu_max = 1024.0;
  int llt_points = 0;
  llt->add_option("--dim", llt_dim, "1 or 2")->check(CLI::IsMember({1, 2}));
  llt->add_option("--beta", llt_beta, "direction (dim 2)");
  llt->add_option("--xi0", llt_xi0, "base mean (dim 2)");
  llt->add_option("--omega0", llt_omega0, "base scale, row-major (dim 2)");
  llt->add_option("--mu-min", llt_mu_min, "smallest mu (doubled up to mu-max)");
  llt->add_option("--mu-max", llt_mu_max, "largest mu");
  llt->add_option("--points", llt_points, "grid/sample points per mu");
  llt->add_option("--out", llt_out, "CSV output (mu, E1, E2, E3)");

  // ---- study ----
  auto* study = app.add_subcommand("study", "simulation-study driver");
  std::string study_dims = "2", study_targets = "F4", study_sizes = "250";
  std::string study_methods = "B6", study_out;
  int study_reps = 100, study_threads = 0;
  long study_metric_draws = 10000, study_plugin_draws = 10000;
  std::uint64_t study_seed = 0;
  study->add_option("--dims", study_dims, "dimensions, e.g. 2,3,4");
  study->add_option("--targets", study_targets, "targets, e.g. F1,F4");
  study->add_option("--sizes", study_sizes, "sample sizes, e.g. 250,500");
  study->add_option("--methods", study_methods, "bandwidth rules, e.g. B1,B6");
  study->add_option("--replications", study_reps, "replications per cell")
      ->check(CLI::PositiveNumber);
  study->add_option("--seed", study_seed, "study seed");
  study->add_option("--metric-draws", study_metric_draws,
                    "Monte Carlo draws per metric");
  study->add_option("--plugin-draws", study_plugin_draws,
                    "Monte Carlo draws for plug-in integrals");
  study->add_option("--threads", study_threads,
                    "worker threads (default: available parallelism)");
  study->add_option("-o,--out", study_out,
                    "output CSV; manifest at <out>.manifest.json")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << "mig " << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (sample->parsed())
      return run_sample(sample_params, sample_n, sample_seed, sample_stream,
                        sample_out, sample_header);
    if (density->parsed())
      return run_density(density_params, density_at, density_out, density_log);
    if (fit->parsed()) return run_fit(fit_data, fit_beta, fit_method, fit_out);
    if (cdf->parsed())
      return run_cdf(cdf_params, cdf_q, cdf_method, cdf_draws, cdf_seed,
                     cdf_out);
    if (kde->parsed())
      return run_kde(kde_data, kde_beta, kde_select, kde_plugin, kde_eval_file,
                     kde_out, kde_plugin_draws, kde_seed,
                     kde_threads > 0 ? kde_threads : global_threads);
    if (llt->parsed())
      return run_llt_check(llt_dim, llt_beta, llt_xi0, llt_omega0, llt_mu_min,
                           llt_mu_max, llt_points, llt_out);
    if (study->parsed())
      return run_study_cmd(study_dims, study_targets, study_sizes,
                           study_methods, study_reps, study_seed,
                           study_metric_draws, study_plugin_draws,
                           study_threads > 0 ? study_threads : global_threads,
                           study_out);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
