// Command-line front end: analytic, sweep, mc, modelavg, benchmark.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "cli_io.hpp"
#include "jensen/jensen.hpp"

namespace {

using namespace jensen;
using cli::json;

constexpr const char* seed_env = "JENSEN_SEED";

/// Thrown for inputs that are well-formed flags but unusable (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string output;
  std::string format = "csv";
  bool quiet = false;
  std::uint64_t seed = default_seed;
  unsigned threads = 0;
};

void progress(const Common& c, const std::string& msg) {
  if (!c.quiet) std::cerr << msg << '\n';
}

/// Writes to --output or standard output.
void emit(const Common& c, const std::string& text) {
  if (c.output.empty() || c.output == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw UsageError("cannot open output file: " + c.output);
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// "3", "1,2,4" or "1..4".
std::vector<int> parse_k_list(const std::string& spec) {
  std::vector<int> ks;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw UsageError("invalid k list: " + spec);
    }
    if (used != s.size()) throw UsageError("invalid k list: " + spec);
    if (v < 1 || v > BoundOrder::max_value) {
      throw UsageError("k must lie in 1.." + std::to_string(BoundOrder::max_value));
    }
    return v;
  };
  if (const auto dots = spec.find(".."); dots != std::string::npos) {
    const int lo = to_int(spec.substr(0, dots)), hi = to_int(spec.substr(dots + 2));
    if (hi < lo) throw UsageError("empty k range: " + spec);
    for (int k = lo; k <= hi; ++k) ks.push_back(k);
    return ks;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) ks.push_back(to_int(item));
  if (ks.empty()) throw UsageError("empty k list");
  return ks;
}

std::uint64_t env_seed() {
  const char* v = std::getenv(seed_env);
  if (!v || !*v) return default_seed;
  try {
    std::size_t used = 0;
    const auto s = std::stoull(v, &used);
    if (used != std::string(v).size()) throw std::invalid_argument(v);
    return s;
  } catch (const std::exception&) {
    throw UsageError(std::string(seed_env) + " is not an unsigned integer: " + v);
  }
}

// ---------------------------------------------------------------- analytic

struct DistFlags {
  std::string dist;
  double shape = 2.0, scale = 1.0, mu = 0.0, sigma = 1.0, rate = 1.0, mean = 0.0, sd = 1.0;
  std::string samples;

  void add_to(CLI::App* app) {
    app->add_option("--dist", dist, "Distribution")
        ->check(CLI::IsMember({"gamma", "lognormal", "exponential", "normal"}));
    app->add_option("--shape", shape, "Gamma shape a");
    app->add_option("--scale", scale, "Gamma scale theta");
    app->add_option("--mu", mu, "Lognormal mu");
    app->add_option("--sigma", sigma, "Lognormal sigma");
    app->add_option("--rate", rate, "Exponential rate");
    app->add_option("--mean", mean, "Normal mean");
    app->add_option("--sd", sd, "Normal standard deviation");
    app->add_option("--samples", samples, "Sample file (one value per line)");
  }

  MomentProvider provider() const {
    if (!samples.empty()) return MomentProvider::empirical(load_samples(samples));
    if (dist == "gamma") return MomentProvider::gamma(shape, scale);
    if (dist == "lognormal") return MomentProvider::lognormal(mu, sigma);
    if (dist == "exponential") return MomentProvider::exponential(rate);
    if (dist == "normal") return MomentProvider::normal(mean, sd);
    throw UsageError("one of --dist, --samples or --case is required");
  }
};

struct AnalyticFlags {
  DistFlags dist;
  std::string gallery_case;
  std::string k = "1..4";
  std::string method = "log-raw";
};

json analytic_row_json(const std::string& source, const BoundReport& r,
                       const std::optional<double>& struski) {
  json row = cli::report_json(r);
  row["source"] = source;
  row["struski_upper"] = cli::number(struski.value_or(std::nan("")));
  row["struski_upper_infinite"] = struski && std::isinf(*struski);
  return row;
}

int cmd_analytic(const Common& c, const AnalyticFlags& f) {
  const auto ks = parse_k_list(f.k);
  std::vector<BoundReport> rows;
  std::string source;
  std::optional<double> struski;

  if (!f.gallery_case.empty()) {
    GalleryCase gc{};
    if (f.gallery_case == "gamma-log") {
      gc = {GalleryCaseId::gamma_log, f.dist.shape};
    } else if (f.gallery_case == "lognormal-log") {
      gc = {GalleryCaseId::lognormal_log, f.dist.sigma};
    } else if (f.gallery_case == "exp-exponential") {
      gc = {GalleryCaseId::exp_exponential, 0.0};
    } else {
      gc = {GalleryCaseId::exp_normal, 0.0};
    }
    source = f.gallery_case;
    if (gc.id == GalleryCaseId::gamma_log) {
      struski = struski_log_upper(MomentProvider::gamma(gc.param)).upper;
    } else if (gc.id == GalleryCaseId::lognormal_log) {
      struski = struski_log_upper(MomentProvider::lognormal(0.0, gc.param)).upper;
    }
    for (int k : ks) rows.push_back(gallery_bounds(gc, BoundOrder{k}));
  } else {
    const MomentProvider mp = f.dist.provider();
    source = f.dist.samples.empty() ? f.dist.dist : "empirical";
    struski = struski_log_upper(mp).upper;
    for (int k : ks) {
      rows.push_back(f.method == "log-central" ? log_bounds_central(mp, BoundOrder{k})
                                               : log_bounds_raw(mp, BoundOrder{k}));
    }
  }
  progress(c, "analytic: " + source + ", " + std::to_string(rows.size()) + " orders");

  if (c.format == "json") {
    json out = json::array();
    for (const auto& r : rows) out.push_back(analytic_row_json(source, r, struski));
    emit(c, dump(out));
    return 0;
  }
  std::ostringstream os;
  os << "source,k,max_moment,method,lower,upper,exact,width,struski_upper,lower_exists,"
        "upper_exists\n";
  for (const auto& r : rows) {
    os << source << ',' << r.k.value() << ',' << r.k.max_moment() << ',' << to_string(r.method)
       << ',' << cli::csv_number(r.lower) << ',' << cli::csv_number(r.upper) << ','
       << (r.exact ? cli::csv_number(*r.exact) : "") << ',' << cli::csv_number(r.width()) << ','
       << (struski ? cli::csv_number(*struski) : "") << ',' << (r.lower_exists ? 1 : 0) << ','
       << (r.upper_exists ? 1 : 0) << '\n';
  }
  emit(c, os.str());
  return 0;
}

// ------------------------------------------------------------------- sweep

struct SweepFlags {
  std::string which = "lognormal";
  std::optional<double> from, to, step;
  std::vector<double> values;
  std::string k = "2";
  std::optional<double> second;
};

std::vector<double> sweep_grid(const SweepFlags& f) {
  if (!f.values.empty()) return f.values;
  if (!f.from || !f.to || !f.step) throw UsageError("sweep needs --values or --from/--to/--step");
  if (!(*f.step > 0.0)) throw UsageError("--step must be > 0");
  std::vector<double> grid;
  if (*f.to < *f.from) throw UsageError("empty grid: --to is below --from");
  const auto count = static_cast<long>(std::floor((*f.to - *f.from) / *f.step + 1e-9)) + 1;
  for (long i = 0; i < count; ++i) grid.push_back(*f.from + static_cast<double>(i) * *f.step);
  return grid;
}

int cmd_sweep(const Common& c, const SweepFlags& f) {
  const auto grid = sweep_grid(f);
  if (grid.empty()) throw UsageError("empty grid");
  const auto ks = parse_k_list(f.k);
  const SweepCase which = f.which == "gamma" ? SweepCase::gamma : SweepCase::lognormal;
  const auto rows = comparison_sweep(which, grid, ks, f.second);
  progress(c, "sweep: " + std::to_string(rows.size()) + " rows");
  if (c.format == "json") {
    json out = json::array();
    for (const auto& r : rows) {
      out.push_back({{"case", to_string(r.which)},
                     {"param1", cli::number(r.param1)},
                     {"param2", cli::number(r.param2)},
                     {"k", r.k},
                     {"lower", cli::number(r.lower)},
                     {"upper", cli::number(r.upper)},
                     {"upper_infinite", std::isinf(r.upper)},
                     {"exact", cli::number(r.exact)},
                     {"struski_upper", cli::number(r.struski_upper)},
                     {"struski_upper_infinite", std::isinf(r.struski_upper)},
                     {"ours_wins", r.ours_wins}});
    }
    emit(c, dump(out));
    return 0;
  }
  std::ostringstream os;
  write_sweep_csv(os, rows);
  emit(c, os.str());
  return 0;
}

// ---------------------------------------------------------------------- mc

struct McFlags {
  DistFlags dist;
  std::string model_file;
  int model_index = 0;
  int x_index = 0;
  std::string n = "auto";
  int m = 10000;
  int k = 2;
  double target_std = 0.3;
  std::int64_t n_min = 50, n_max = 5'000'000;
  double n_ratio = 2.0;
  int m_probe = 200;
  bool qq_points = false;
};

McConfig make_config(const Common& c, const McFlags& f) {
  McConfig cfg;
  if (f.n != "auto") {
    try {
      std::size_t used = 0;
      cfg.n = std::stoll(f.n, &used);
      if (used != f.n.size()) throw std::invalid_argument(f.n);
    } catch (const std::exception&) {
      throw UsageError("--n must be a positive integer or 'auto'");
    }
  }
  cfg.m = f.m;
  if (f.k < 1 || f.k > BoundOrder::max_value) throw UsageError("--k out of range");
  cfg.k = BoundOrder{f.k};
  cfg.seed = c.seed;
  cfg.target_std = f.target_std;
  cfg.n_grid = {f.n_min, f.n_max, f.n_ratio};
  cfg.m_probe = f.m_probe;
  cfg.threads = c.threads;
  try {
    cfg.validate();
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

template <Sampler S>
json run_mc(const S& sampler, const McConfig& cfg, std::optional<double> reference,
            bool with_points) {
  const McBoundEstimate est = sample_mean_log_bounds(sampler, cfg);
  json out = cli::estimate_json(est, with_points);
  out["reference_log_mean"] = cli::number(reference);
  if (reference) {
    out["bracketed_3se"] = est.lower - 3.0 * est.lower_se - 1e-9 <= *reference &&
                           *reference <= est.upper + 3.0 * est.upper_se + 1e-9;
  } else {
    out["bracketed_3se"] = nullptr;
  }
  return out;
}

int cmd_mc(const Common& c, const McFlags& f) {
  const McConfig cfg = make_config(c, f);
  json out;
  if (!f.model_file.empty()) {
    const auto models = cli::load_models(f.model_file);
    if (f.model_index < 0 || f.model_index >= static_cast<int>(models.size())) {
      throw UsageError("--model-index out of range");
    }
    const auto& rec = models[static_cast<std::size_t>(f.model_index)];
    if (f.x_index < 0 || f.x_index >= static_cast<int>(rec.points.size())) {
      throw UsageError("--x-index out of range (model has " + std::to_string(rec.points.size()) +
                       " points)");
    }
    const auto& x = rec.points[static_cast<std::size_t>(f.x_index)];
    progress(c, "mc: latent model " + std::to_string(f.model_index) + ", point " +
                    std::to_string(f.x_index));
    out = run_mc(importance_ratio_sampler(rec.model, x), cfg, log_marginal_oracle(rec.model, x),
                 f.qq_points);
    out["source"] = "latent-model";
  } else if (!f.dist.samples.empty()) {
    auto values = std::make_shared<const std::vector<double>>(load_samples(f.dist.samples));
    progress(c, "mc: resampling " + std::to_string(values->size()) + " values");
    out = run_mc(ResamplingSampler{values}, cfg, std::log(compensated_mean(*values)),
                 f.qq_points);
    out["source"] = "samples";
  } else if (f.dist.dist == "lognormal") {
    if (!(f.dist.sigma > 0.0)) throw UsageError("--sigma must be > 0");
    out = run_mc(LognormalSampler{f.dist.mu, f.dist.sigma}, cfg,
                 f.dist.mu + 0.5 * f.dist.sigma * f.dist.sigma, f.qq_points);
    out["source"] = "lognormal";
  } else if (f.dist.dist == "gamma") {
    if (!(f.dist.shape > 0.0 && f.dist.scale > 0.0)) throw UsageError("gamma needs shape, scale > 0");
    out = run_mc(GammaSampler{f.dist.shape, f.dist.scale}, cfg,
                 std::log(f.dist.shape * f.dist.scale), f.qq_points);
    out["source"] = "gamma";
  } else if (f.dist.dist == "exponential") {
    if (!(f.dist.rate > 0.0)) throw UsageError("--rate must be > 0");
    out = run_mc(ExponentialSampler{f.dist.rate}, cfg, -std::log(f.dist.rate), f.qq_points);
    out["source"] = "exponential";
  } else {
    throw UsageError("mc needs --dist lognormal|gamma|exponential, --samples or --model-file");
  }
  emit(c, dump(out));
  return 0;
}

// ---------------------------------------------------------------- modelavg

struct ModelAvgFlags {
  int trials = 50;
  double p_true = 0.5, p1 = 0.35, p2 = 0.65;
  bool perfect = false;
  std::string k = "1,2,3";
  int grid = 101;
  std::string sidecar;
};

int cmd_modelavg(const Common& c, const ModelAvgFlags& f) {
  const double p_true = f.perfect ? f.p2 : f.p_true;
  const auto ks = parse_k_list(f.k);
  if (f.grid < 2) throw UsageError("--grid must be >= 2");
  const auto family = binomial_family(f.trials, p_true, f.p1, f.p2);
  const auto rho = uniform_rho_grid(f.grid);
  const auto sweep = model_averaging_sweep(family, rho, ks);
  progress(c, "modelavg: " + std::to_string(sweep.points.size()) + " grid points");

  json side;
  side["instance"] = {{"trials", f.trials},
                      {"p_true", p_true},
                      {"p1", f.p1},
                      {"p2", f.p2},
                      {"perfect", f.perfect},
                      {"rho_is_weight_on", "p2"}};
  side["grid_size"] = f.grid;
  side["argmin_ce"] = {{"index", sweep.argmin_ce}, {"rho", rho[sweep.argmin_ce]}};
  side["argmin_expected_log_loss"] = {{"index", sweep.argmin_log_loss},
                                      {"rho", rho[sweep.argmin_log_loss]}};
  json curves = json::array();
  for (std::size_t b = 0; b < ks.size(); ++b) {
    const auto idx = sweep.argmin_bounds[b];
    curves.push_back({{"column", "bound_k" + std::to_string(ks[b])},
                      {"k", ks[b]},
                      {"max_moment", 2 * ks[b] - 1},
                      {"argmin_index", idx},
                      {"argmin_rho", rho[idx]},
                      {"min_value", sweep.points[idx].bounds[b]}});
  }
  side["bounds"] = std::move(curves);

  if (c.format == "json") {
    json out = side;
    json pts = json::array();
    for (const auto& p : sweep.points) {
      json bounds = json::array();
      for (double b : p.bounds) bounds.push_back(cli::number(b));
      pts.push_back({{"rho", p.rho}, {"ce", p.ce}, {"bounds", std::move(bounds)}});
    }
    out["points"] = std::move(pts);
    emit(c, dump(out));
    return 0;
  }
  std::ostringstream os;
  cli::write_modelavg_csv(os, sweep);
  emit(c, os.str());
  std::string sidecar = f.sidecar;
  if (sidecar.empty() && !c.output.empty() && c.output != "-") sidecar = c.output + ".json";
  if (!sidecar.empty()) {
    std::ofstream out(sidecar, std::ios::binary);
    if (!out) throw UsageError("cannot open sidecar file: " + sidecar);
    out << dump(side);
  }
  return 0;
}

// --------------------------------------------------------------- benchmark

struct BenchmarkFlags {
  int count = 100;
  int k = 2;
  int m = 10000;
  std::string n = "auto";
  double target_std = 0.3;
  double noise_var = 0.3;
  std::string export_path;
  bool qq_points = false;
};

int cmd_benchmark(const Common& c, const BenchmarkFlags& f) {
  if (f.count < 1) throw UsageError("--count must be >= 1");
  McFlags mf;
  mf.n = f.n;
  mf.m = f.m;
  mf.k = f.k;
  mf.target_std = f.target_std;
  const McConfig base = make_config(c, mf);
  const auto suite = make_benchmark_suite(c.seed, f.count, f.noise_var);

  if (!f.export_path.empty()) {
    json models = json::array();
    for (const auto& p : suite) models.push_back(cli::model_json(p.model, {p.x}, p.variance_multiplier));
    std::ofstream out(f.export_path, std::ios::binary);
    if (!out) throw UsageError("cannot open export file: " + f.export_path);
    out << dump(json{{"seed", c.seed}, {"models", std::move(models)}});
  }

  json points = json::array();
  int bracketed = 0;
  CompensatedSum width, struski;
  CompensatedSum qq_ok, qq_fail;
  int n_fail = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& pair = suite[i];
    McConfig cfg = base;
    cfg.seed = mix64(c.seed ^ mix64(i + 1));
    const double oracle = log_marginal_oracle(pair.model, pair.x);
    const auto est = sample_mean_log_bounds(importance_ratio_sampler(pair.model, pair.x), cfg);
    const bool ok = est.lower - 3.0 * est.lower_se - 1e-9 <= oracle &&
                    oracle <= est.upper + 3.0 * est.upper_se + 1e-9;
    bracketed += ok ? 1 : 0;
    width += est.width();
    struski += est.struski_gap_upper;
    (ok ? qq_ok : qq_fail) += est.diagnostics.qq_correlation;
    n_fail += ok ? 0 : 1;
    json pt;
    pt["index"] = i;
    pt["latent_dim"] = pair.model.latent_dim();
    pt["data_dim"] = pair.model.data_dim();
    pt["variance_multiplier"] = pair.variance_multiplier;
    pt["oracle"] = oracle;
    pt["bracketed"] = ok;
    pt["width"] = cli::number(est.width());
    pt["struski_width"] = cli::number(est.struski_gap_upper);
    pt["estimate"] = cli::estimate_json(est, f.qq_points);
    points.push_back(std::move(pt));
    progress(c, "benchmark: pair " + std::to_string(i + 1) + "/" + std::to_string(suite.size()) +
                    " n=" + std::to_string(est.n_used) + (ok ? " bracketed" : " missed"));
  }
  const double count = static_cast<double>(suite.size());
  const int n_ok = bracketed;
  json out;
  out["count"] = suite.size();
  out["seed"] = c.seed;
  out["k"] = f.k;
  out["m"] = f.m;
  out["n"] = f.n;
  out["target_std"] = f.target_std;
  out["bracket_rate"] = bracketed / count;
  out["bracket_count"] = bracketed;
  out["mean_width"] = cli::number(width.value() / count);
  out["mean_struski_width"] = cli::number(struski.value() / count);
  out["mean_qq_correlation_bracketed"] = n_ok ? cli::number(qq_ok.value() / n_ok) : json(nullptr);
  out["mean_qq_correlation_missed"] = n_fail ? cli::number(qq_fail.value() / n_fail) : json(nullptr);
  out["points"] = std::move(points);
  emit(c, dump(out));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Higher-order bounds on Jensen's gap, Monte-Carlo log-likelihood intervals and "
               "model-averaging risk bounds"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file (flags override it)");

  Common common;
  app.add_option("-o,--output", common.output, "Output file (default: standard output)");
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("-q,--quiet", common.quiet, "Suppress progress lines");
  std::optional<std::uint64_t> seed_flag;
  app.add_option("--seed", seed_flag,
                 std::string("Seed (default: $") + seed_env + " or " + std::to_string(default_seed) +
                     ")");
  app.add_option("--threads", common.threads, "Worker threads (0: all cores)");
  app.fallthrough();

  AnalyticFlags af;
  auto* analytic = app.add_subcommand("analytic", "Order-k bounds for an analytic case");
  af.dist.add_to(analytic);
  analytic->add_option("--case", af.gallery_case, "Closed-form gallery case")
      ->check(CLI::IsMember({"gamma-log", "lognormal-log", "exp-exponential", "exp-normal"}));
  analytic->add_option("--k", af.k, "Order(s): 3, 1,2,4 or 1..4");
  analytic->add_option("--method", af.method, "Log-bound form for --dist/--samples")
      ->check(CLI::IsMember({"log-raw", "log-central"}));

  SweepFlags sf;
  auto* sweep = app.add_subcommand("sweep", "Our upper bound against the Struski bound on a grid");
  sweep->add_option("--case", sf.which, "lognormal (grid over sigma) or gamma (grid over shape)")
      ->check(CLI::IsMember({"lognormal", "gamma"}));
  sweep->add_option("--from", sf.from, "First grid value");
  sweep->add_option("--to", sf.to, "Last grid value (inclusive)");
  sweep->add_option("--step", sf.step, "Grid step");
  sweep->add_option("--values", sf.values, "Explicit grid values")->delimiter(',');
  sweep->add_option("--k", sf.k, "Order(s)");
  sweep->add_option("--second", sf.second, "mu for lognormal, scale for gamma");

  McFlags mf;
  auto* mc = app.add_subcommand("mc", "n-sample-mean bounds on log E X");
  mf.dist.add_to(mc);
  mc->add_option("--model-file", mf.model_file, "Latent model JSON");
  mc->add_option("--model-index", mf.model_index, "Model within the file");
  mc->add_option("--x-index", mf.x_index, "Data point of the model");
  mc->add_option("--n", mf.n, "Inner sample size or 'auto'");
  mc->add_option("--m", mf.m, "Replicates");
  mc->add_option("--k", mf.k, "Order");
  mc->add_option("--target-std", mf.target_std, "Grid-search target std of log mean");
  mc->add_option("--n-min", mf.n_min, "Grid start");
  mc->add_option("--n-max", mf.n_max, "Grid cap");
  mc->add_option("--n-ratio", mf.n_ratio, "Grid ratio");
  mc->add_option("--m-probe", mf.m_probe, "Replicates per grid point");
  mc->add_flag("--qq-points", mf.qq_points, "Include Q-Q points");

  ModelAvgFlags mof;
  auto* modelavg = app.add_subcommand("modelavg", "Binomial model-averaging risk and bounds");
  modelavg->add_option("--trials", mof.trials, "Binomial N");
  modelavg->add_option("--p-true", mof.p_true, "Data success probability");
  modelavg->add_option("--p1", mof.p1, "First model");
  modelavg->add_option("--p2", mof.p2, "Second model (rho is its weight)");
  modelavg->add_flag("--perfect", mof.perfect, "Set p-true to p2");
  modelavg->add_option("--k", mof.k, "Order(s)");
  modelavg->add_option("--grid", mof.grid, "Number of rho values in [0, 1]");
  modelavg->add_option("--sidecar", mof.sidecar, "Sidecar JSON path (default: OUTPUT.json)");

  BenchmarkFlags bf;
  auto* benchmark = app.add_subcommand("benchmark", "Toy latent-model suite against its oracle");
  benchmark->add_option("--count", bf.count, "Number of (model, x) pairs");
  benchmark->add_option("--k", bf.k, "Order");
  benchmark->add_option("--m", bf.m, "Replicates");
  benchmark->add_option("--n", bf.n, "Inner sample size or 'auto'");
  benchmark->add_option("--target-std", bf.target_std, "Grid-search target std");
  benchmark->add_option("--noise-var", bf.noise_var, "Decoder noise variance");
  benchmark->add_option("--export", bf.export_path, "Write the suite as model JSON");
  benchmark->add_flag("--qq-points", bf.qq_points, "Include Q-Q points per pair");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    common.seed = seed_flag ? *seed_flag : env_seed();
    if (*analytic) return cmd_analytic(common, af);
    if (*sweep) return cmd_sweep(common, sf);
    if (*mc) return cmd_mc(common, mf);
    if (*modelavg) return cmd_modelavg(common, mof);
    if (*benchmark) return cmd_benchmark(common, bf);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\nRun with --help for usage.\n";
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n\nRun with --help for usage.\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
