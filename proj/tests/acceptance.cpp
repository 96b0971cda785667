// Acceptance checks: one PASS/FAIL line per criterion.
//
// usage: acceptance --cli PATH [--workdir DIR] [--allow-fail N]...
//
// Criteria 6, 7 and 9 run the command-line tool; the rest call the library.
// A criterion listed with --allow-fail still prints FAIL but does not change
// the exit status.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jensen/jensen.hpp"

namespace {

using namespace jensen;
using json = nlohmann::json;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Context {
  std::string cli;
  std::string workdir = ".";
  json benchmark;
  double benchmark_seconds = 0.0;
};

int run(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  return rc;
}

// 1 ----------------------------------------------------------------------
Outcome exact_gaps(Context&) {
  const auto ee = exp_exponential_bounds(BoundOrder{3});
  const auto en = exp_normal_bounds(BoundOrder{3});
  const double e1 = *ee.exact, e2 = *en.exact;
  const bool ok = std::abs(e1 - (2.0 - std::sqrt(std::numbers::e))) < 1e-15 &&
                  std::abs(e2 - (std::sqrt(std::numbers::e) - 1.0)) < 1e-15 &&
                  std::round(e1 * 1000.0) == 351.0 && std::round(e2 * 1000.0) == 649.0;
  return {ok, "exp-exponential exact " + fmt(e1, 8) + ", exp-normal exact " + fmt(e2, 8)};
}

// 2 ----------------------------------------------------------------------
Outcome bracket_suite(Context&) {
  int cases = 0;
  double worst = INFINITY;
  std::string worst_case;
  auto check = [&](const BoundReport& r, const std::string& name) {
    ++cases;
    const double lo_slack = *r.exact - r.lower;
    const double hi_slack = r.upper_exists ? r.upper - *r.exact : INFINITY;
    const double s = std::min(lo_slack, hi_slack);
    if (s < worst) {
      worst = s;
      worst_case = name;
    }
  };
  for (int k = 1; k <= 4; ++k) {
    const BoundOrder bk{k};
    for (double a : {0.5, 1.0, 2.0, 3.5, 6.0, 10.0, 30.0, 100.0}) {
      if (a > 2 * k - 1) check(gamma_log_bounds(a, bk), "gamma a=" + fmt(a) + " k=" + fmt(k));
    }
    for (double s : {0.01, 0.1, 0.5, 1.0, 1.5}) {
      check(lognormal_log_bounds(s, bk), "lognormal sigma=" + fmt(s) + " k=" + fmt(k));
    }
    check(exp_exponential_bounds(bk), "exp-exponential k=" + fmt(k));
    check(exp_normal_bounds(bk), "exp-normal k=" + fmt(k));
  }
  return {worst >= -1e-9,
          std::to_string(cases) + " cases, minimum slack " + fmt(worst) + " (" + worst_case + ")"};
}

// 3 ----------------------------------------------------------------------
Outcome tightening(Context&) {
  const auto n2 = exp_normal_bounds(BoundOrder{2}), n6 = exp_normal_bounds(BoundOrder{6});
  const double gap2 = n2.upper - *n2.exact, gap6 = n6.upper - *n6.exact;
  const double w2 = exp_exponential_bounds(BoundOrder{2}).width();
  const double w4 = exp_exponential_bounds(BoundOrder{4}).width();
  const bool ok = gap2 - gap6 >= 1e-3 && w2 - w4 >= 1e-3;
  return {ok, "exp-normal upper excess k=2 " + fmt(gap2) + " vs k=6 " + fmt(gap6) +
                  "; exp-exponential width k=2 " + fmt(w2) + " vs k=4 " + fmt(w4)};
}

// 4 ----------------------------------------------------------------------
Outcome identities(Context&) {
  double harmonic = 0.0, cov = 0.0, equiv = 0.0, scale = 0.0;
  for (int k = 1; k <= BoundOrder::max_value; ++k) {
    harmonic = std::max(harmonic, std::abs(harmonic_minus_b_identity(BoundOrder{k})));
  }
  const std::vector<MomentProvider> providers = {
      MomentProvider::gamma(12.0, 1.0), MomentProvider::gamma(25.0, 0.2),
      MomentProvider::lognormal(0.3, 0.7), MomentProvider::lognormal(-1.0, 0.3),
      MomentProvider::exponential(1.0), MomentProvider::exponential(4.0)};
  for (const auto& mp : providers) {
    const auto cb = simple_cov_bounds(FunctionSpec::neg_log(), mp);
    for (const auto& r : {log_bounds_raw(mp, BoundOrder{1}), log_bounds_central(mp, BoundOrder{1})}) {
      if (r.upper_exists != cb.upper_exists) {
        cov = INFINITY;
      } else if (r.upper_exists) {
        cov = std::max(cov, std::abs(cb.upper - r.upper));
      }
    }
    for (int k = 1; k <= 5; ++k) {
      const auto raw = log_bounds_raw(mp, BoundOrder{k});
      const auto cen = log_bounds_central(mp, BoundOrder{k});
      equiv = std::max(equiv, std::abs(raw.lower - cen.lower) / std::max(1.0, std::abs(cen.lower)));
      if (raw.upper_exists) {
        equiv = std::max(equiv, std::abs(raw.upper - cen.upper) / std::max(1.0, std::abs(cen.upper)));
      }
      for (double c : {1e-3, 0.5, 40.0}) {
        const auto sc = log_bounds_raw(mp.scaled(c), BoundOrder{k});
        scale = std::max(scale, std::abs(sc.lower - raw.lower) / std::max(1.0, std::abs(raw.lower)));
        if (raw.upper_exists) {
          scale = std::max(scale, std::abs(sc.upper - raw.upper) / std::max(1.0, std::abs(raw.upper)));
        }
      }
    }
  }
  const bool ok = harmonic <= 1e-12 && cov <= 1e-12 && equiv <= 1e-9 && scale <= 1e-10;
  return {ok, "harmonic " + fmt(harmonic, 3) + ", k=1 vs covariance " + fmt(cov, 3) +
                  ", raw vs central " + fmt(equiv, 3) + ", scale " + fmt(scale, 3)};
}

// 5 ----------------------------------------------------------------------
Outcome comparison(Context&) {
  std::vector<double> sigmas, shapes;
  for (int i = 1; i <= 30; ++i) sigmas.push_back(0.05 * i);
  for (int a = 4; a <= 100; ++a) shapes.push_back(a);
  const int ks[] = {2};
  int ln_wins = 0, g_wins = 0;
  double ln_best = 0.0, g_best = 0.0;
  for (const auto& r : comparison_sweep(SweepCase::lognormal, sigmas, ks)) {
    if (r.ours_wins) {
      ++ln_wins;
      ln_best = r.param1;
    }
  }
  for (const auto& r : comparison_sweep(SweepCase::gamma, shapes, ks)) {
    if (r.ours_wins) {
      ++g_wins;
      g_best = r.param1;
    }
  }
  return {ln_wins > 0 && g_wins > 0,
          "lognormal: ours below Struski at " + std::to_string(ln_wins) + "/30 sigmas (up to " +
              fmt(ln_best) + "); gamma: ours below Struski at " + std::to_string(g_wins) +
              "/97 shapes (up to " + fmt(g_best) + ")"};
}

// 6 ----------------------------------------------------------------------
bool ensure_benchmark(Context& c, std::string& err) {
  if (!c.benchmark.is_null()) return true;
  const std::string out = c.workdir + "/acceptance_benchmark_a.json";
  const auto t0 = std::chrono::steady_clock::now();
  const int rc = run(c.cli + " benchmark --count 100 --seed 3 --k 2 --m 10000 --n auto -q -o " + out);
  c.benchmark_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (rc != 0) {
    err = "benchmark exited with " + std::to_string(rc);
    return false;
  }
  try {
    c.benchmark = json::parse(slurp(out));
  } catch (const std::exception& e) {
    err = e.what();
    return false;
  }
  return true;
}

Outcome mc_bracketing(Context& c) {
  std::string err;
  if (!ensure_benchmark(c, err)) return {false, err};
  const double rate = c.benchmark["bracket_rate"].get<double>();
  double perfect_width = 0.0;
  int perfect = 0;
  for (const auto& p : c.benchmark["points"]) {
    if (p["variance_multiplier"].get<double>() == 1.0) {
      ++perfect;
      perfect_width = std::max(perfect_width, std::abs(p["width"].get<double>()));
    }
  }
  return {rate >= 0.95 && perfect > 0 && perfect_width < 1e-9,
          "bracket rate " + fmt(rate) + " over " + std::to_string(c.benchmark["points"].size()) +
              " pairs; max perfect-proposal width " + fmt(perfect_width, 3) + " over " +
              std::to_string(perfect) + " pairs; " + fmt(c.benchmark_seconds, 3) + " s"};
}

// 7 ----------------------------------------------------------------------
Outcome diagnostics_correlation(Context& c) {
  std::string err;
  if (!ensure_benchmark(c, err)) return {false, err};
  double ok_sum = 0.0, miss_sum = 0.0, min_qq = 1.0;
  int ok_n = 0, miss_n = 0;
  for (const auto& p : c.benchmark["points"]) {
    const double qq = p["estimate"]["diagnostics"]["qq_correlation"].get<double>();
    min_qq = std::min(min_qq, qq);
    if (p["bracketed"].get<bool>()) {
      ok_sum += qq;
      ++ok_n;
    } else {
      miss_sum += qq;
      ++miss_n;
    }
  }
  // The same partition under the replicate-only standard error, for reference.
  double rok = 0.0, rmiss = 0.0;
  int rok_n = 0, rmiss_n = 0;
  for (const auto& p : c.benchmark["points"]) {
    const auto& e = p["estimate"];
    const double oracle = p["oracle"].get<double>();
    const bool hit = e["lower"].get<double>() - 3.0 * e["lower_se_replicate"].get<double>() - 1e-9 <= oracle &&
                     oracle <= e["upper"].get<double>() + 3.0 * e["upper_se_replicate"].get<double>() + 1e-9;
    const double qq = e["diagnostics"]["qq_correlation"].get<double>();
    (hit ? rok : rmiss) += qq;
    ++(hit ? rok_n : rmiss_n);
  }
  const std::string replicate =
      "; replicate-only SE: bracketed " + std::to_string(rok_n) + " mean qq " +
      (rok_n ? fmt(rok / rok_n) : std::string("n/a")) + ", missed " + std::to_string(rmiss_n) +
      " mean qq " + (rmiss_n ? fmt(rmiss / rmiss_n) : std::string("n/a"));
  if (miss_n == 0) {
    return {false, "no bracketing failures among " + std::to_string(ok_n) +
                       " pairs, so the success/failure comparison is undefined (mean qq " +
                       fmt(ok_sum / ok_n) + ", min " + fmt(min_qq) + ")" + replicate};
  }
  const double a = ok_sum / ok_n, b = miss_sum / miss_n;
  return {ok_n > 0 && a > b, "mean qq_correlation bracketed " + fmt(a) + " (" +
                                 std::to_string(ok_n) + ") vs missed " + fmt(b) + " (" +
                                 std::to_string(miss_n) + ")" + replicate};
}

// 8 ----------------------------------------------------------------------
Outcome pac_bayes(Context&) {
  const auto mis = binomial_family(50, 0.5, 0.35, 0.65);
  const auto per = binomial_family(50, 0.65, 0.35, 0.65);
  const auto grid = uniform_rho_grid(101);
  const int ks[] = {1, 2, 3};
  double slack = INFINITY, dirac = 0.0, first = 0.0;
  for (const auto* f : {&mis, &per}) {
    for (double r : grid) {
      const auto w = MixtureWeights::two_point(r);
      const double ce = cross_entropy(*f, w);
      for (int k : ks) slack = std::min(slack, oracle_bound(*f, w, BoundOrder{k}) - ce);
      first = std::max(first, std::abs(correction_term(*f, w, 1)));
    }
    for (double r : {0.0, 1.0}) {
      const auto w = MixtureWeights::two_point(r);
      const double ce = cross_entropy(*f, w);
      dirac = std::max(dirac, std::abs(expected_log_loss(*f, w) - ce));
      for (int k : ks) dirac = std::max(dirac, std::abs(oracle_bound(*f, w, BoundOrder{k}) - ce));
    }
  }
  const auto sm = model_averaging_sweep(mis, grid, ks);
  const auto sp = model_averaging_sweep(per, grid, ks);
  const bool mis_ok = sm.argmin_ce > 0 && sm.argmin_ce < 100 &&
                      (sm.argmin_log_loss == 0 || sm.argmin_log_loss == 100);
  bool per_ok = sp.argmin_ce == 100 && sp.argmin_log_loss == 100;
  for (auto i : sp.argmin_bounds) per_ok = per_ok && i == 100;
  const bool ok = slack >= -1e-12 && dirac <= 1e-12 && first <= 1e-12 && mis_ok && per_ok;
  return {ok, "min slack " + fmt(slack, 3) + ", Dirac " + fmt(dirac, 3) + ", i=1 term " +
                  fmt(first, 3) + "; misspecified CE argmin rho=" + fmt(grid[sm.argmin_ce]) +
                  ", log-loss argmin rho=" + fmt(grid[sm.argmin_log_loss]) +
                  "; perfect argmins rho=" + fmt(grid[sp.argmin_ce])};
}

// 9 ----------------------------------------------------------------------
Outcome determinism(Context& c) {
  std::string err;
  if (!ensure_benchmark(c, err)) return {false, err};
  const std::string a = c.workdir + "/acceptance_benchmark_a.json";
  const std::string b = c.workdir + "/acceptance_benchmark_b.json";
  if (run(c.cli + " benchmark --count 100 --seed 3 --k 2 --m 10000 --n auto -q -o " + b) != 0) {
    return {false, "second benchmark run failed"};
  }
  const std::string mc = c.cli + " mc --dist lognormal --mu 0 --sigma 0.1 --k 2 --n auto --m 10000 --seed 7 -q -o ";
  const std::string ma = c.workdir + "/acceptance_mc_a.json", mb = c.workdir + "/acceptance_mc_b.json";
  if (run(mc + ma) != 0 || run(mc + mb + " --threads 1") != 0) return {false, "mc run failed"};
  const bool bench_same = slurp(a) == slurp(b) && !slurp(a).empty();
  const bool mc_same = slurp(ma) == slurp(mb) && !slurp(ma).empty();
  return {bench_same && mc_same, std::string("benchmark ") + (bench_same ? "identical" : "DIFFERENT") +
                                     " (" + std::to_string(slurp(a).size()) + " bytes), mc " +
                                     (mc_same ? "identical" : "DIFFERENT") + " (" +
                                     std::to_string(slurp(ma).size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  Context ctx;
  std::set<int> allowed;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) {
      ctx.cli = argv[++i];
    } else if (a == "--workdir" && i + 1 < argc) {
      ctx.workdir = argv[++i];
    } else if (a == "--allow-fail" && i + 1 < argc) {
      allowed.insert(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance --cli PATH [--workdir DIR] [--allow-fail N]...\n";
      return 2;
    }
  }
  if (ctx.cli.empty()) {
    std::cerr << "acceptance: --cli is required\n";
    return 2;
  }

  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome(Context&)> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "exact-gap reproduction", 1.0, exact_gaps},
      {2, "bracket suite", 5.0, bracket_suite},
      {3, "order-k tightening", 0.0, tightening},
      {4, "identity suite", 0.0, identities},
      {5, "comparison claim", 0.0, comparison},
      {6, "Monte-Carlo oracle bracketing", 0.0, mc_bracketing},
      {7, "diagnostics correlation", 0.0, diagnostics_correlation},
      {8, "PAC-Bayes validity", 1.0, pac_bayes},
      {9, "determinism", 0.0, determinism},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0.0 && dt >= c.budget_seconds) {
      o.pass = false;
      o.detail += "; over the " + fmt(c.budget_seconds) + " s budget";
    }
    const bool tolerated = !o.pass && allowed.count(c.id);
    if (!o.pass && !tolerated) ++unexpected;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << o.detail
              << " (" << fmt(dt, 3) << " s)" << (tolerated ? " [known failure]" : "") << '\n';
  }
  std::cout.flush();
  return unexpected == 0 ? 0 : 1;
}
