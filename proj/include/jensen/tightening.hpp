#ifndef JENSEN_TIGHTENING_HPP
#define JENSEN_TIGHTENING_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jensen/coefficients.hpp"
#include "jensen/diagnostics.hpp"
#include "jensen/error.hpp"
#include "jensen/random.hpp"
#include "jensen/summation.hpp"

namespace jensen {

/// Geometric grid min, min*ratio, ... capped by (and ending at) max.
struct NGrid {
  std::int64_t min = 50;
  std::int64_t max = 5'000'000;
  double ratio = 2.0;

  std::vector<std::int64_t> values() const {
    std::vector<std::int64_t> out;
    double v = static_cast<double>(min);
    while (v < static_cast<double>(max)) {
      const auto n = static_cast<std::int64_t>(std::llround(v));
      if (out.empty() || n > out.back()) out.push_back(n);
      v *= ratio;
    }
    if (out.empty() || out.back() != max) out.push_back(max);
    return out;
  }
};

struct McConfig {
  /// Inner sample size; empty means pick it with grid_search_n.
  std::optional<std::int64_t> n;
  int m = 10'000;
  BoundOrder k{2};
  std::uint64_t seed = default_seed;
  double target_std = 0.3;
  NGrid n_grid{};
  /// Replicates used to measure std(log mean) at each grid point.
  int m_probe = 200;
  /// Worker threads (0 = hardware concurrency); results do not depend on it.
  unsigned threads = 0;

  void validate() const {
    if (n && *n < 1) throw ArgumentError("McConfig: n must be >= 1");
    if (m < 2) throw ArgumentError("McConfig: m must be >= 2");
    if (m_probe < 2) throw ArgumentError("McConfig: m_probe must be >= 2");
    if (!(target_std > 0.0)) throw ArgumentError("McConfig: target_std must be > 0");
    if (n_grid.min < 2 || n_grid.max < n_grid.min || !(n_grid.ratio > 1.0)) {
      throw ArgumentError("McConfig: invalid n grid");
    }
  }
};

struct GridSearchResult {
  std::int64_t n = 0;
  bool achieved = false;
  /// std of log mean at the returned n.
  double measured_std = 0.0;
  std::vector<std::pair<std::int64_t, double>> trace;
};

struct McBoundEstimate {
  double lower = 0.0;
  double upper = 0.0;
  /// Delta-method standard errors that include the noise of the plug-in mean.
  double lower_se = 0.0;
  double upper_se = 0.0;
  /// Plain replicate std / sqrt(m) of the bound terms, which treats the
  /// plug-in mean as known and understates the error.
  double lower_se_replicate = 0.0;
  double upper_se_replicate = 0.0;
  std::int64_t n_used = 0;
  int m = 0;
  int k = 0;
  std::uint64_t seed = 0;
  /// Grand mean of all n*m draws, standing in for E X.
  double plug_in_mean = 0.0;
  /// Average of log mean: the (importance weighted) ELBO.
  double mean_log = 0.0;
  double mean_log_se = 0.0;
  /// Struski upper bound on the gap of the n-sample mean, log(E Xbar E Xbar^-1).
  double struski_gap_upper = 0.0;
  /// Our upper bound on that gap, upper - mean_log.
  double gap_upper() const { return upper - mean_log; }
  double width() const { return upper - lower; }
  /// Set when n came from a grid search; false if the grid was exhausted.
  std::optional<GridSearchResult> search;
  NormalityDiagnostics diagnostics;
  std::vector<double> log_means;
};

namespace detail {

enum StreamPhase : std::uint64_t { final_phase = 1, probe_phase = 2 };

/// m independent n-sample means; replicate r uses stream (seed, phase, level, r).
template <Sampler S>
std::vector<double> replicate_means(const S& sampler, std::int64_t n, int m, std::uint64_t seed,
                                    std::uint64_t phase, std::uint64_t level, unsigned threads) {
  std::vector<double> means(static_cast<std::size_t>(m));
  parallel_for(means.size(), threads, [&](std::size_t r) {
    Rng rng = make_stream(seed, phase, level, r);
    CompensatedSum s;
    for (std::int64_t i = 0; i < n; ++i) {
      const double x = sampler(rng);
      if (!(x > 0.0) || !std::isfinite(x)) {
        const std::size_t index = r * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
        throw DataError("sampler returned a nonpositive or non-finite value (" +
                            std::to_string(x) + ") at draw " + std::to_string(index) +
                            " (replicate " + std::to_string(r) + ")",
                        index);
      }
      s += x;
    }
    const double mean = s.value() / static_cast<double>(n);
    if (mean < 1e-300) {
      throw NumericalError("replicate " + std::to_string(r) + ": sample mean below 1e-300", mean);
    }
    means[r] = mean;
  });
  return means;
}

inline std::pair<double, double> mean_and_se(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = compensated_mean(xs);
  CompensatedSum s;
  for (double x : xs) s += (x - mean) * (x - mean);
  return {mean, std::sqrt(s.value() / (n - 1.0) / n)};
}

inline double sample_std(std::span<const double> xs) {
  const auto [mean, se] = mean_and_se(xs);
  return se * std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace detail

/// Smallest n on the grid whose std of log(n-sample mean), measured over
/// m_probe replicates, is at most target_std. Returns the grid maximum with
/// achieved = false when no grid point qualifies.
template <Sampler S>
GridSearchResult grid_search_n(const S& sampler, const McConfig& cfg) {
  cfg.validate();
  GridSearchResult out;
  const auto grid = cfg.n_grid.values();
  for (std::size_t level = 0; level < grid.size(); ++level) {
    const std::int64_t n = grid[level];
    auto means = detail::replicate_means(sampler, n, cfg.m_probe, cfg.seed,
                                         detail::probe_phase, level, cfg.threads);
    for (double& v : means) v = std::log(v);
    const double sd = detail::sample_std(means);
    out.trace.emplace_back(n, sd);
    out.n = n;
    out.measured_std = sd;
    if (sd <= cfg.target_std) {
      out.achieved = true;
      return out;
    }
  }
  return out;
}

/// Bounds on log E X from m replicate n-sample means Xbar_r, with the grand
/// mean P of all draws in place of E X:
///   lower = avg_r [ sum_j (1/j + b_{k,j} (Xbar_r/P)^j) + log Xbar_r ]
///   upper = avg_r [ -sum_j (1/j + b_{k,j} (P/Xbar_r)^j) + log Xbar_r ].
template <Sampler S>
McBoundEstimate sample_mean_log_bounds(const S& sampler, const McConfig& cfg) {
  cfg.validate();
  McBoundEstimate est;
  std::int64_t n = 0;
  if (cfg.n) {
    n = *cfg.n;
  } else {
    est.search = grid_search_n(sampler, cfg);
    n = est.search->n;
  }
  const BoundOrder k = cfg.k;
  const auto means = detail::replicate_means(sampler, n, cfg.m, cfg.seed, detail::final_phase,
                                             0, cfg.threads);
  const double plug = compensated_mean(means);
  const double log_plug = std::log(plug);
  const std::size_t m = means.size();

  std::vector<double> lower_terms(m), upper_terms(m), logs(m), inverse(m);
  // d/dP of each replicate term, for the plug-in correction of the SE.
  CompensatedSum lower_slope, upper_slope;
  for (std::size_t r = 0; r < m; ++r) {
    const double log_mean = std::log(means[r]);
    const double log_ratio = log_mean - log_plug;  // log(Xbar_r / P)
    if (k.max_moment() * std::abs(log_ratio) > 700.0) {
      throw NumericalError("replicate " + std::to_string(r) +
                               ": ratio power exceeds exp(700) (log ratio " +
                               std::to_string(log_ratio) + ")",
                           log_ratio);
    }
    logs[r] = log_mean;
    inverse[r] = 1.0 / means[r];
    lower_terms[r] =
        telescoped_b_sum(k, [&](int j) { return std::expm1(j * log_ratio); }) + log_mean;
    upper_terms[r] =
        -telescoped_b_sum(k, [&](int j) { return std::expm1(-j * log_ratio); }) + log_mean;
    for (int j = 1; j <= k.max_moment(); ++j) {
      const double jb = j * coeff_b(k, j) / plug;
      lower_slope -= jb * std::exp(j * log_ratio);
      upper_slope -= jb * std::exp(-j * log_ratio);
    }
  }
  // P is itself the mean of the replicates, so each bound is a smooth function
  // of all of them. Its delta-method SE uses the influence terms
  // term_r + avg(d term/dP) * Xbar_r rather than term_r alone.
  std::vector<double> lower_influence(m), upper_influence(m);
  const double lo_c = lower_slope.value() / static_cast<double>(m);
  const double up_c = upper_slope.value() / static_cast<double>(m);
  for (std::size_t r = 0; r < m; ++r) {
    lower_influence[r] = lower_terms[r] + lo_c * means[r];
    upper_influence[r] = upper_terms[r] + up_c * means[r];
  }

  std::tie(est.lower, est.lower_se_replicate) = detail::mean_and_se(lower_terms);
  std::tie(est.upper, est.upper_se_replicate) = detail::mean_and_se(upper_terms);
  est.lower_se = detail::mean_and_se(lower_influence).second;
  est.upper_se = detail::mean_and_se(upper_influence).second;
  std::tie(est.mean_log, est.mean_log_se) = detail::mean_and_se(logs);
  est.struski_gap_upper = std::log(plug * compensated_mean(inverse));
  est.n_used = n;
  est.m = cfg.m;
  est.k = k.value();
  est.seed = cfg.seed;
  est.plug_in_mean = plug;
  if (logs.size() >= 8) est.diagnostics = normality_diagnostics(logs);
  est.log_means = std::move(logs);
  return est;
}

}  // namespace jensen

#endif  // JENSEN_TIGHTENING_HPP
