#ifndef JENSEN_PAC_BAYES_HPP
#define JENSEN_PAC_BAYES_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "jensen/coefficients.hpp"
#include "jensen/error.hpp"
#include "jensen/special_functions.hpp"
#include "jensen/summation.hpp"

namespace jensen {

/// Finite data space with true distribution nu and a finite set of models
/// p(x | theta). Probabilities are stored as logs so that tail outcomes of
/// large binomials stay strictly positive.
struct FiniteModelFamily {
  std::vector<double> outcomes;
  std::vector<double> log_nu;
  std::vector<std::string> thetas;
  /// log_lik[t][x] = log p(outcomes[x] | thetas[t]).
  std::vector<std::vector<double>> log_lik;

  std::size_t outcome_count() const { return outcomes.size(); }
  std::size_t theta_count() const { return thetas.size(); }

  void validate() const {
    if (outcomes.empty() || thetas.empty()) throw ArgumentError("model family: empty");
    if (log_nu.size() != outcomes.size() || log_lik.size() != thetas.size()) {
      throw ArgumentError("model family: table shape mismatch");
    }
    auto check_dist = [](std::span<const double> logs, const std::string& what) {
      CompensatedSum s;
      for (double l : logs) {
        if (!std::isfinite(l)) throw ArgumentError(what + ": probability must be positive");
        s += std::exp(l);
      }
      if (std::abs(s.value() - 1.0) > 1e-12) throw ArgumentError(what + ": does not sum to 1");
    };
    check_dist(log_nu, "nu");
    for (std::size_t t = 0; t < thetas.size(); ++t) {
      if (log_lik[t].size() != outcomes.size()) throw ArgumentError("model family: row size");
      check_dist(log_lik[t], "p(.|" + thetas[t] + ")");
    }
  }

  static FiniteModelFamily from_probabilities(std::vector<double> outcomes,
                                              std::span<const double> nu,
                                              std::vector<std::string> thetas,
                                              const std::vector<std::vector<double>>& lik) {
    FiniteModelFamily f{std::move(outcomes), {}, std::move(thetas), {}};
    for (double p : nu) f.log_nu.push_back(std::log(p));
    for (const auto& row : lik) {
      auto& out = f.log_lik.emplace_back();
      for (double p : row) out.push_back(std::log(p));
    }
    f.validate();
    return f;
  }
};

/// Mixture weights rho over the thetas of a family.
class MixtureWeights {
 public:
  explicit MixtureWeights(std::vector<double> rho) : rho_(std::move(rho)) {
    CompensatedSum s;
    for (double r : rho_) {
      if (!(r >= 0.0)) throw ArgumentError("mixture weights must be nonnegative");
      s += r;
    }
    if (rho_.empty() || std::abs(s.value() - 1.0) > 1e-12) {
      throw ArgumentError("mixture weights must sum to 1");
    }
  }
  /// Two models, weight r on the second.
  static MixtureWeights two_point(double r) { return MixtureWeights({1.0 - r, r}); }
  static MixtureWeights dirac(std::size_t size, std::size_t index) {
    std::vector<double> w(size, 0.0);
    w.at(index) = 1.0;
    return MixtureWeights(std::move(w));
  }

  std::span<const double> values() const { return rho_; }
  double operator[](std::size_t i) const { return rho_[i]; }
  std::size_t size() const { return rho_.size(); }

 private:
  std::vector<double> rho_;
};

namespace detail {

inline void require_match(const FiniteModelFamily& f, const MixtureWeights& w) {
  if (w.size() != f.theta_count()) throw ArgumentError("mixture weights do not match family");
}

/// log mu(x) = log sum_theta rho(theta) p(x|theta).
inline double log_mixture(const FiniteModelFamily& f, const MixtureWeights& w, std::size_t x) {
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < f.theta_count(); ++t) {
    if (w[t] > 0.0) hi = std::max(hi, std::log(w[t]) + f.log_lik[t][x]);
  }
  CompensatedSum s;
  for (std::size_t t = 0; t < f.theta_count(); ++t) {
    if (w[t] > 0.0) s += std::exp(std::log(w[t]) + f.log_lik[t][x] - hi);
  }
  return hi + std::log(s.value());
}

}  // namespace detail

/// CE(rho) = -sum_x nu(x) log mu(x).
inline double cross_entropy(const FiniteModelFamily& f, const MixtureWeights& w) {
  detail::require_match(f, w);
  CompensatedSum s;
  for (std::size_t x = 0; x < f.outcome_count(); ++x) {
    const double nu = std::exp(f.log_nu[x]);
    if (nu == 0.0) continue;
    const double lm = detail::log_mixture(f, w, x);
    if (!std::isfinite(lm)) throw ComputationError("cross_entropy: mixture vanishes on an outcome");
    s -= nu * lm;
  }
  return s.value();
}

/// E_rho[L(theta)] with L(theta) = -sum_x nu(x) log p(x|theta).
inline double expected_log_loss(const FiniteModelFamily& f, const MixtureWeights& w) {
  detail::require_match(f, w);
  CompensatedSum s;
  for (std::size_t t = 0; t < f.theta_count(); ++t) {
    if (w[t] == 0.0) continue;
    CompensatedSum loss;
    for (std::size_t x = 0; x < f.outcome_count(); ++x) {
      loss -= std::exp(f.log_nu[x]) * f.log_lik[t][x];
    }
    s += w[t] * loss.value();
  }
  return s.value();
}

/// sum_x nu(x) E_rho[(p(x|theta) - mu(x))^i] / mu(x)^i, evaluated as
/// E_rho[(p/mu - 1)^i]. For i = 1 this vanishes identically.
inline double correction_term(const FiniteModelFamily& f, const MixtureWeights& w, int i) {
  detail::require_match(f, w);
  if (i < 1) throw ArgumentError("correction_term: order must be >= 1");
  CompensatedSum s;
  for (std::size_t x = 0; x < f.outcome_count(); ++x) {
    const double nu = std::exp(f.log_nu[x]);
    if (nu == 0.0) continue;
    const double lm = detail::log_mixture(f, w, x);
    CompensatedSum inner;
    for (std::size_t t = 0; t < f.theta_count(); ++t) {
      if (w[t] == 0.0) continue;
      inner += w[t] * std::pow(std::expm1(f.log_lik[t][x] - lm), i);
    }
    s += nu * inner.value();
  }
  return s.value();
}

/// Order-k oracle upper bound on CE(rho):
///   E_rho[L] - sum_{i=1}^{2k-1} ((-1)^i / i) correction_term(i).
/// The i = 1 term is identically zero and is not summed, so k = 1 reproduces
/// expected_log_loss exactly.
inline double oracle_bound(const FiniteModelFamily& f, const MixtureWeights& w, BoundOrder k) {
  CompensatedSum s;
  s += expected_log_loss(f, w);
  for (int i = 2; i <= k.max_moment(); ++i) {
    s -= (i % 2 == 0 ? 1.0 : -1.0) / i * correction_term(f, w, i);
  }
  return s.value();
}

/// Outcomes 0..N with nu = Binomial(N, p_true) and two models Binomial(N, p1),
/// Binomial(N, p2), all in log space.
inline FiniteModelFamily binomial_family(int trials, double p_true, double p1, double p2) {
  if (trials < 1) throw ArgumentError("binomial_family: trials must be >= 1");
  for (double p : {p_true, p1, p2}) {
    if (!(p > 0.0 && p < 1.0)) throw ArgumentError("binomial_family: probabilities must be in (0,1)");
  }
  auto log_pmf = [trials](int x, double p) {
    const double n = trials;
    return special::lgamma(n + 1.0) - special::lgamma(x + 1.0) - special::lgamma(n - x + 1.0) +
           x * std::log(p) + (n - x) * std::log1p(-p);
  };
  FiniteModelFamily f;
  f.thetas = {"p=" + std::to_string(p1), "p=" + std::to_string(p2)};
  f.log_lik.resize(2);
  for (int x = 0; x <= trials; ++x) {
    f.outcomes.push_back(x);
    f.log_nu.push_back(log_pmf(x, p_true));
    f.log_lik[0].push_back(log_pmf(x, p1));
    f.log_lik[1].push_back(log_pmf(x, p2));
  }
  f.validate();
  return f;
}

struct MixtureCurvePoint {
  double rho = 0.0;
  double ce = 0.0;
  double expected_log_loss = 0.0;
  /// One oracle bound per requested k, in request order.
  std::vector<double> bounds;
};

struct MixtureSweep {
  std::vector<int> ks;
  std::vector<MixtureCurvePoint> points;
  std::size_t argmin_ce = 0;
  std::size_t argmin_log_loss = 0;
  std::vector<std::size_t> argmin_bounds;
};

/// First index attaining the minimum; values within 1e-12 relative of the
/// running minimum count as ties, so ties resolve toward smaller rho.
inline std::size_t argmin_toward_smaller(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[best] - 1e-12 * std::max(1.0, std::abs(v[best]))) best = i;
  }
  return best;
}

inline std::vector<double> uniform_rho_grid(int size) {
  if (size < 2) throw ArgumentError("rho grid needs at least 2 points");
  std::vector<double> g(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) g[i] = static_cast<double>(i) / (size - 1);
  return g;
}

/// CE, expected log loss and oracle bounds along rho in [0, 1] (weight rho on
/// the second model) with per-curve minimisers.
inline MixtureSweep model_averaging_sweep(const FiniteModelFamily& f,
                                          std::span<const double> rho_grid,
                                          std::span<const int> ks) {
  if (f.theta_count() != 2) throw ArgumentError("model_averaging_sweep: need exactly 2 thetas");
  if (rho_grid.empty() || !std::is_sorted(rho_grid.begin(), rho_grid.end())) {
    throw ArgumentError("model_averaging_sweep: rho grid must be non-empty and sorted");
  }
  MixtureSweep out;
  out.ks.assign(ks.begin(), ks.end());
  std::vector<BoundOrder> orders;
  for (int k : ks) orders.emplace_back(k);
  for (double rho : rho_grid) {
    const auto w = MixtureWeights::two_point(rho);
    MixtureCurvePoint p{rho, cross_entropy(f, w), expected_log_loss(f, w), {}};
    for (auto k : orders) p.bounds.push_back(oracle_bound(f, w, k));
    out.points.push_back(std::move(p));
  }
  auto column = [&](auto get) {
    std::vector<double> c;
    for (const auto& p : out.points) c.push_back(get(p));
    return c;
  };
  out.argmin_ce = argmin_toward_smaller(column([](const auto& p) { return p.ce; }));
  out.argmin_log_loss =
      argmin_toward_smaller(column([](const auto& p) { return p.expected_log_loss; }));
  for (std::size_t b = 0; b < orders.size(); ++b) {
    out.argmin_bounds.push_back(
        argmin_toward_smaller(column([b](const auto& p) { return p.bounds[b]; })));
  }
  return out;
}

}  // namespace jensen

#endif  // JENSEN_PAC_BAYES_HPP
