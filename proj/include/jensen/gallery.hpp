#ifndef JENSEN_GALLERY_HPP
#define JENSEN_GALLERY_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "jensen/bounds.hpp"
#include "jensen/coefficients.hpp"
#include "jensen/distributions.hpp"
#include "jensen/special_functions.hpp"
#include "jensen/summation.hpp"

namespace jensen {

/// Closed-form -log bounds for X ~ Gamma(a, theta). Scale-free, so theta is
/// not an argument. The upper side needs E X^-(2k-1), i.e. a > 2k - 1.
inline BoundReport gamma_log_bounds(double a, BoundOrder k) {
  if (!(a > 0.0) || !std::isfinite(a)) throw ArgumentError("gamma_log_bounds: a must be > 0");
  BoundReport r;
  r.method = BoundMethod::closed_form;
  r.k = k;
  r.meta = {{"case", "gamma-log"}, {"shape", format_number(a)}};
  r.exact = special::log_minus_digamma(a);

  // Gamma(a+j) / (Gamma(a) a^j) = prod_{i<j} (1 + i/a)
  r.lower = telescoped_b_sum(k, [a](int j) {
    double s = 0.0;
    for (int i = 1; i < j; ++i) s += std::log1p(i / a);
    return std::expm1(s);
  });
  if (a > k.max_moment()) {
    // Gamma(a-j) a^j / Gamma(a) = 1 / prod_{i=1..j} (1 - i/a)
    r.upper = -telescoped_b_sum(k, [a](int j) {
      double s = 0.0;
      for (int i = 1; i <= j; ++i) s -= std::log1p(-i / a);
      return std::expm1(s);
    });
  } else {
    r.mark_upper_missing();
  }
  return r;
}

/// Closed-form -log bounds for X ~ Lognormal(mu, sigma), with E X^j (EX)^-j =
/// exp((j^2 - j) sigma^2 / 2) and E X^-j (EX)^j = exp((j^2 + j) sigma^2 / 2).
inline BoundReport lognormal_log_bounds(double sigma, BoundOrder k) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ArgumentError("lognormal_log_bounds: sigma must be > 0");
  }
  BoundReport r;
  r.method = BoundMethod::closed_form;
  r.k = k;
  r.meta = {{"case", "lognormal-log"}, {"sigma", format_number(sigma)}};
  const double s2 = sigma * sigma;
  r.exact = 0.5 * s2;
  r.lower = telescoped_b_sum(k, [s2](int j) { return std::expm1(0.5 * (j * j - j) * s2); });
  r.upper = -telescoped_b_sum(k, [s2](int j) { return std::expm1(0.5 * (j * j + j) * s2); });
  return r;
}

/// f(x) = exp(x/2), X ~ Exponential(1).
inline BoundReport exp_exponential_bounds(BoundOrder k) {
  BoundReport r;
  r.method = BoundMethod::closed_form;
  r.k = k;
  r.meta = {{"case", "exp-exponential"}};
  const double sqrt_e = std::exp(0.5);
  r.exact = 2.0 - sqrt_e;
  CompensatedSum lower, upper;
  for (int i = 1; i <= k.max_moment(); ++i) {
    CompensatedSum inner;
    for (int j = 0; j <= i; ++j) {
      inner += ((i - j) % 2 == 0 ? 1.0 : -1.0) / static_cast<double>(factorial(i - j));
      upper += std::ldexp(1.0, 1 - j) * ((i - j + 1) % 2 == 0 ? 1.0 : -1.0) /
               static_cast<double>(factorial(j));
    }
    lower += std::ldexp(inner.value(), -i);
  }
  r.lower = sqrt_e * lower.value();
  r.upper = upper.value();
  return r;
}

/// f(x) = exp(x), X ~ Normal(0, 1). The upper side uses raw moments of
/// Y ~ Normal(1, 1), since E{e^X X^m} = sqrt(e) E Y^m.
inline BoundReport exp_normal_bounds(BoundOrder k) {
  BoundReport r;
  r.method = BoundMethod::closed_form;
  r.k = k;
  r.meta = {{"case", "exp-normal"}};
  const double sqrt_e = std::exp(0.5);
  r.exact = sqrt_e - 1.0;
  const auto x = MomentProvider::normal(0.0, 1.0);
  const auto y = MomentProvider::normal(1.0, 1.0);
  CompensatedSum lower, upper;
  for (int i = 1; i <= k.max_moment(); ++i) {
    const double fact = static_cast<double>(factorial(i));
    lower += x.raw_moment(i).value / fact;
    upper += (i % 2 == 1 ? 1.0 : -1.0) / fact * y.raw_moment(i).value;
  }
  r.lower = lower.value();
  r.upper = sqrt_e * upper.value();
  return r;
}

/// Baseline 0 <= JG(-log, X) <= log(E X E X^-1) (= log E{Y/X} for an
/// independent copy Y).
inline BoundReport struski_log_upper(const MomentProvider& mp) {
  detail::require_positive(mp, "struski_log_upper");
  BoundReport r;
  r.method = BoundMethod::struski_log_upper;
  r.meta = mp.describe();
  r.exact = mp.exact_log_gap();
  r.lower = 0.0;
  const Moment inv = mp.raw_moment(-1);
  if (!inv.exists) {
    r.mark_upper_missing();
    return r;
  }
  r.upper = std::log(mp.mean() * inv.value);
  return r;
}

enum class GalleryCaseId { gamma_log, lognormal_log, exp_exponential, exp_normal };

inline const char* to_string(GalleryCaseId c) {
  switch (c) {
    case GalleryCaseId::gamma_log: return "gamma-log";
    case GalleryCaseId::lognormal_log: return "lognormal-log";
    case GalleryCaseId::exp_exponential: return "exp-exponential";
    case GalleryCaseId::exp_normal: return "exp-normal";
  }
  return "unknown";
}

struct GalleryCase {
  GalleryCaseId id;
  /// gamma-log: shape a; lognormal-log: sigma; unused otherwise.
  double param = 0.0;
};

inline BoundReport gallery_bounds(const GalleryCase& c, BoundOrder k) {
  switch (c.id) {
    case GalleryCaseId::gamma_log: return gamma_log_bounds(c.param, k);
    case GalleryCaseId::lognormal_log: return lognormal_log_bounds(c.param, k);
    case GalleryCaseId::exp_exponential: return exp_exponential_bounds(k);
    case GalleryCaseId::exp_normal: return exp_normal_bounds(k);
  }
  throw ArgumentError("gallery_bounds: unknown case");
}

enum class SweepCase { lognormal, gamma };

inline const char* to_string(SweepCase c) {
  return c == SweepCase::lognormal ? "lognormal" : "gamma";
}

struct SweepRow {
  SweepCase which;
  /// lognormal: sigma, mu; gamma: shape, scale.
  double param1 = 0.0;
  double param2 = 0.0;
  int k = 1;
  double lower = 0.0;
  double upper = 0.0;
  double exact = 0.0;
  double struski_upper = 0.0;
  bool ours_wins = false;
};

/// Our order-k bounds next to the Struski upper bound over a parameter grid.
/// Rows are ordered by k (outer) then by grid index.
inline std::vector<SweepRow> comparison_sweep(SweepCase which, std::span<const double> params,
                                              std::span<const int> ks,
                                              std::optional<double> second_param = {}) {
  if (params.empty() || ks.empty()) throw ArgumentError("comparison_sweep: empty grid");
  const double p2 = second_param.value_or(which == SweepCase::gamma ? 1.0 : 0.0);
  std::vector<SweepRow> rows;
  rows.reserve(params.size() * ks.size());
  for (int kv : ks) {
    const BoundOrder k{kv};
    for (double p : params) {
      const BoundReport ours =
          which == SweepCase::lognormal ? lognormal_log_bounds(p, k) : gamma_log_bounds(p, k);
      const MomentProvider mp =
          which == SweepCase::lognormal ? MomentProvider::lognormal(p2, p)
                                        : MomentProvider::gamma(p, p2);
      const BoundReport st = struski_log_upper(mp);
      SweepRow row{which, p, p2, kv, ours.lower, ours.upper, *ours.exact, st.upper, false};
      row.ours_wins = ours.upper_exists && ours.upper < st.upper;
      rows.push_back(row);
    }
  }
  return rows;
}

inline void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "case,param1,param2,k,lower,upper,exact,struski_upper,ours_wins\n";
  for (const auto& r : rows) {
    os << to_string(r.which) << ',' << format_number(r.param1) << ','
       << format_number(r.param2) << ',' << r.k << ',' << format_number(r.lower) << ','
       << format_number(r.upper) << ',' << format_number(r.exact) << ','
       << format_number(r.struski_upper) << ',' << (r.ours_wins ? "true" : "false") << '\n';
  }
}

}  // namespace jensen

#endif  // JENSEN_GALLERY_HPP
