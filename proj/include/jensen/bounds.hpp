#ifndef JENSEN_BOUNDS_HPP
#define JENSEN_BOUNDS_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>

#include "jensen/coefficients.hpp"
#include "jensen/distributions.hpp"
#include "jensen/error.hpp"
#include "jensen/summation.hpp"

namespace jensen {

enum class BoundMethod {
  general_central,
  general_raw,
  log_central,
  log_raw,
  simple_cov,
  struski_log_upper,
  closed_form,
};

inline const char* to_string(BoundMethod m) {
  switch (m) {
    case BoundMethod::general_central: return "general-central";
    case BoundMethod::general_raw: return "general-raw";
    case BoundMethod::log_central: return "log-central";
    case BoundMethod::log_raw: return "log-raw";
    case BoundMethod::simple_cov: return "simple-cov";
    case BoundMethod::struski_log_upper: return "struski-log-upper";
    case BoundMethod::closed_form: return "closed-form";
  }
  return "unknown";
}

/// Lower and upper bound on a Jensen gap, optionally with its exact value.
/// A side whose defining moment does not exist is a signed infinity with its
/// `*_exists` flag cleared.
struct BoundReport {
  BoundMethod method = BoundMethod::closed_form;
  BoundOrder k{1};
  double lower = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  bool lower_exists = true;
  bool upper_exists = true;
  std::optional<double> exact;
  MetaList meta;

  double width() const { return upper - lower; }

  /// lower <= exact <= upper with slack `tol` on each finite side.
  bool brackets(double tol) const {
    if (!exact) return false;
    const bool lo_ok = !lower_exists || lower <= *exact + tol;
    const bool hi_ok = !upper_exists || *exact <= upper + tol;
    return lo_ok && hi_ok;
  }

  void mark_lower_missing() {
    lower = -std::numeric_limits<double>::infinity();
    lower_exists = false;
  }
  void mark_upper_missing() {
    upper = std::numeric_limits<double>::infinity();
    upper_exists = false;
  }
};

/// f together with its derivatives on an open interval. The derivative of
/// order 2k is assumed nonnegative by whoever builds the spec; nothing checks it.
struct FunctionSpec {
  enum class Family { generic, neg_log, exp };

  std::string name;
  std::function<double(int order, double x)> derivative;
  Interval domain{};
  Family family = Family::generic;

  double operator()(double x) const { return derivative(0, x); }

  /// f(x) = -log x on (0, inf): f^(i)(x) = (-1)^i (i-1)! x^-i.
  static FunctionSpec neg_log() {
    return {"neg-log",
            [](int i, double x) {
              if (i == 0) return -std::log(x);
              const double f = static_cast<double>(factorial(i - 1));
              return (i % 2 == 0 ? f : -f) * std::pow(x, -i);
            },
            Interval{0.0, std::numeric_limits<double>::infinity()}, Family::neg_log};
  }

  /// f(x) = exp(c x): f^(i)(x) = c^i exp(c x).
  static FunctionSpec exp_scaled(double c) {
    return {"exp(" + format_number(c) + "x)",
            [c](int i, double x) { return std::pow(c, i) * std::exp(c * x); }, Interval{},
            Family::exp};
  }
};

namespace detail {

inline void require_domain(const FunctionSpec& f, const MomentProvider& mp) {
  if (!f.domain.contains(mp.support())) {
    throw ArgumentError(f.name + ": distribution support leaves the function's domain");
  }
}

inline void require_positive(const MomentProvider& mp, const char* op) {
  if (!mp.strictly_positive()) {
    throw ArgumentError(std::string(op) + ": requires a strictly positive random variable");
  }
}

template <class G>
double term_expectation(const MomentProvider& mp, G&& g, const Interval& domain, int term,
                        double rel_tol) {
  try {
    return mp.expectation({std::forward<G>(g), domain, rel_tol});
  } catch (const ComputationError& e) {
    throw ComputationError(std::string(e.what()) + " [term " + std::to_string(term) + "]",
                           term, e.achieved_error());
  }
}

inline MetaList meta_for(const FunctionSpec& f, const MomentProvider& mp) {
  MetaList m = mp.describe();
  m.emplace_back("function", f.name);
  return m;
}

}  // namespace detail

/// Order-k bounds for a function with nonnegative 2k-th derivative, central
/// moment form:
///   sum_i a_{i,0} f^(i)(EX) E(X-EX)^i <= JG <= -sum_i a_{i,i} E{f^(i)(X)(X-EX)^i}.
inline BoundReport general_bounds(const FunctionSpec& f, const MomentProvider& mp,
                                  BoundOrder k,
                                  double rel_tol = default_expectation_tolerance) {
  detail::require_domain(f, mp);
  BoundReport r;
  r.method = BoundMethod::general_central;
  r.k = k;
  r.meta = detail::meta_for(f, mp);
  const double m = mp.mean();

  CompensatedSum lower;
  for (int i = 1; i <= k.max_moment(); ++i) {
    const Moment c = mp.central_moment(i);
    if (!c.exists) {
      r.mark_lower_missing();
      break;
    }
    lower += coeff_a(i, 0) * f.derivative(i, m) * c.value;
  }
  if (r.lower_exists) r.lower = lower.value();

  CompensatedSum upper;
  for (int i = 1; i <= k.max_moment(); ++i) {
    // f^(i) of -log behaves like x^-i, so the term needs E X^-i.
    if (f.family == FunctionSpec::Family::neg_log && !mp.raw_moment(-i).exists) {
      r.mark_upper_missing();
      return r;
    }
    const double e = detail::term_expectation(
        mp, [&f, m, i](double x) { return f.derivative(i, x) * std::pow(x - m, i); },
        f.domain, i, rel_tol);
    upper -= coeff_a(i, i) * e;
  }
  r.upper = upper.value();
  return r;
}

/// Same bounds through Newton's expansion into raw moments:
///   sum_i sum_j a_{i,j} f^(i)(EX) E X^{i-j} (EX)^j
///   <= JG <= -sum_i sum_j a_{i,j} E{f^(i)(X) X^j} (EX)^{i-j}.
inline BoundReport general_bounds_raw(const FunctionSpec& f, const MomentProvider& mp,
                                      BoundOrder k,
                                      double rel_tol = default_expectation_tolerance) {
  detail::require_domain(f, mp);
  BoundReport r;
  r.method = BoundMethod::general_raw;
  r.k = k;
  r.meta = detail::meta_for(f, mp);
  const double m = mp.mean();

  CompensatedSum lower;
  for (int i = 1; i <= k.max_moment() && r.lower_exists; ++i) {
    const double d = f.derivative(i, m);
    for (int j = 0; j <= i; ++j) {
      const Moment raw = mp.raw_moment(i - j);
      if (!raw.exists) {
        r.mark_lower_missing();
        break;
      }
      lower += coeff_a(i, j) * d * raw.value * std::pow(m, j);
    }
  }
  if (r.lower_exists) r.lower = lower.value();

  CompensatedSum upper;
  for (int i = 1; i <= k.max_moment(); ++i) {
    for (int j = 0; j <= i; ++j) {
      const double e = detail::term_expectation(
          mp, [&f, i, j](double x) { return f.derivative(i, x) * std::pow(x, j); }, f.domain,
          i, rel_tol);
      upper -= coeff_a(i, j) * e * std::pow(m, i - j);
    }
  }
  r.upper = upper.value();
  return r;
}

/// Zero-mean specialisation: sum_i a_{i,0} f^(i)(0) E X^i <= JG <= -sum_i a_{i,i} E{f^(i)(X) X^i}.
inline BoundReport general_bounds_zero_mean(const FunctionSpec& f, const MomentProvider& mp,
                                            BoundOrder k,
                                            double rel_tol = default_expectation_tolerance) {
  if (std::abs(mp.mean()) > 1e-12) {
    throw ArgumentError("general_bounds_zero_mean: mean is " + format_number(mp.mean()));
  }
  detail::require_domain(f, mp);
  BoundReport r;
  r.method = BoundMethod::general_central;
  r.k = k;
  r.meta = detail::meta_for(f, mp);

  CompensatedSum lower;
  for (int i = 1; i <= k.max_moment(); ++i) {
    const Moment raw = mp.raw_moment(i);
    if (!raw.exists) {
      r.mark_lower_missing();
      break;
    }
    lower += coeff_a(i, 0) * f.derivative(i, 0.0) * raw.value;
  }
  if (r.lower_exists) r.lower = lower.value();

  CompensatedSum upper;
  for (int i = 1; i <= k.max_moment(); ++i) {
    const double e = detail::term_expectation(
        mp, [&f, i](double x) { return f.derivative(i, x) * std::pow(x, i); }, f.domain, i,
        rel_tol);
    upper -= coeff_a(i, i) * e;
  }
  r.upper = upper.value();
  return r;
}

/// -log bounds, central form:
///   sum_i ((-1)^i/i) (EX)^-i E(X-EX)^i <= JG <= -sum_i (1/i) E{X^-i (X-EX)^i}.
/// The mixed terms go through the expectation engine.
inline BoundReport log_bounds_central(const MomentProvider& mp, BoundOrder k,
                                      double rel_tol = default_expectation_tolerance) {
  detail::require_positive(mp, "log_bounds_central");
  BoundReport r;
  r.method = BoundMethod::log_central;
  r.k = k;
  r.meta = mp.describe();
  r.exact = mp.exact_log_gap();
  const double m = mp.mean();

  CompensatedSum lower;
  for (int i = 1; i <= k.max_moment(); ++i) {
    const Moment c = mp.central_moment(i);
    if (!c.exists) {
      r.mark_lower_missing();
      break;
    }
    lower += (i % 2 == 0 ? 1.0 : -1.0) / i * c.value / std::pow(m, i);
  }
  if (r.lower_exists) r.lower = lower.value();

  CompensatedSum upper;
  const Interval positive{0.0, std::numeric_limits<double>::infinity()};
  for (int i = 1; i <= k.max_moment(); ++i) {
    if (!mp.raw_moment(-i).exists) {
      r.mark_upper_missing();
      return r;
    }
    const double e = detail::term_expectation(
        mp, [m, i](double x) { return std::pow((x - m) / x, i); }, positive, i, rel_tol);
    upper -= e / i;
  }
  r.upper = upper.value();
  return r;
}

/// -log bounds, raw form:
///   sum_j [1/j + b_{k,j} E X^j (EX)^-j] <= JG <= -sum_j [1/j + b_{k,j} E X^-j (EX)^j].
/// Evaluated as sum_j b_{k,j} (r_j - 1), which equals the above by the
/// harmonic identity.
inline BoundReport log_bounds_raw(const MomentProvider& mp, BoundOrder k) {
  detail::require_positive(mp, "log_bounds_raw");
  BoundReport r;
  r.method = BoundMethod::log_raw;
  r.k = k;
  r.meta = mp.describe();
  r.exact = mp.exact_log_gap();
  const double m = mp.mean();

  for (int j = 1; j <= k.max_moment(); ++j) {
    if (!mp.raw_moment(j).exists) r.mark_lower_missing();
    if (!mp.raw_moment(-j).exists) r.mark_upper_missing();
  }
  if (r.lower_exists) {
    r.lower = telescoped_b_sum(
        k, [&](int j) { return mp.raw_moment(j).value / std::pow(m, j) - 1.0; });
  }
  if (r.upper_exists) {
    r.upper = -telescoped_b_sum(
        k, [&](int j) { return mp.raw_moment(-j).value * std::pow(m, j) - 1.0; });
  }
  return r;
}

/// First-order bounds 0 <= JG <= cov{X, f'(X)}. For -log the covariance is
/// E X E X^-1 - 1 and is taken from the raw moments.
inline BoundReport simple_cov_bounds(const FunctionSpec& f, const MomentProvider& mp,
                                     double rel_tol = default_expectation_tolerance) {
  detail::require_domain(f, mp);
  BoundReport r;
  r.method = BoundMethod::simple_cov;
  r.meta = detail::meta_for(f, mp);
  r.lower = 0.0;
  const double m = mp.mean();
  if (f.family == FunctionSpec::Family::neg_log) {
    r.exact = mp.exact_log_gap();
    const Moment inv = mp.raw_moment(-1);
    if (!inv.exists) {
      r.mark_upper_missing();
      return r;
    }
    r.upper = m * inv.value - 1.0;
    return r;
  }
  // E{X f'(X)} - E X E{f'(X)} = E{(X - E X) f'(X)}
  r.upper = detail::term_expectation(
      mp, [&f, m](double x) { return (x - m) * f.derivative(1, x); }, f.domain, 1, rel_tol);
  return r;
}

}  // namespace jensen

#endif  // JENSEN_BOUNDS_HPP
