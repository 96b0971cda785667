#ifndef JENSEN_DISTRIBUTIONS_HPP
#define JENSEN_DISTRIBUTIONS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jensen/coefficients.hpp"
#include "jensen/error.hpp"
#include "jensen/quadrature.hpp"
#include "jensen/special_functions.hpp"
#include "jensen/summation.hpp"

namespace jensen {

enum class DistributionKind { gamma, lognormal, exponential, normal, empirical };

inline const char* to_string(DistributionKind k) {
  switch (k) {
    case DistributionKind::gamma: return "gamma";
    case DistributionKind::lognormal: return "lognormal";
    case DistributionKind::exponential: return "exponential";
    case DistributionKind::normal: return "normal";
    case DistributionKind::empirical: return "empirical";
  }
  return "unknown";
}

/// A moment that may fail to exist. Nonexistent moments carry +inf rather
/// than NaN so that they propagate into bounds as signed infinities.
struct Moment {
  double value = std::numeric_limits<double>::infinity();
  bool exists = false;
  /// Empirical negative moments computed from samples close to zero.
  bool high_variance = false;

  static Moment of(double v, bool high_variance = false) {
    return {v, true, high_variance};
  }
  static Moment none() { return {}; }
};

struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
};

inline constexpr double default_expectation_tolerance = 1e-10;

struct ExpectationRequest {
  std::function<double(double)> integrand;
  /// Where the integrand is defined; must cover the distribution's support.
  Interval domain{};
  double rel_tol = default_expectation_tolerance;
};

using MetaList = std::vector<std::pair<std::string, std::string>>;

inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// Newline-delimited decimal samples; blank lines and '#' comments skipped.
inline std::vector<double> read_samples(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size() || !std::isfinite(v)) {
      throw DataError("sample file line " + std::to_string(lineno) +
                          ": not a finite decimal number: '" + token + "'",
                      lineno);
    }
    out.push_back(v);
  }
  return out;
}

inline std::vector<double> load_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open sample file: " + path);
  return read_samples(in);
}

/// Supplies raw, central and negative moments plus generic expectations for
/// one of the analytic families or an empirical sample. Immutable; every
/// moment of order |j| <= 15 is computed once at construction.
class MomentProvider {
 public:
  static constexpr int max_order = max_moment_order;
  static constexpr double negative_moment_guard = 1e-12;

  /// Gamma with shape a and scale theta.
  static MomentProvider gamma(double shape, double scale = 1.0) {
    if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) ||
        !std::isfinite(scale)) {
      throw ArgumentError("gamma: shape and scale must be positive and finite");
    }
    return MomentProvider(DistributionKind::gamma, shape, scale, {});
  }
  /// log X ~ Normal(mu, sigma).
  static MomentProvider lognormal(double mu, double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(mu) || !std::isfinite(sigma)) {
      throw ArgumentError("lognormal: sigma must be positive, mu finite");
    }
    return MomentProvider(DistributionKind::lognormal, mu, sigma, {});
  }
  static MomentProvider exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
      throw ArgumentError("exponential: rate must be positive and finite");
    }
    return MomentProvider(DistributionKind::exponential, rate, 0.0, {});
  }
  static MomentProvider normal(double mean, double sd) {
    if (!(sd > 0.0) || !std::isfinite(mean) || !std::isfinite(sd)) {
      throw ArgumentError("normal: sd must be positive, mean finite");
    }
    return MomentProvider(DistributionKind::normal, mean, sd, {});
  }
  static MomentProvider empirical(std::vector<double> samples) {
    if (samples.empty()) throw ArgumentError("empirical: no samples");
    for (double x : samples) {
      if (!std::isfinite(x)) throw ArgumentError("empirical: non-finite sample");
    }
    return MomentProvider(DistributionKind::empirical, 0.0, 0.0,
                          std::move(samples));
  }

  DistributionKind kind() const noexcept { return kind_; }
  double mean() const noexcept { return mean_; }

  /// First and second parameter (shape/scale, mu/sigma, rate, mean/sd).
  double param1() const noexcept { return p1_; }
  double param2() const noexcept { return p2_; }

  const std::vector<double>& samples() const noexcept {
    static const std::vector<double> empty;
    return samples_ ? *samples_ : empty;
  }

  Interval support() const {
    switch (kind_) {
      case DistributionKind::normal: return {};
      case DistributionKind::empirical: {
        const auto [lo, hi] = std::minmax_element(samples_->begin(), samples_->end());
        return {*lo, *hi};
      }
      default: return {0.0, std::numeric_limits<double>::infinity()};
    }
  }

  /// Support contained in (0, inf).
  bool strictly_positive() const {
    switch (kind_) {
      case DistributionKind::normal: return false;
      case DistributionKind::empirical: return support().lo > 0.0;
      default: return true;
    }
  }

  Moment raw_moment(int j) const {
    check_order(j, -max_order);
    return raw_[static_cast<std::size_t>(j + max_order)];
  }

  /// E{(X - E X)^i}; Newton's binomial expansion over raw moments for the
  /// analytic kinds, a direct two-pass sample average for the empirical kind.
  Moment central_moment(int i) const {
    if (i < 1) throw ArgumentError("central_moment: order must be >= 1");
    check_order(i, 1);
    return central_[static_cast<std::size_t>(i)];
  }

  /// E{g(X)}: adaptive quadrature against the density for analytic kinds,
  /// the sample mean for the empirical kind.
  double expectation(const ExpectationRequest& req) const {
    if (!(req.rel_tol > 0.0) || req.rel_tol > 1e-2) {
      throw ArgumentError("expectation: tolerance must lie in (0, 1e-2]");
    }
    if (!req.domain.contains(support())) {
      throw ArgumentError("expectation: integrand domain does not cover the support of " +
                          std::string(to_string(kind_)));
    }
    const auto& g = req.integrand;
    if (kind_ == DistributionKind::empirical) {
      CompensatedSum s;
      for (double x : *samples_) s += g(x);
      const double v = s.value() / static_cast<double>(samples_->size());
      if (!std::isfinite(v)) throw ComputationError("expectation: non-finite sample average");
      return v;
    }

    quad::Result r;
    if (kind_ == DistributionKind::normal) {
      const double m = p1_, s = p2_;
      auto f = [&](double x) {
        const double z = (x - m) / s;
        const double w = std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
        return w == 0.0 ? 0.0 : g(x) * w;
      };
      r = quad::integrate_real_line(f, m, s, req.rel_tol);
    } else {
      // Integrate over t = log x, where every positive family is smooth.
      const auto [center, scale] = log_scale_hint();
      auto f = [&](double t) {
        const double w = std::exp(log_density_of_log(t));
        const double x = std::exp(t);
        // Nodes where x under- or overflows carry no representable mass.
        if (w == 0.0 || x == 0.0 || std::isinf(x)) return 0.0;
        return g(x) * w;
      };
      r = quad::integrate_real_line(f, center, scale, req.rel_tol);
    }
    if (!r.converged) {
      throw ComputationError("expectation: quadrature did not converge (error estimate " +
                                 format_number(r.error) + ", value " +
                                 format_number(r.value) + ")",
                             std::nullopt, r.error);
    }
    return r.value;
  }

  /// Exact log(E X) - E{log X} where a closed form is known.
  std::optional<double> exact_log_gap() const {
    switch (kind_) {
      case DistributionKind::lognormal: return 0.5 * p2_ * p2_;
      case DistributionKind::gamma: return special::log_minus_digamma(p1_);
      // Gamma(1, 1/rate): log 1 - psi(1) = Euler's constant.
      case DistributionKind::exponential: return special::euler_gamma;
      default: return std::nullopt;
    }
  }

  /// Distribution of cX for c > 0.
  MomentProvider scaled(double c) const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ArgumentError("scaled: c must be positive");
    switch (kind_) {
      case DistributionKind::gamma: return gamma(p1_, p2_ * c);
      case DistributionKind::lognormal: return lognormal(p1_ + std::log(c), p2_);
      case DistributionKind::exponential: return exponential(p1_ / c);
      case DistributionKind::normal: return normal(p1_ * c, p2_ * c);
      case DistributionKind::empirical: {
        std::vector<double> xs = *samples_;
        for (double& x : xs) x *= c;
        return empirical(std::move(xs));
      }
    }
    throw ArgumentError("scaled: unknown kind");
  }

  MetaList describe() const {
    MetaList m{{"dist", to_string(kind_)}};
    switch (kind_) {
      case DistributionKind::gamma:
        m.emplace_back("shape", format_number(p1_));
        m.emplace_back("scale", format_number(p2_));
        break;
      case DistributionKind::lognormal:
        m.emplace_back("mu", format_number(p1_));
        m.emplace_back("sigma", format_number(p2_));
        break;
      case DistributionKind::exponential:
        m.emplace_back("rate", format_number(p1_));
        break;
      case DistributionKind::normal:
        m.emplace_back("mean", format_number(p1_));
        m.emplace_back("sd", format_number(p2_));
        break;
      case DistributionKind::empirical:
        m.emplace_back("samples", std::to_string(samples_->size()));
        break;
    }
    return m;
  }

 private:
  MomentProvider(DistributionKind kind, double p1, double p2, std::vector<double> samples)
      : kind_(kind), p1_(p1), p2_(p2) {
    if (kind_ == DistributionKind::empirical) {
      samples_ = std::make_shared<const std::vector<double>>(std::move(samples));
    }
    for (int j = -max_order; j <= max_order; ++j) {
      raw_[static_cast<std::size_t>(j + max_order)] = compute_raw(j);
    }
    mean_ = raw_[max_order + 1].value;
    for (int i = 1; i <= max_order; ++i) central_[static_cast<std::size_t>(i)] = compute_central(i);
  }

  static void check_order(int j, int lo) {
    if (j < lo || j > max_order) {
      throw ArgumentError("moment order " + std::to_string(j) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(max_order) + "]");
    }
  }

  Moment compute_raw(int j) const {
    if (j == 0) return Moment::of(1.0);
    switch (kind_) {
      case DistributionKind::gamma: return gamma_raw(p1_, p2_, j);
      case DistributionKind::exponential: return gamma_raw(1.0, 1.0 / p1_, j);
      case DistributionKind::lognormal:
        return Moment::of(std::exp(j * p1_ + 0.5 * j * j * p2_ * p2_));
      case DistributionKind::normal: {
        if (j < 0) return Moment::none();
        // E Y^q = m E Y^{q-1} + (q-1) s^2 E Y^{q-2}
        double prev = 1.0, cur = p1_;
        for (int q = 2; q <= j; ++q) {
          const double next = p1_ * cur + (q - 1) * p2_ * p2_ * prev;
          prev = cur;
          cur = next;
        }
        return Moment::of(cur);
      }
      case DistributionKind::empirical: {
        const auto& xs = *samples_;
        if (j < 0 && std::find(xs.begin(), xs.end(), 0.0) != xs.end()) return Moment::none();
        CompensatedSum s;
        for (double x : xs) s += std::pow(x, j);
        const bool risky =
            j < 0 && *std::min_element(xs.begin(), xs.end()) < negative_moment_guard;
        const double v = s.value() / static_cast<double>(xs.size());
        if (!std::isfinite(v)) return Moment::none();
        return Moment::of(v, risky);
      }
    }
    return Moment::none();
  }

  // E X^j = theta^j Gamma(a+j)/Gamma(a) for j > -a, as a rising/falling
  // factorial so that no Gamma ratio can overflow.
  static Moment gamma_raw(double a, double theta, int j) {
    if (j > 0) {
      double r = 1.0;
      for (int i = 0; i < j; ++i) r *= theta * (a + i);
      return Moment::of(r);
    }
    if (a + j <= 0.0) return Moment::none();
    double r = 1.0;
    for (int i = 1; i <= -j; ++i) r *= theta * (a - i);
    return Moment::of(1.0 / r);
  }

  Moment compute_central(int i) const {
    if (kind_ == DistributionKind::empirical) {
      CompensatedSum s;
      for (double x : *samples_) s += std::pow(x - mean_, i);
      return Moment::of(s.value() / static_cast<double>(samples_->size()));
    }
    CompensatedSum s;
    double neg_m_pow = 1.0;  // (-m)^{i-j}, built from j = i downwards
    for (int j = i; j >= 0; --j) {
      const Moment& r = raw_[static_cast<std::size_t>(j + max_order)];
      if (!r.exists) return Moment::none();
      s += static_cast<double>(binomial(i, j)) * r.value * neg_m_pow;
      neg_m_pow *= -mean_;
    }
    return Moment::of(s.value());
  }

  // Density of T = log X for the positive analytic kinds.
  double log_density_of_log(double t) const {
    switch (kind_) {
      case DistributionKind::lognormal: {
        const double z = (t - p1_) / p2_;
        return -0.5 * z * z - std::log(p2_) - 0.5 * std::log(2.0 * std::numbers::pi);
      }
      case DistributionKind::gamma:
        return p1_ * t - std::exp(t) / p2_ - special::lgamma(p1_) - p1_ * std::log(p2_);
      case DistributionKind::exponential:
        return t - std::exp(t) * p1_ + std::log(p1_);
      default: return -std::numeric_limits<double>::infinity();
    }
  }

  std::pair<double, double> log_scale_hint() const {
    switch (kind_) {
      case DistributionKind::lognormal: return {p1_, p2_};
      case DistributionKind::gamma:
        return {std::log(p2_) + special::digamma(p1_), std::sqrt(1.0 / p1_ + 1.0 / (p1_ * p1_))};
      case DistributionKind::exponential:
        return {-special::euler_gamma - std::log(p1_), std::numbers::pi / std::sqrt(6.0)};
      default: return {0.0, 1.0};
    }
  }

  DistributionKind kind_;
  double p1_ = 0.0;
  double p2_ = 0.0;
  std::shared_ptr<const std::vector<double>> samples_;
  double mean_ = 0.0;
  std::array<Moment, 2 * max_order + 1> raw_{};
  std::array<Moment, max_order + 1> central_{};
};

}  // namespace jensen

#endif  // JENSEN_DISTRIBUTIONS_HPP
