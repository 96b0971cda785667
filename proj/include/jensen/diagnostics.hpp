#ifndef JENSEN_DIAGNOSTICS_HPP
#define JENSEN_DIAGNOSTICS_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "jensen/error.hpp"
#include "jensen/summation.hpp"

namespace jensen {

/// Standard normal quantile: Acklam's rational approximation followed by one
/// Halley step against erfc, giving close to full double precision.
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw ArgumentError("normal_quantile: p outside [0, 1]");
  }
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

struct NormalityDiagnostics {
  /// Bias-corrected sample skewness (G1).
  double skewness = 0.0;
  /// Bias-corrected sample excess kurtosis (G2).
  double excess_kurtosis = 0.0;
  /// Pearson correlation of the Q-Q point cloud.
  double qq_correlation = 1.0;
  /// Zero spread: skewness and kurtosis are undefined and reported as 0.
  bool degenerate = false;
  /// (standard normal quantile at (r - 0.5)/m, r-th smallest standardised value).
  std::vector<std::pair<double, double>> qq_points;
};

/// Gaussianity summary of a sample (used on log of n-sample means).
inline NormalityDiagnostics normality_diagnostics(std::span<const double> xs) {
  const std::size_t m = xs.size();
  if (m < 8) throw ArgumentError("normality_diagnostics: need at least 8 samples");
  const double n = static_cast<double>(m);
  const double mean = compensated_mean(xs);
  CompensatedSum s2, s3, s4;
  for (double x : xs) {
    const double d = x - mean;
    const double d2 = d * d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  const double m2 = s2.value() / n, m3 = s3.value() / n, m4 = s4.value() / n;
  const double sd = std::sqrt(s2.value() / (n - 1.0));

  NormalityDiagnostics out;
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  out.qq_points.reserve(m);

  if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
    out.degenerate = true;
    out.qq_correlation = 1.0;
    for (std::size_t r = 0; r < m; ++r) {
      out.qq_points.emplace_back(normal_quantile((r + 0.5) / n), 0.0);
    }
    return out;
  }

  const double g1 = m3 / std::pow(m2, 1.5);
  const double g2 = m4 / (m2 * m2) - 3.0;
  out.skewness = g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
  out.excess_kurtosis = (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0);

  for (std::size_t r = 0; r < m; ++r) {
    out.qq_points.emplace_back(normal_quantile((r + 0.5) / n), (sorted[r] - mean) / sd);
  }
  CompensatedSum sx, sy;
  for (const auto& [q, z] : out.qq_points) {
    sx += q;
    sy += z;
  }
  const double mx = sx.value() / n, my = sy.value() / n;
  CompensatedSum sxy, sxx, syy;
  for (const auto& [q, z] : out.qq_points) {
    sxy += (q - mx) * (z - my);
    sxx += (q - mx) * (q - mx);
    syy += (z - my) * (z - my);
  }
  out.qq_correlation = std::clamp(sxy.value() / std::sqrt(sxx.value() * syy.value()), -1.0, 1.0);
  return out;
}

}  // namespace jensen

#endif  // JENSEN_DIAGNOSTICS_HPP
