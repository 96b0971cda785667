#ifndef JENSEN_SPECIAL_FUNCTIONS_HPP
#define JENSEN_SPECIAL_FUNCTIONS_HPP

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "jensen/error.hpp"
#include "jensen/summation.hpp"

namespace jensen::special {

namespace detail {

// Godfrey's coefficients, g = 7, n = 9.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_coef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Asymptotic tail of log(x) - digamma(x) without the leading 1/(2x):
// sum_n B_2n / (2n x^2n).
inline double log_minus_digamma_tail(double x) noexcept {
  const double r = 1.0 / (x * x);
  // B2/2, B4/4, ..., B16/16
  constexpr std::array<double, 8> c = {1.0 / 12.0,        -1.0 / 120.0,
                                       1.0 / 252.0,       -1.0 / 240.0,
                                       1.0 / 132.0,       -691.0 / 32760.0,
                                       1.0 / 12.0,        -3617.0 / 8160.0};
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * r + *it;
  return acc * r;
}

inline constexpr double asymptotic_threshold = 10.0;

}  // namespace detail

/// log|Gamma(x)| via the Lanczos approximation (reflection below 0.5).
inline double lgamma(double x) {
  using std::numbers::pi;
  if (x <= 0.0 && std::floor(x) == x) {
    return std::numeric_limits<double>::infinity();
  }
  if (x < 0.5) {
    // Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return std::log(pi / std::abs(std::sin(pi * x))) - lgamma(1.0 - x);
  }
  const double z = x - 1.0;
  double a = detail::lanczos_coef[0];
  for (std::size_t i = 1; i < detail::lanczos_coef.size(); ++i) {
    a += detail::lanczos_coef[i] / (z + static_cast<double>(i));
  }
  const double t = z + detail::lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

/// Digamma psi(x): upward recurrence into the asymptotic region.
inline double digamma(double x) {
  using std::numbers::pi;
  if (x <= 0.0 && std::floor(x) == x) {
    throw ArgumentError("digamma: pole at nonpositive integer");
  }
  if (x < 0.0) {
    // psi(1-x) - psi(x) = pi cot(pi x)
    return digamma(1.0 - x) - pi / std::tan(pi * x);
  }
  CompensatedSum shift;
  while (x < detail::asymptotic_threshold) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  shift += std::log(x) - 0.5 / x - detail::log_minus_digamma_tail(x);
  return shift.value();
}

/// log(a) - psi(a) for a > 0, without the cancellation of computing the two
/// terms separately at large a. This is the exact Jensen gap of -log for a
/// Gamma(a, theta) variable.
inline double log_minus_digamma(double a) {
  if (!(a > 0.0)) throw ArgumentError("log_minus_digamma: requires a > 0");
  if (a >= detail::asymptotic_threshold) {
    return 0.5 / a + detail::log_minus_digamma_tail(a);
  }
  // log a - psi(a) = log(a / (a+N)) + [log(a+N) - psi(a+N)] + sum 1/(a+i)
  CompensatedSum s;
  double x = a;
  while (x < detail::asymptotic_threshold) {
    s += 1.0 / x;
    x += 1.0;
  }
  s += std::log(a / x);
  s += 0.5 / x + detail::log_minus_digamma_tail(x);
  return s.value();
}

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

}  // namespace jensen::special

#endif  // JENSEN_SPECIAL_FUNCTIONS_HPP
