#ifndef JENSEN_QUADRATURE_HPP
#define JENSEN_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "jensen/summation.hpp"

namespace jensen::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  /// Integral of |f|, the scale against which round-off is judged.
  double l1 = 0.0;
  int intervals = 0;
  bool converged = false;
};

namespace detail {

inline constexpr std::array<double, 8> kronrod_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights on the odd Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> gauss_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error, l1;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * kronrod_w[7];
  double g = fc * gauss_w[3];
  double l1 = std::abs(fc) * kronrod_w[7];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kronrod_x[i];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    k += kronrod_w[i] * (f1 + f2);
    l1 += kronrod_w[i] * (std::abs(f1) + std::abs(f2));
    if (i % 2 == 1) g += gauss_w[i / 2] * (f1 + f2);
  }
  return {a, b, k * h, std::abs((k - g) * h), l1 * std::abs(h)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
/// Converges when the summed error estimate drops below
/// max(rel_tol * |I|, 50 eps * integral |f|).
template <class F>
Result integrate(F&& f, double a, double b, double rel_tol,
                 int max_intervals = 4000, int initial_pieces = 16) {
  std::priority_queue<detail::Segment> heap;
  const double w = (b - a) / initial_pieces;
  for (int p = 0; p < initial_pieces; ++p) {
    heap.push(detail::gauss_kronrod_15(f, a + p * w,
                                       p + 1 == initial_pieces ? b : a + (p + 1) * w));
  }
  auto totals = [&heap]() {
    CompensatedSum v, e, l;
    auto copy = heap;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      l += copy.top().l1;
      copy.pop();
    }
    return std::array<double, 3>{v.value(), e.value(), l.value()};
  };

  double value = 0.0, error = 0.0, l1 = 0.0;
  {
    auto t = totals();
    value = t[0];
    error = t[1];
    l1 = t[2];
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto done = [&] {
    return error <= std::max(rel_tol * std::abs(value), 50.0 * eps * l1);
  };
  while (!done() && static_cast<int>(heap.size()) < max_intervals) {
    const auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    heap.push(left);
    heap.push(right);
    // Running totals drift; resum periodically for an exact picture.
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    if (heap.size() % 64 == 0) {
      auto t = totals();
      value = t[0];
      error = t[1];
      l1 = t[2];
    }
  }
  auto t = totals();
  Result r;
  r.value = t[0];
  r.error = t[1];
  r.l1 = t[2];
  r.intervals = static_cast<int>(heap.size());
  r.converged = std::isfinite(r.value) &&
                r.error <= std::max(rel_tol * std::abs(r.value), 50.0 * eps * r.l1);
  return r;
}

/// Integral of f over the real line through x = center + scale * u / (1 - u^2).
/// The integrand must vanish at +-infinity; f may return 0 where its own
/// weight underflows and is never called at the endpoints u = +-1.
template <class F>
Result integrate_real_line(F&& f, double center, double scale, double rel_tol,
                           int max_intervals = 4000) {
  auto mapped = [&](double u) {
    const double d = 1.0 - u * u;
    if (d <= 0.0) return 0.0;
    const double x = center + scale * u / d;
    const double jac = scale * (1.0 + u * u) / (d * d);
    const double fx = f(x);
    if (fx == 0.0) return 0.0;
    return fx * jac;
  };
  return integrate(mapped, -1.0, 1.0, rel_tol, max_intervals);
}

}  // namespace jensen::quad

#endif  // JENSEN_QUADRATURE_HPP
