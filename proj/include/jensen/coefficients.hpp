#ifndef JENSEN_COEFFICIENTS_HPP
#define JENSEN_COEFFICIENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "jensen/error.hpp"
#include "jensen/summation.hpp"

namespace jensen {

/// Expansion order k: the bounds use derivatives and moments up to 2k-1.
class BoundOrder {
 public:
  static constexpr int max_value = 8;

  explicit BoundOrder(int k) : k_(k) {
    if (k < 1 || k > max_value) {
      throw ArgumentError("bound order k must lie in [1, " +
                          std::to_string(max_value) + "], got " +
                          std::to_string(k));
    }
  }

  int value() const noexcept { return k_; }
  /// Highest moment order used, 2k - 1.
  int max_moment() const noexcept { return 2 * k_ - 1; }

  friend bool operator==(BoundOrder, BoundOrder) = default;

 private:
  int k_;
};

/// Highest moment order any bound may touch.
inline constexpr int max_moment_order = 2 * BoundOrder::max_value - 1;

// 15! < 2^63, so every factorial and binomial below the cap is exact.
constexpr std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

constexpr std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// a_{i,j} = (-1)^j / (j! (i-j)!).
inline double coeff_a(int i, int j) {
  if (i < 1 || i > max_moment_order || j < 0 || j > i) {
    throw ArgumentError("coeff_a: index (" + std::to_string(i) + ", " +
                        std::to_string(j) + ") out of range");
  }
  const double denom = static_cast<double>(factorial(j) * factorial(i - j));
  return (j % 2 == 0 ? 1.0 : -1.0) / denom;
}

/// b_{k,j} = ((-1)^j / j) C(2k-1, j).
inline double coeff_b(BoundOrder k, int j) {
  if (j < 1 || j > k.max_moment()) {
    throw ArgumentError("coeff_b: j = " + std::to_string(j) +
                        " outside [1, 2k-1]");
  }
  const double c = static_cast<double>(binomial(k.max_moment(), j));
  return (j % 2 == 0 ? c : -c) / static_cast<double>(j);
}

struct CoefficientTable {
  BoundOrder k;
  /// a[i][j] for 1 <= i <= 2k-1, 0 <= j <= i (row 0 unused).
  std::vector<std::vector<double>> a;
  /// b[j] for 1 <= j <= 2k-1 (entry 0 unused).
  std::vector<double> b;
};

inline CoefficientTable coefficient_table(BoundOrder k) {
  CoefficientTable t{k, {}, {}};
  const int n = k.max_moment();
  t.a.resize(n + 1);
  t.b.assign(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) {
    t.a[i].resize(i + 1);
    for (int j = 0; j <= i; ++j) t.a[i][j] = coeff_a(i, j);
    t.b[i] = coeff_b(k, i);
  }
  return t;
}

/// H_{2k-1} + sum_j b_{k,j}; identically zero. Exposed as a self-test hook.
inline double harmonic_minus_b_identity(BoundOrder k) {
  CompensatedSum s;
  for (int j = 1; j <= k.max_moment(); ++j) {
    s += 1.0 / static_cast<double>(j);
    s += coeff_b(k, j);
  }
  return s.value();
}

/// sum_{j=1}^{2k-1} b_{k,j} (r_j - 1) where r_j - 1 is supplied by `excess`.
/// Equal to sum_j [1/j + b_{k,j} r_j] via the harmonic identity, but keeps the
/// leading cancellation out of floating point.
template <class Excess>
double telescoped_b_sum(BoundOrder k, Excess&& excess) {
  CompensatedSum s;
  for (int j = 1; j <= k.max_moment(); ++j) s += coeff_b(k, j) * excess(j);
  return s.value();
}

}  // namespace jensen

#endif  // JENSEN_COEFFICIENTS_HPP
