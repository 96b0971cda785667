#include <gtest/gtest.h>

#include <cmath>

#include "jensen/coefficients.hpp"
#include "jensen/error.hpp"
#include "jensen/summation.hpp"

using namespace jensen;

TEST(BoundOrder, RejectsOutOfRange) {
  EXPECT_THROW(BoundOrder{0}, ArgumentError);
  EXPECT_THROW(BoundOrder{9}, ArgumentError);
  EXPECT_EQ(BoundOrder{8}.max_moment(), 15);
  EXPECT_EQ(BoundOrder{1}.max_moment(), 1);
}

TEST(CoeffA, Examples) {
  EXPECT_EQ(coeff_a(1, 0), 1.0);
  EXPECT_EQ(coeff_a(2, 1), -1.0);
  EXPECT_EQ(coeff_a(3, 2), 0.5);
}

TEST(CoeffA, ScaledByFactorialsIsSign) {
  for (int i = 1; i <= max_moment_order; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double scaled = coeff_a(i, j) * static_cast<double>(factorial(j)) *
                            static_cast<double>(factorial(i - j));
      EXPECT_NEAR(scaled, j % 2 == 0 ? 1.0 : -1.0, 1e-15) << i << "," << j;
    }
  }
}

TEST(CoeffA, RejectsBadIndices) {
  EXPECT_THROW(coeff_a(0, 0), ArgumentError);
  EXPECT_THROW(coeff_a(3, 4), ArgumentError);
  EXPECT_THROW(coeff_a(3, -1), ArgumentError);
  EXPECT_THROW(coeff_a(16, 0), ArgumentError);
}

TEST(CoeffB, Examples) {
  EXPECT_EQ(coeff_b(BoundOrder{1}, 1), -1.0);
  EXPECT_EQ(coeff_b(BoundOrder{2}, 2), 1.5);
  EXPECT_DOUBLE_EQ(coeff_b(BoundOrder{2}, 3), -1.0 / 3.0);
  EXPECT_THROW(coeff_b(BoundOrder{2}, 0), ArgumentError);
  EXPECT_THROW(coeff_b(BoundOrder{2}, 4), ArgumentError);
}

TEST(CoeffB, TableMatchesScalarAccessors) {
  const auto t = coefficient_table(BoundOrder{4});
  ASSERT_EQ(t.b.size(), 8u);
  for (int j = 1; j <= 7; ++j) EXPECT_EQ(t.b[j], coeff_b(BoundOrder{4}, j));
  ASSERT_EQ(t.a.size(), 8u);
  for (int i = 1; i <= 7; ++i) {
    ASSERT_EQ(t.a[i].size(), static_cast<std::size_t>(i + 1));
    for (int j = 0; j <= i; ++j) EXPECT_EQ(t.a[i][j], coeff_a(i, j));
  }
}

TEST(HarmonicIdentity, HoldsForEveryOrder) {
  for (int k = 1; k <= BoundOrder::max_value; ++k) {
    EXPECT_NEAR(harmonic_minus_b_identity(BoundOrder{k}), 0.0, 1e-12) << "k=" << k;
  }
  EXPECT_EQ(harmonic_minus_b_identity(BoundOrder{1}), 0.0);
}

TEST(TelescopedSum, MatchesDirectSum) {
  const BoundOrder k{3};
  const double r = 1.2;
  CompensatedSum direct;
  for (int j = 1; j <= 5; ++j) direct += 1.0 / j + coeff_b(k, j) * std::pow(r, j);
  const double tele =
      telescoped_b_sum(k, [&](int j) { return std::expm1(j * std::log(r)); });
  EXPECT_NEAR(tele, direct.value(), 1e-13);
}

TEST(Summation, CompensatedBeatsNaive) {
  CompensatedSum s;
  s += 1.0;
  for (int i = 0; i < 1000; ++i) s += 1e-16;
  s -= 1.0;
  double naive = 1.0;
  for (int i = 0; i < 1000; ++i) naive += 1e-16;
  naive -= 1.0;
  EXPECT_EQ(naive, 0.0);
  EXPECT_NEAR(s.value(), 1e-13, 1e-25);
}
