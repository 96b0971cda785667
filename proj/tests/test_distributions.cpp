#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "jensen/coefficients.hpp"
#include "jensen/distributions.hpp"
#include "jensen/error.hpp"
#include "jensen/random.hpp"

using namespace jensen;

namespace {

double quad_moment(const MomentProvider& mp, int j) {
  return mp.expectation({[j](double x) { return std::pow(x, j); }, {}, 1e-10});
}

std::vector<MomentProvider> analytic_providers() {
  return {MomentProvider::gamma(3.0, 2.0), MomentProvider::gamma(7.5, 0.4),
          MomentProvider::lognormal(0.3, 0.7), MomentProvider::lognormal(-1.0, 0.25),
          MomentProvider::exponential(1.0), MomentProvider::exponential(2.5),
          MomentProvider::normal(5.0, 2.0), MomentProvider::normal(0.0, 1.0)};
}

}  // namespace

TEST(RawMoment, Examples) {
  EXPECT_NEAR(MomentProvider::lognormal(0.0, 1.0).raw_moment(2).value, std::exp(2.0), 1e-13);
  EXPECT_NEAR(MomentProvider::gamma(3.0, 1.0).raw_moment(-1).value, 0.5, 1e-15);
  for (const auto& mp : analytic_providers()) EXPECT_EQ(mp.raw_moment(0).value, 1.0);
}

TEST(RawMoment, GammaClosedForm) {
  const double a = 4.3, theta = 1.7;
  const auto mp = MomentProvider::gamma(a, theta);
  for (int j = -4; j <= 15; ++j) {
    const double expect = std::exp(j * std::log(theta) + std::lgamma(a + j) - std::lgamma(a));
    EXPECT_NEAR(mp.raw_moment(j).value / expect, 1.0, 1e-12) << j;
  }
}

TEST(RawMoment, GammaNonexistenceExactlyWhenOrderReachesShape) {
  const auto mp = MomentProvider::gamma(3.0, 1.0);
  EXPECT_TRUE(mp.raw_moment(-2).exists);
  EXPECT_FALSE(mp.raw_moment(-3).exists);
  EXPECT_FALSE(mp.raw_moment(-4).exists);
  EXPECT_TRUE(std::isinf(mp.raw_moment(-3).value));
  const auto frac = MomentProvider::gamma(2.5, 1.0);
  EXPECT_TRUE(frac.raw_moment(-2).exists);
  EXPECT_FALSE(frac.raw_moment(-3).exists);
}

TEST(RawMoment, LognormalClosedForm) {
  const auto mp = MomentProvider::lognormal(0.3, 0.7);
  for (int j = -15; j <= 15; ++j) {
    EXPECT_NEAR(std::log(mp.raw_moment(j).value), j * 0.3 + 0.5 * j * j * 0.49, 1e-12) << j;
  }
}

TEST(RawMoment, RejectsOrderBeyondCap) {
  EXPECT_THROW(MomentProvider::gamma(3.0).raw_moment(16), ArgumentError);
  EXPECT_THROW(MomentProvider::gamma(3.0).raw_moment(-16), ArgumentError);
}

TEST(RawMoment, QuadratureAgreesWithClosedForm) {
  for (const auto& mp : analytic_providers()) {
    for (int j = -5; j <= 5; ++j) {
      const Moment m = mp.raw_moment(j);
      if (!m.exists || (j < 0 && !mp.strictly_positive())) continue;
      const double q = quad_moment(mp, j);
      EXPECT_NEAR(q, m.value, 1e-9 * std::abs(m.value) + 1e-12)
          << to_string(mp.kind()) << " j=" << j;
    }
  }
}

TEST(CentralMoment, Examples) {
  EXPECT_NEAR(MomentProvider::normal(5.0, 2.0).central_moment(2).value, 4.0, 1e-12);
  EXPECT_NEAR(MomentProvider::exponential(1.0).central_moment(3).value, 2.0, 1e-12);
  for (const auto& mp : analytic_providers()) {
    EXPECT_NEAR(mp.central_moment(1).value, 0.0, 1e-12) << to_string(mp.kind());
  }
}

TEST(CentralMoment, NewtonFormulaMatchesQuadrature) {
  for (const auto& mp : analytic_providers()) {
    const double m = mp.mean();
    for (int i = 2; i <= 7; ++i) {
      const double q =
          mp.expectation({[m, i](double x) { return std::pow(x - m, i); }, {}, 1e-11});
      const double n = mp.central_moment(i).value;
      EXPECT_NEAR(n, q, 1e-8 * std::max(std::abs(q), mp.central_moment(2).value * 1e-3))
          << to_string(mp.kind()) << " i=" << i;
    }
  }
}

TEST(CentralMoment, NormalOddVanishAndEvenDoubleFactorial) {
  const auto mp = MomentProvider::normal(3.0, 1.0);
  EXPECT_NEAR(mp.central_moment(3).value, 0.0, 1e-9);
  EXPECT_NEAR(mp.central_moment(4).value, 3.0, 1e-9);
  EXPECT_NEAR(mp.central_moment(6).value, 15.0, 1e-8);
}

TEST(Expectation, ExponentialMixedTerm) {
  // E{(1/2)^i e^{X/2} X^{i-j}} = (1/2)^{j-1} (i-j)! for X ~ Exponential(1).
  const auto mp = MomentProvider::exponential(1.0);
  for (int i = 1; i <= 5; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double v = mp.expectation(
          {[i, j](double x) { return std::pow(0.5, i) * std::exp(0.5 * x) * std::pow(x, i - j); },
           {},
           1e-11});
      const double expect = std::pow(0.5, j - 1) * static_cast<double>(factorial(i - j));
      EXPECT_NEAR(v, expect, 1e-10 * expect) << i << "," << j;
    }
  }
}

TEST(Expectation, NormalExpTiltedMoments) {
  // E{e^X X^r} = sqrt(e) E Y^r with Y ~ Normal(1, 1); E Y^r known in closed form.
  const auto mp = MomentProvider::normal(0.0, 1.0);
  const double ey[] = {1.0, 1.0, 2.0, 4.0, 10.0, 26.0, 76.0};
  for (int r = 0; r <= 6; ++r) {
    const double v =
        mp.expectation({[r](double x) { return std::exp(x) * std::pow(x, r); }, {}, 1e-11});
    EXPECT_NEAR(v, std::sqrt(std::numbers::e) * ey[r], 1e-10 * ey[r]) << r;
  }
}

TEST(Expectation, ConstantIntegrandIsOne) {
  for (const auto& mp : analytic_providers()) {
    EXPECT_NEAR(mp.expectation({[](double) { return 1.0; }, {}, 1e-10}), 1.0, 1e-10);
  }
}

TEST(Expectation, RejectsBadTolerance) {
  const auto mp = MomentProvider::gamma(2.0);
  EXPECT_THROW(mp.expectation({[](double) { return 1.0; }, {}, 0.0}), ArgumentError);
  EXPECT_THROW(mp.expectation({[](double) { return 1.0; }, {}, 0.1}), ArgumentError);
}

TEST(Expectation, RejectsDomainNotCoveringSupport) {
  const auto mp = MomentProvider::normal(0.0, 1.0);
  EXPECT_THROW(mp.expectation({[](double x) { return std::log(x); }, {0.0, INFINITY}, 1e-8}),
               ArgumentError);
}

TEST(ExactLogGap, Examples) {
  EXPECT_NEAR(*MomentProvider::lognormal(2.0, 0.8).exact_log_gap(), 0.32, 1e-15);
  EXPECT_NEAR(*MomentProvider::gamma(1.0, 1.0).exact_log_gap(), 0.57721566490153286, 1e-15);
  EXPECT_NEAR(*MomentProvider::exponential(3.0).exact_log_gap(), 0.57721566490153286, 1e-15);
  EXPECT_NEAR(*MomentProvider::lognormal(-5.0, 1e-6).exact_log_gap(), 0.0, 1e-12);
  EXPECT_FALSE(MomentProvider::normal(0.0, 1.0).exact_log_gap());
  EXPECT_FALSE(MomentProvider::empirical({1.0, 2.0}).exact_log_gap());
}

TEST(ExactLogGap, MatchesQuadratureOfLog) {
  for (const auto& mp : {MomentProvider::gamma(0.7, 3.0), MomentProvider::lognormal(0.1, 0.9),
                         MomentProvider::exponential(0.5)}) {
    const double elog = mp.expectation({[](double x) { return std::log(x); }, {0.0, INFINITY}, 1e-11});
    EXPECT_NEAR(std::log(mp.mean()) - elog, *mp.exact_log_gap(), 1e-9) << to_string(mp.kind());
  }
}

TEST(Empirical, ConvergesToClosedForm) {
  Rng rng = make_stream(11, 1);
  LognormalSampler s{0.0, 0.5};
  std::vector<double> xs(1'000'000);
  for (double& x : xs) x = s(rng);
  const auto mp = MomentProvider::empirical(xs);
  EXPECT_NEAR(mp.raw_moment(2).value / std::exp(0.5), 1.0, 0.01);
}

TEST(Empirical, NegativeMomentsFlagged) {
  const auto with_zero = MomentProvider::empirical({0.0, 1.0, 2.0});
  EXPECT_FALSE(with_zero.raw_moment(-1).exists);
  const auto tiny = MomentProvider::empirical({1e-13, 1.0, 2.0});
  EXPECT_TRUE(tiny.raw_moment(-1).exists);
  EXPECT_TRUE(tiny.raw_moment(-1).high_variance);
  EXPECT_FALSE(tiny.raw_moment(1).high_variance);
  const auto fine = MomentProvider::empirical({0.5, 1.0, 2.0});
  EXPECT_FALSE(fine.raw_moment(-1).high_variance);
  EXPECT_NEAR(fine.raw_moment(-1).value, (2.0 + 1.0 + 0.5) / 3.0, 1e-15);
}

TEST(Empirical, CentralMomentsArePlainAverages) {
  const auto mp = MomentProvider::empirical({1.0, 2.0, 3.0, 6.0});
  EXPECT_NEAR(mp.mean(), 3.0, 1e-15);
  EXPECT_NEAR(mp.central_moment(2).value, (4.0 + 1.0 + 0.0 + 9.0) / 4.0, 1e-14);
  EXPECT_NEAR(mp.central_moment(3).value, (-8.0 - 1.0 + 0.0 + 27.0) / 4.0, 1e-13);
}

TEST(Factories, RejectInvalidParameters) {
  EXPECT_THROW(MomentProvider::gamma(0.0), ArgumentError);
  EXPECT_THROW(MomentProvider::gamma(1.0, -1.0), ArgumentError);
  EXPECT_THROW(MomentProvider::lognormal(0.0, 0.0), ArgumentError);
  EXPECT_THROW(MomentProvider::exponential(-2.0), ArgumentError);
  EXPECT_THROW(MomentProvider::normal(0.0, 0.0), ArgumentError);
  EXPECT_THROW(MomentProvider::empirical({}), ArgumentError);
}

TEST(SampleFile, ParsesCommentsAndBlanks) {
  std::istringstream in("# header\n1.5\n\n  2.25 \n# more\n3e-1\n");
  const auto xs = read_samples(in);
  ASSERT_EQ(xs.size(), 3u);
  EXPECT_EQ(xs[0], 1.5);
  EXPECT_EQ(xs[1], 2.25);
  EXPECT_EQ(xs[2], 0.3);
}

TEST(SampleFile, ReportsBadLine) {
  std::istringstream in("1.0\n2.0\nabc\n");
  try {
    read_samples(in);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_EQ(e.index(), 3u);
  }
}
