#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "exceed/error.hpp"
#include "exceed/numeric.hpp"

using namespace exceed;

TEST(NormalTail, TableValues) {
  EXPECT_DOUBLE_EQ(normal_tail(0.0), 0.5);
  EXPECT_NEAR(normal_tail(1.6448536269514722), 0.05, 1e-15);
  EXPECT_NEAR(normal_tail(-1.959963984540054), 0.975, 1e-15);
}

TEST(NormalTail, DeepTailRelativeAccuracy) {
  // Mills-ratio series with enough terms to be exact to double precision at x = 37.
  const double x = 37.0;
  double series = 1.0, term = 1.0;
  for (int k = 1; k < 12; ++k) {
    term *= -(2.0 * k - 1.0) / (x * x);
    series += term;
  }
  const double log_expected = -0.5 * x * x - std::log(x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
  EXPECT_NEAR(std::log(normal_tail(x)) / log_expected, 1.0, 1e-15);
  EXPECT_GT(normal_tail(37.5), 0.0);
  EXPECT_LT(normal_tail(37.5), 1e-300);
}

TEST(NormalTail, InverseRoundTrip) {
  for (const double p : {0.5, 0.1, 1e-5, 1e-20, 1e-200, 0.999}) {
    const double x = normal_tail_inverse(p);
    EXPECT_NEAR(normal_tail(x) / p, 1.0, 1e-12) << p;
  }
  EXPECT_THROW(normal_tail_inverse(0.0), ConfigError);
  EXPECT_THROW(normal_tail_inverse(1.0), ConfigError);
}

TEST(FindRoot, SmoothAndKinked) {
  EXPECT_NEAR(find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(find_root([](double x) { return x < 1.0 ? -1.0 : x - 0.5; }, 0.0, 3.0), 1.0, 1e-12);
  EXPECT_NEAR(find_root([](double x) { return std::exp(x) - 1e-300; }, -800.0, 10.0), std::log(1e-300), 1e-9);
}

TEST(FindRoot, Errors) {
  EXPECT_THROW(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), NoBracket);
  EXPECT_THROW(find_root([](double x) { return std::tan(x) - 1e6; }, 0.0, 1.5707963, {1e-300, 0.0, 3}), NoConvergence);
}

TEST(CompensatedSum, RecoversCancellation) {
  CompensatedSum s;
  s.add(1.0);
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  EXPECT_EQ(s.value(), 2.0);
}

TEST(Quadrature, GaussianIntegral) {
  const auto r = integrate_segments([](double x) { return std::exp(-0.5 * x * x); }, {-40.0, -1.0, 0.0, 1.0, 40.0},
                                    1e-13, 0.0, "gauss");
  EXPECT_NEAR(r.value / std::sqrt(2.0 * std::numbers::pi), 1.0, 1e-13);
}

TEST(Quadrature, FailureIsReported) {
  EXPECT_THROW(integrate_segments([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); }, {0.0, 1.0}, 1e-15,
                                  0.0, "singular"),
               QuadratureFailure);
}
