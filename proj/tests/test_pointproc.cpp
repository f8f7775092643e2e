#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "exceed/error.hpp"
#include "exceed/gaussian.hpp"
#include "exceed/pointproc.hpp"
#include "exceed/scaling.hpp"

using namespace exceed;

TEST(ScalePath, Examples) {
  GaussianPath g;
  g.values = {1.0, -2.0};
  g.n = 2;
  const std::vector<double> s{0.5, 2.0};
  EXPECT_EQ(scale_path(g, s).values, (std::vector<double>{0.5, -4.0}));
  const std::vector<double> ones{1.0, 1.0};
  EXPECT_EQ(scale_path(g, ones).values, g.values);
  const std::vector<double> zeros{0.0, 0.0};
  const auto z = scale_path(g, zeros);
  EXPECT_TRUE(extract(z, 1e-9, 1e-9).upper.empty());
  EXPECT_TRUE(extract(z, 1e-9, 1e-9).lower.empty());
  const std::vector<double> short_scales{1.0};
  EXPECT_THROW(scale_path(g, short_scales), LengthMismatch);
}

TEST(Extract, Example) {
  const std::vector<double> y{2.0, -3.0, 0.5};
  const auto p = extract(y, 1.5, 2.5);
  EXPECT_EQ(p.upper, (std::vector<std::size_t>{1}));
  EXPECT_EQ(p.lower, (std::vector<std::size_t>{2}));
  EXPECT_EQ(p.positions(Mark::kUpper), (std::vector<double>{1.0 / 3.0}));
  EXPECT_EQ(p.positions(Mark::kLower), (std::vector<double>{2.0 / 3.0}));
  const auto empty = extract(y, INFINITY, INFINITY);
  EXPECT_TRUE(empty.upper.empty() && empty.lower.empty());
}

TEST(Extract, StrictInequality) {
  const std::vector<double> y{1.0, -1.0};
  const auto p = extract(y, 1.0, 1.0);
  EXPECT_TRUE(p.upper.empty());
  EXPECT_TRUE(p.lower.empty());
}

TEST(Extract, FlipSwapsMarks) {
  const auto g = sample_path(CorrelationModel::geometric(0.5), 5000, 3, 1);
  std::vector<double> flipped(g.values.size());
  for (std::size_t i = 0; i < flipped.size(); ++i) flipped[i] = -g.values[i];
  const auto a = extract(g.values, 1.7, 2.1);
  const auto b = extract(flipped, 2.1, 1.7);
  EXPECT_EQ(a.upper, b.lower);
  EXPECT_EQ(a.lower, b.upper);
}

TEST(Count, Examples) {
  const std::vector<double> y{2.0, -3.0, 0.5};
  const auto p = extract(y, 1.5, 2.5);
  EXPECT_EQ(count(p, Mark::kUpper, 0.0, 1.0), 1u);
  EXPECT_EQ(count(p, Mark::kUpper, 0.4, 0.4), 0u);
  EXPECT_THROW(count(p, Mark::kUpper, 0.5, 0.4), ConfigError);
}

TEST(Count, AdditivityAndRescan) {
  const auto g = sample_path(CorrelationModel::geometric(0.5), 10007, 8, 0);
  const double u = 2.0;
  const auto p = extract(g.values, u, u);
  for (const Mark mark : {Mark::kUpper, Mark::kLower}) {
    std::size_t naive = 0;
    for (const double v : g.values) naive += (mark == Mark::kUpper ? v > u : -v > u) ? 1 : 0;
    EXPECT_EQ(count(p, mark, 0.0, 1.0), naive);
    const double cuts[] = {0.0, 0.13, 0.5, 0.77, 1.0};
    std::size_t total = 0;
    for (int i = 0; i < 4; ++i) total += count(p, mark, cuts[i], cuts[i + 1]);
    EXPECT_EQ(total, naive);
  }
}

TEST(OrderStats, Examples) {
  const std::vector<double> y{3.0, 1.0, 2.0};
  const auto o = order_stats(y, 2, 1);
  EXPECT_EQ(o.kth_max, 2.0);
  EXPECT_EQ(o.lth_min, 1.0);
  const std::vector<double> ties{1.0, 1.0, 0.0};
  EXPECT_EQ(order_stats(ties, 2, 1).kth_max, 1.0);
  EXPECT_EQ(order_stats(ties, 3, 3).kth_max, 0.0);
  EXPECT_EQ(order_stats(ties, 3, 3).lth_min, 1.0);
  EXPECT_THROW(order_stats(y, 0, 1), OutOfRange);
  EXPECT_THROW(order_stats(y, 1, 4), OutOfRange);
}

TEST(OrderStats, SmallAndLargeRanksAgree) {
  const auto g = sample_path(CorrelationModel::geometric(0.2), 3000, 1, 0);
  std::vector<double> sorted = g.values;
  std::sort(sorted.begin(), sorted.end());
  for (const std::size_t k : {1u, 2u, 5u, 8u, 9u, 40u, 3000u}) {
    const auto o = order_stats(g.values, k, k);
    EXPECT_EQ(o.kth_max, sorted[sorted.size() - k]);
    EXPECT_EQ(o.lth_min, sorted[k - 1]);
  }
  const auto o = order_stats(g.values, 1, 1);
  EXPECT_EQ(o.kth_max, *std::max_element(g.values.begin(), g.values.end()));
  EXPECT_EQ(o.lth_min, *std::min_element(g.values.begin(), g.values.end()));
}

TEST(OrderStats, CountDuality) {
  const auto g = sample_path(CorrelationModel::geometric(0.5), 4000, 2, 3);
  const auto s = sample_scales(ScaleDistribution::weibullian(1, 1, 0, 1), 4000, 2, 3);
  const auto y = scale_path(g, s);
  for (const std::size_t k : {1u, 2u, 3u, 10u}) {
    const auto o = order_stats(y.values, k, k);
    for (const double u : {0.5, 2.0, 5.0, 8.0, 12.0, o.kth_max, std::nextafter(-o.lth_min, 1e300)}) {
      const auto p = extract(y, u, u);
      EXPECT_EQ(o.kth_max <= u, count(p, Mark::kUpper, 0, 1) <= k - 1);
      EXPECT_EQ(o.lth_min > -u, count(p, Mark::kLower, 0, 1) <= k - 1);
    }
  }
}

TEST(Pattern, Csv) {
  const std::vector<double> y{2.0, -3.0, 0.5, 4.0};
  std::ostringstream out;
  write_pattern_csv(out, extract(y, 1.5, 2.5));
  EXPECT_EQ(out.str(), "position,mark\n0.25,1\n0.5,2\n1,1\n");
}
