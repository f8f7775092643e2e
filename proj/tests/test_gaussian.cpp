#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "exceed/error.hpp"
#include "exceed/gaussian.hpp"
#include "exceed/numeric.hpp"
#include "exceed/rng.hpp"
#include "exceed/stats.hpp"

using namespace exceed;

TEST(Gaussian, EmbeddingSize) {
  EXPECT_EQ(CirculantEmbedding(CorrelationModel::geometric(0.5), 1).info().circulant_size, 1u);
  EXPECT_EQ(CirculantEmbedding(CorrelationModel::geometric(0.5), 2).info().circulant_size, 2u);
  EXPECT_EQ(CirculantEmbedding(CorrelationModel::geometric(0.5), 1000).info().circulant_size, 2048u);
  EXPECT_EQ(CirculantEmbedding(CorrelationModel::geometric(0.5), 65536).info().circulant_size, 131072u);
}

TEST(Gaussian, GeometricEmbeddingIsPositive) {
  const auto info = CirculantEmbedding(CorrelationModel::geometric(0.5), 4096).info();
  EXPECT_EQ(info.method, "circulant");
  EXPECT_GT(info.min_eigenvalue, 0.0);
  EXPECT_EQ(info.clipped_count, 0u);
}

TEST(Gaussian, Reproducible) {
  const auto m = CorrelationModel::geometric(0.5);
  const auto a = sample_path(m, 1000, 11, 5);
  const auto b = sample_path(m, 1000, 11, 5);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, sample_path(m, 1000, 11, 4).values);
  EXPECT_NE(a.values, sample_path(m, 1000, 12, 5).values);
}

TEST(Gaussian, PairHalvesMatchStreams) {
  const CirculantEmbedding e(CorrelationModel::geometric(0.3), 300);
  auto ws = e.make_workspace();
  std::vector<double> first(300), second(300);
  e.sample_pair(4, 7, first, second, ws);
  EXPECT_EQ(e.sample(4, 14).values, first);
  EXPECT_EQ(e.sample(4, 15).values, second);
}

TEST(Gaussian, WhiteNoiseLagOne) {
  const std::size_t n = 100000;
  const auto p = sample_path(CorrelationModel::geometric(0.0), n, 3, 0);
  EXPECT_NEAR(sample_autocorrelation(p.values, 1), 0.0, 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Gaussian, GeometricLagOneSinglePath) {
  const std::size_t n = 65536;
  const auto p = sample_path(CorrelationModel::geometric(0.5), n, 3, 0);
  EXPECT_NEAR(sample_autocorrelation(p.values, 1), 0.5, 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST(Gaussian, LengthOneMarginal) {
  const CirculantEmbedding e(CorrelationModel::geometric(0.5), 1);
  auto ws = e.make_workspace();
  std::vector<double> a(1), b(1);
  CompensatedSum sum;
  const int R = 100000;
  for (int j = 0; j < R / 2; ++j) {
    e.sample_pair(1, j, a, b, ws);
    sum.add(a[0]);
    sum.add(b[0]);
  }
  EXPECT_NEAR(sum.value() / R, 0.0, 4.0 / std::sqrt(static_cast<double>(R)));
}

TEST(Gaussian, CorrelationFidelity) {
  // Average lags 1..5 over 100 paths; SE from the spread across paths.
  const auto m = CorrelationModel::geometric(0.5);
  const std::size_t n = 4096;
  const CirculantEmbedding e(m, n);
  auto ws = e.make_workspace();
  std::vector<double> a(n), b(n);
  std::vector<std::vector<double>> lags(6);
  for (int j = 0; j < 50; ++j) {
    e.sample_pair(8, j, a, b, ws);
    for (std::size_t k = 1; k <= 5; ++k) {
      double ca = 0.0, cb = 0.0;
      for (std::size_t i = 0; i + k < n; ++i) {
        ca += a[i] * a[i + k];
        cb += b[i] * b[i + k];
      }
      lags[k].push_back(ca / static_cast<double>(n - k));
      lags[k].push_back(cb / static_cast<double>(n - k));
    }
  }
  for (std::size_t k = 1; k <= 5; ++k) {
    const auto mv = mean_variance(lags[k]);
    const double se = std::sqrt(mv.variance / static_cast<double>(lags[k].size()));
    EXPECT_NEAR(mv.mean, m.rho(k), 4.0 * se) << "lag " << k;
  }
}

TEST(Gaussian, IidPathMarginals) {
  const std::size_t n = 1000000;
  const auto p = sample_iid_path(n, 21, 0);
  std::size_t above = 0;
  for (const double v : p.values) above += v > 1.6449 ? 1 : 0;
  const double target = normal_tail(1.6449);
  EXPECT_NEAR(static_cast<double>(above) / n, target, 3.0 * binomial_se(target, n));
  const auto mv = mean_variance(p.values);
  EXPECT_NEAR(mv.variance, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_EQ(sample_iid_path(3, 5, 1).values, sample_iid_path(3, 5, 1).values);
}

TEST(Gaussian, KolmogorovSmirnovOverSeeds) {
  // Every 8th value of a geometric path is nearly independent (rho = 2^-8).
  const auto m = CorrelationModel::geometric(0.5);
  const std::size_t n = 16384;
  const auto cdf = [](double x) { return 1.0 - normal_tail(x); };
  int failures = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = sample_path(m, n, 1000 + seed, 0);
    std::vector<double> thinned;
    for (std::size_t i = 0; i < n; i += 8) thinned.push_back(p.values[i]);
    failures += ks_statistic(thinned, cdf) > ks_critical_value(thinned.size(), 0.01) ? 1 : 0;
  }
  EXPECT_LE(failures, 1);
}

TEST(Gaussian, DenseReferenceAgreesInLaw) {
  const auto m = CorrelationModel::power(1.0, 0.6);
  const std::size_t n = 64;
  std::vector<double> lag1;
  for (std::uint64_t s = 0; s < 400; ++s) {
    const auto v = sample_path_dense(m, n, 2, s);
    double c = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) c += v[i] * v[i + 1];
    lag1.push_back(c / static_cast<double>(n - 1));
  }
  const auto mv = mean_variance(lag1);
  EXPECT_NEAR(mv.mean, m.rho(1), 4.0 * std::sqrt(mv.variance / 400.0));
}

TEST(Gaussian, NonPsdFallsBackOrThrows) {
  // m = 4 circulant of (1, 0.8, 0.533) has eigenvalue 1 - 1.6 + 0.533 < 0.
  const auto m = CorrelationModel::power(1.0, 1.6);
  const CirculantEmbedding small(m, 3);
  EXPECT_EQ(small.info().method, "dense");
  EXPECT_FALSE(small.info().warning.empty());
  EXPECT_LT(small.info().min_eigenvalue, 0.0);
  EXPECT_EQ(small.sample(1, 0).values.size(), 3u);
  EXPECT_EQ(CirculantEmbedding(CorrelationModel::power(0.2, 5.0), 512).info().method, "circulant");
  EXPECT_THROW(CirculantEmbedding(CorrelationModel::power(0.2, 5.0), 8192), EmbeddingNotPSD);
}

TEST(Gaussian, CsvHeader) {
  std::ostringstream out;
  write_path_csv(out, sample_path(CorrelationModel::geometric(0.5), 3, 1, 2));
  const auto text = out.str();
  EXPECT_NE(text.find("# model="), std::string::npos);
  EXPECT_NE(text.find("\nvalue\n"), std::string::npos);
}
