#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace exceed {

double poisson_pmf(std::uint64_t k, double lambda);

/// Standard error of a proportion estimated from `replications` draws.
double binomial_se(double p, std::size_t replications);

struct ChiSquareBin {
  std::uint64_t first = 0;  ///< smallest count in the bin
  std::uint64_t last = 0;   ///< largest count, or UINT64_MAX for the open tail
  double observed = 0.0;
  double expected = 0.0;
};

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool applicable = false;  ///< false when fewer than two bins survive pooling
  std::vector<ChiSquareBin> bins;
};

/// Goodness of fit of observed counts to Poisson(lambda). Adjacent counts are
/// pooled until every bin expects at least `min_expected` outcomes; the last
/// bin is the open upper tail. No parameters are estimated.
ChiSquareResult chi_square_poisson(std::span<const std::uint64_t> counts, double lambda,
                                   double min_expected = 5.0);

/// Upper tail of the chi-square distribution with `dof` degrees of freedom.
double chi_square_sf(double statistic, int dof);

/// Kolmogorov-Smirnov statistic sup |F_n - F|.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Critical value of the one-sample KS statistic at level alpha (Stephens'
/// finite-sample approximation to the Kolmogorov limit).
double ks_critical_value(std::size_t n, double alpha);

/// Mean and unbiased variance with compensated accumulation.
struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;
};
MeanVariance mean_variance(std::span<const double> values);

/// Sample covariance of two equally long series.
double sample_covariance(std::span<const double> a, std::span<const double> b);

/// Lag-k sample autocorrelation with the series' own mean and variance.
double sample_autocorrelation(std::span<const double> values, std::size_t lag);

}  // namespace exceed
