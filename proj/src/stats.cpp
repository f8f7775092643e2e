#include "exceed/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "exceed/error.hpp"
#include "exceed/numeric.hpp"

namespace exceed {

double poisson_pmf(std::uint64_t k, double lambda) {
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(lambda) - lambda - std::lgamma(kd + 1.0));
}

double binomial_se(double p, std::size_t replications) {
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(replications));
}

double chi_square_sf(double statistic, int dof) {
  if (dof <= 0) throw ConfigError("chi_square_sf: dof must be positive");
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquareResult chi_square_poisson(std::span<const std::uint64_t> counts, double lambda,
                                   double min_expected) {
  ChiSquareResult result;
  const double total = static_cast<double>(counts.size());
  if (counts.empty() || !(lambda > 0.0)) return result;

  const std::uint64_t observed_max = *std::max_element(counts.begin(), counts.end());
  std::vector<double> histogram(observed_max + 1, 0.0);
  for (const auto c : counts) histogram[c] += 1.0;

  // Walk k upwards; close a bin once it and the remaining tail each expect
  // at least min_expected. Whatever is left becomes the open tail bin.
  double cdf = 0.0;
  ChiSquareBin current;
  for (std::uint64_t k = 0;; ++k) {
    const double pk = poisson_pmf(k, lambda);
    cdf += pk;
    current.expected += total * pk;
    current.observed += k < histogram.size() ? histogram[k] : 0.0;
    current.last = k;
    const double tail_expected = total * std::max(0.0, 1.0 - cdf);
    if (tail_expected < min_expected) break;
    if (current.expected >= min_expected) {
      result.bins.push_back(current);
      current = ChiSquareBin{};
      current.first = k + 1;
    }
  }
  // Open tail: everything above current.last joins the current bin.
  current.expected = total - [&] {
    double s = 0.0;
    for (const auto& b : result.bins) s += b.expected;
    return s;
  }();
  double observed_below = 0.0;
  for (const auto& b : result.bins) observed_below += b.observed;
  current.observed = total - observed_below;
  current.last = std::numeric_limits<std::uint64_t>::max();
  if (current.expected < min_expected && !result.bins.empty()) {
    auto& prev = result.bins.back();
    prev.expected += current.expected;
    prev.observed += current.observed;
    prev.last = current.last;
  } else {
    result.bins.push_back(current);
  }

  if (result.bins.size() < 2) return result;
  result.applicable = true;
  CompensatedSum stat;
  for (const auto& b : result.bins) {
    const double d = b.observed - b.expected;
    stat.add(d * d / b.expected);
  }
  result.statistic = stat.value();
  result.dof = static_cast<int>(result.bins.size()) - 1;
  result.p_value = chi_square_sf(result.statistic, result.dof);
  return result;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ConfigError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0 || !(alpha > 0.0 && alpha < 1.0)) throw ConfigError("ks_critical_value: bad arguments");
  const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
  const double root = std::sqrt(static_cast<double>(n));
  return c / (root + 0.12 + 0.11 / root);
}

MeanVariance mean_variance(std::span<const double> values) {
  if (values.empty()) throw ConfigError("mean_variance: empty input");
  CompensatedSum sum;
  for (const double v : values) sum.add(v);
  const double mean = sum.value() / static_cast<double>(values.size());
  CompensatedSum sq;
  for (const double v : values) sq.add((v - mean) * (v - mean));
  const double denom = values.size() > 1 ? static_cast<double>(values.size() - 1) : 1.0;
  return {mean, sq.value() / denom};
}

double sample_covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw LengthMismatch("sample_covariance: series differ in length");
  if (a.size() < 2) throw ConfigError("sample_covariance: need at least two points");
  const double ma = mean_variance(a).mean;
  const double mb = mean_variance(b).mean;
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add((a[i] - ma) * (b[i] - mb));
  return s.value() / static_cast<double>(a.size() - 1);
}

double sample_autocorrelation(std::span<const double> values, std::size_t lag) {
  if (lag >= values.size()) throw ConfigError("sample_autocorrelation: lag too large");
  const auto mv = mean_variance(values);
  CompensatedSum s;
  for (std::size_t i = 0; i + lag < values.size(); ++i) {
    s.add((values[i] - mv.mean) * (values[i + lag] - mv.mean));
  }
  const double n = static_cast<double>(values.size());
  return (s.value() / n) / (mv.variance * (n - 1.0) / n);
}

}  // namespace exceed
