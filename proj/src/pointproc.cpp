#include "exceed/pointproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>

#include "exceed/error.hpp"

namespace exceed {

ScaledPath scale_path(const GaussianPath& gauss, std::span<const double> scales,
                      std::string distribution) {
  if (gauss.values.size() != scales.size()) {
    throw LengthMismatch("scale_path: path has " + std::to_string(gauss.values.size()) +
                         " values but " + std::to_string(scales.size()) + " scales were given");
  }
  ScaledPath out;
  out.n = gauss.values.size();
  out.values.resize(out.n);
  out.model = gauss.model.describe();
  out.distribution = std::move(distribution);
  out.seed = gauss.seed;
  out.stream_id = gauss.stream_id;
  scale_into(gauss.values, scales, out.values);
  return out;
}

void scale_into(std::span<const double> x, std::span<const double> s, std::span<double> y) {
  if (x.size() != s.size() || x.size() != y.size()) {
    throw LengthMismatch("scale_into: spans differ in length");
  }
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = s[i] * x[i];
}

std::vector<double> PointPattern::positions(Mark mark) const {
  const auto& idx = indices(mark);
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out[i] = static_cast<double>(idx[i]) / static_cast<double>(n);
  }
  return out;
}

PointPattern extract(std::span<const double> values, double u1, double u2) {
  if (std::isnan(u1) || std::isnan(u2)) throw ConfigError("extract: levels must not be NaN");
  PointPattern pattern;
  pattern.u1 = u1;
  pattern.u2 = u2;
  pattern.n = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > u1) pattern.upper.push_back(i + 1);
    if (-values[i] > u2) pattern.lower.push_back(i + 1);
  }
  return pattern;
}

std::size_t count(const PointPattern& pattern, Mark mark, double s, double t) {
  if (!(s >= 0.0 && s <= t && t <= 1.0)) {
    throw ConfigError("count: interval (s, t] must satisfy 0 <= s <= t <= 1");
  }
  // i/n in (s, t]  <=>  floor(s n) < i <= floor(t n)
  const double n = static_cast<double>(pattern.n);
  const auto first = static_cast<std::size_t>(std::floor(s * n));
  const auto last = static_cast<std::size_t>(std::floor(t * n));
  const auto& idx = pattern.indices(mark);
  const auto lo = std::upper_bound(idx.begin(), idx.end(), first);
  const auto hi = std::upper_bound(idx.begin(), idx.end(), last);
  return hi > lo ? static_cast<std::size_t>(hi - lo) : 0;
}

namespace {
constexpr std::size_t kSmallRank = 8;
}  // namespace

OrderStats order_stats(std::span<const double> values, std::size_t k, std::size_t l,
                       std::vector<double>& scratch) {
  const std::size_t n = values.size();
  if (k < 1 || k > n || l < 1 || l > n) {
    throw OutOfRange("order_stats: k and l must lie in [1, " + std::to_string(n) + "]");
  }
  OrderStats out;
  if (k <= kSmallRank && l <= kSmallRank) {
    // Running top-k / bottom-l lists, kept sorted by insertion.
    std::array<double, kSmallRank> top, bottom;
    std::size_t nt = 0, nb = 0;
    for (const double v : values) {
      if (nt < k || v > top[nt - 1]) {
        std::size_t i = nt < k ? nt++ : k - 1;
        for (; i > 0 && top[i - 1] < v; --i) top[i] = top[i - 1];
        top[i] = v;
      }
      if (nb < l || v < bottom[nb - 1]) {
        std::size_t i = nb < l ? nb++ : l - 1;
        for (; i > 0 && bottom[i - 1] > v; --i) bottom[i] = bottom[i - 1];
        bottom[i] = v;
      }
    }
    out.kth_max = top[k - 1];
    out.lth_min = bottom[l - 1];
    return out;
  }
  scratch.assign(values.begin(), values.end());
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   scratch.end(), std::greater<>());
  out.kth_max = scratch[k - 1];
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(l - 1),
                   scratch.end());
  out.lth_min = scratch[l - 1];
  return out;
}

OrderStats order_stats(std::span<const double> values, std::size_t k, std::size_t l) {
  std::vector<double> scratch;
  return order_stats(values, k, l, scratch);
}

void write_pattern_csv(std::ostream& out, const PointPattern& pattern) {
  out << "position,mark\n";
  std::size_t a = 0;
  std::size_t b = 0;
  char buf[48];
  const double n = static_cast<double>(pattern.n);
  while (a < pattern.upper.size() || b < pattern.lower.size()) {
    const bool take_upper =
        b == pattern.lower.size() || (a < pattern.upper.size() && pattern.upper[a] <= pattern.lower[b]);
    const std::size_t index = take_upper ? pattern.upper[a++] : pattern.lower[b++];
    std::snprintf(buf, sizeof buf, "%.17g,%d", static_cast<double>(index) / n, take_upper ? 1 : 2);
    out << buf << '\n';
  }
}

}  // namespace exceed
