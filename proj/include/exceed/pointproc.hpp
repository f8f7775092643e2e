#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "exceed/gaussian.hpp"

namespace exceed {

/// Y_i = S_i X_i.
struct ScaledPath {
  std::vector<double> values;
  std::size_t n = 0;
  std::string model;         ///< correlation description of X
  std::string distribution;  ///< scale law description of S (if known)
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// Elementwise product; throws LengthMismatch on unequal lengths.
ScaledPath scale_path(const GaussianPath& gauss, std::span<const double> scales,
                      std::string distribution = {});

void scale_into(std::span<const double> x, std::span<const double> s, std::span<double> y);

enum class Mark : int { kUpper = 1, kLower = 2 };

/// Bivariate exceedance pattern: mark 1 at i/n where Y_i > u1, mark 2 at i/n
/// where -Y_i > u2. Indices are 1-based and strictly increasing per mark.
struct PointPattern {
  std::vector<std::size_t> upper;  ///< indices with Y_i > u1
  std::vector<std::size_t> lower;  ///< indices with -Y_i > u2
  double u1 = 0.0;
  double u2 = 0.0;
  std::size_t n = 0;

  const std::vector<std::size_t>& indices(Mark mark) const noexcept {
    return mark == Mark::kUpper ? upper : lower;
  }
  /// Normalised positions i/n of one mark.
  std::vector<double> positions(Mark mark) const;
};

PointPattern extract(std::span<const double> values, double u1, double u2);
inline PointPattern extract(const ScaledPath& path, double u1, double u2) {
  return extract(path.values, u1, u2);
}

/// Points of `mark` with position in (s, t], 0 <= s <= t <= 1.
std::size_t count(const PointPattern& pattern, Mark mark, double s, double t);

struct OrderStats {
  double kth_max = 0.0;
  double lth_min = 0.0;
};

/// k-th largest and l-th smallest values (multiset semantics), 1 <= k, l <= n.
OrderStats order_stats(std::span<const double> values, std::size_t k, std::size_t l);

/// Same, reusing `scratch` as the selection buffer.
OrderStats order_stats(std::span<const double> values, std::size_t k, std::size_t l,
                       std::vector<double>& scratch);

/// CSV "position,mark", ordered by position.
void write_pattern_csv(std::ostream& out, const PointPattern& pattern);

}  // namespace exceed
