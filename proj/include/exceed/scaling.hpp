#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace exceed {

class RandomStream;

/// Weibullian scale law with survival min(1, C u^alpha exp(-L u^p)).
struct WeibullianParams {
  double L = 1.0;
  double p = 1.0;
  double alpha = 0.0;
  double C = 1.0;
};

/// Scale law on [0, 1] with survival P(S > 1 - x) = x^gamma.
struct BoundedParams {
  double gamma = 1.0;
};

inline bool operator==(const WeibullianParams& a, const WeibullianParams& b) {
  return a.L == b.L && a.p == b.p && a.alpha == b.alpha && a.C == b.C;
}
inline bool operator==(const BoundedParams& a, const BoundedParams& b) {
  return a.gamma == b.gamma;
}

/// Distribution of the random scale S >= 0.
///
/// The Weibullian law has survival 1 on [0, u0) and C u^alpha exp(-L u^p) from
/// u0 on, where u0 is the left edge of the region where that expression is
/// strictly decreasing and does not exceed 1. Any deficit 1 - C u0^alpha
/// exp(-L u0^p) is an atom at u0.
class ScaleDistribution {
 public:
  using Params = std::variant<WeibullianParams, BoundedParams>;

  static ScaleDistribution weibullian(double L, double p, double alpha, double C);
  static ScaleDistribution bounded(double gamma);

  const Params& params() const noexcept { return params_; }
  bool is_weibullian() const noexcept {
    return std::holds_alternative<WeibullianParams>(params_);
  }
  const WeibullianParams& weibullian_params() const;
  const BoundedParams& bounded_params() const;

  /// P(S > u).
  double survival(double u) const noexcept;

  /// Smallest u with survival(u) <= q, for q in (0, 1).
  double quantile(double q) const;

  /// quantile(exp(log_q)) without forming exp(log_q); log_q < 0.
  double quantile_log(double log_q) const;

  /// Left edge of the strictly decreasing region (0 for Bounded).
  double strict_decrease_start() const noexcept { return u0_; }

  /// Probability mass of the atom at strict_decrease_start().
  double atom_mass() const noexcept { return atom_; }

  /// Upper endpoint of the support (infinity for Weibullian).
  double upper_endpoint() const noexcept;

  std::string tag() const;
  std::string describe() const;

  friend bool operator==(const ScaleDistribution& a, const ScaleDistribution& b) {
    return a.params_ == b.params_;
  }

 private:
  explicit ScaleDistribution(Params params);
  double log_kernel(double u) const noexcept;

  Params params_;
  double u0_ = 0.0;
  double atom_ = 0.0;
  double log_survival_u0_ = 0.0;
};

/// Draws count i.i.d. scales by inverse transform on uniforms from the
/// (seed, stream_id) scale stream.
std::vector<double> sample_scales(const ScaleDistribution& dist, std::size_t count,
                                  std::uint64_t seed, std::uint64_t stream_id);

/// Fills `out` from an existing stream.
void sample_scales_into(const ScaleDistribution& dist, RandomStream& stream,
                        std::span<double> out);

}  // namespace exceed
