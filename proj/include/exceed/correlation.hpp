#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace exceed {

/// rho(k) = r^k.
struct Geometric {
  double r = 0.0;
};

/// rho(k) = min(0.999, c (1 + k)^(-a)) for k >= 1.
struct PowerDecay {
  double a = 1.0;
  double c = 1.0;
};

/// rho(k) = min(0.9, c / ln(k + e)) for k >= 1. Violates the Berman condition;
/// kept as a negative control for exploratory runs.
struct LogDecay {
  double c = 1.0;
};

/// Correlation function of a standard stationary Gaussian sequence.
class CorrelationModel {
 public:
  using Family = std::variant<Geometric, PowerDecay, LogDecay>;

  static CorrelationModel geometric(double r);
  static CorrelationModel power(double a, double c);
  static CorrelationModel log_decay(double c);

  const Family& family() const noexcept { return family_; }

  /// Lag-k correlation; rho(0) = 1.
  double rho(std::uint64_t k) const noexcept;

  /// Whether rho(n) ln n -> 0 holds for this family.
  bool berman_ok() const noexcept;

  /// Config tag: "geometric", "power" or "log".
  std::string tag() const;

  /// Human-readable description, e.g. "geometric(r=0.5)".
  std::string describe() const;

  /// Correlations for lags 0 .. count-1.
  std::vector<double> first_row(std::size_t count) const;

  /// True when rho(k) = 0 for every k >= 1.
  bool is_white() const noexcept;

  friend bool operator==(const CorrelationModel& a, const CorrelationModel& b);

 private:
  explicit CorrelationModel(Family family) : family_(family) {}
  Family family_;
};

inline bool operator==(const Geometric& a, const Geometric& b) { return a.r == b.r; }
inline bool operator==(const PowerDecay& a, const PowerDecay& b) {
  return a.a == b.a && a.c == b.c;
}
inline bool operator==(const LogDecay& a, const LogDecay& b) { return a.c == b.c; }
inline bool operator==(const CorrelationModel& a, const CorrelationModel& b) {
  return a.family_ == b.family_;
}

struct BermanRow {
  std::uint64_t n = 0;
  double rho_log = 0.0;           ///< rho(n) ln n
  double rho_log_modified = 0.0;  ///< rho(n) (ln n)^(1 + delta)
};

/// Tabulates the plain and modified Berman quantities on a strictly
/// increasing grid of n >= 2.
std::vector<BermanRow> berman_diagnostic(const CorrelationModel& model,
                                         const std::vector<std::uint64_t>& n_grid, double delta);

/// Smallest n >= 2 beyond which rho(n) ln n is strictly decreasing. Only
/// defined for Geometric and PowerDecay; LogDecay returns 0.
std::uint64_t berman_crossover(const CorrelationModel& model);

}  // namespace exceed
