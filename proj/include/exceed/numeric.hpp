#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "exceed/error.hpp"

namespace exceed {

/// Upper standard normal tail P(X > x), accurate to a few ulps deep into the
/// tail (no 1 - Phi cancellation).
inline double normal_tail(double x) noexcept {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// Solves normal_tail(x) = prob for prob in (0, 1).
double normal_tail_inverse(double prob);

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct RootOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_iter = 200;
};

/// Root of a continuous function with f(lo) and f(hi) of opposite sign.
/// Secant steps are taken when they land inside the current bracket and make
/// progress; otherwise the step is a bisection. Throws NoConvergence when the
/// iteration cap is hit before the bracket shrinks to tolerance.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& options = {});

using Integrand = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod over the consecutive segments of `breakpoints`.
/// Succeeds when the summed error estimate is at most
/// rel_tol * |value| + abs_tol; otherwise throws QuadratureFailure.
QuadratureResult integrate_segments(const Integrand& f, std::vector<double> breakpoints,
                                    double rel_tol, double abs_tol, const std::string& what);

}  // namespace exceed
