#include "exceed/numeric.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <sstream>

namespace exceed {

double normal_tail_inverse(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw ConfigError("normal_tail_inverse: probability must lie in (0,1)");
  }
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * prob);
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const RootOptions& options) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw NoBracket("find_root: endpoints do not bracket a sign change");
  }
  double previous_width = hi - lo;
  bool force_bisect = false;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    const double width = hi - lo;
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (width <= options.rel_tol * scale + options.abs_tol) {
      return std::abs(flo) < std::abs(fhi) ? lo : hi;
    }
    double x = hi - fhi * (hi - lo) / (fhi - flo);
    if (force_bisect || !(x > lo && x < hi)) {
      x = 0.5 * (lo + hi);
    }
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (std::signbit(fx) == std::signbit(flo)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    // A step that fails to halve the bracket is followed by a bisection.
    force_bisect = (hi - lo) > 0.5 * previous_width;
    previous_width = hi - lo;
  }
  std::ostringstream msg;
  msg << "find_root: no convergence after " << options.max_iter << " iterations, bracket [" << lo
      << ", " << hi << "]";
  throw NoConvergence(msg.str());
}

namespace {

struct Piece {
  double a, b, value, error;
};

Piece gauss_kronrod(const Integrand& f, double a, double b) {
  // Boost reports |K - G| in the [-1, 1] frame; rescale it to [a, b].
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &error);
  return {a, b, value, error * 0.5 * (b - a)};
}

}  // namespace

QuadratureResult integrate_segments(const Integrand& f, std::vector<double> breakpoints,
                                    double rel_tol, double abs_tol, const std::string& what) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  const auto by_error = [](const Piece& x, const Piece& y) { return x.error < y.error; };
  std::vector<Piece> heap;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    heap.push_back(gauss_kronrod(f, breakpoints[i], breakpoints[i + 1]));
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  const auto totals = [&heap] {
    CompensatedSum value, error;
    for (const Piece& p : heap) {
      value.add(p.value);
      error.add(p.error);
    }
    return QuadratureResult{value.value(), error.value()};
  };
  constexpr int kMaxSplits = 4000;
  QuadratureResult result = totals();
  for (int split = 0; split < kMaxSplits; ++split) {
    if (!std::isfinite(result.value)) break;
    const double target = std::max(rel_tol * std::abs(result.value), abs_tol);
    if (result.error <= target) break;
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Piece worst = heap.back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      std::push_heap(heap.begin(), heap.end(), by_error);
      break;
    }
    heap.back() = gauss_kronrod(f, worst.a, mid);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(gauss_kronrod(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end(), by_error);
    result = totals();
  }
  if (!std::isfinite(result.value) ||
      result.error > std::max(rel_tol * std::abs(result.value), abs_tol)) {
    std::ostringstream msg;
    msg << what << ": quadrature error estimate " << result.error << " exceeds tolerance for value "
        << result.value;
    throw QuadratureFailure(msg.str());
  }
  return result;
}

}  // namespace exceed
