#include "exceed/tails.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "exceed/error.hpp"
#include "exceed/numeric.hpp"

namespace exceed {

namespace {

// exp(-t) is below the smallest subnormal past this point.
constexpr double kMaxExponent = 745.0;
constexpr double kAbsFloor = 1e-300;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be > 0");
}

void add_geometric_grid(std::vector<double>& points, double origin, double scale, int lo, int hi) {
  for (int k = lo; k <= hi; ++k) points.push_back(origin + scale * std::ldexp(1.0, k));
}

std::vector<double> clip(std::vector<double> points, double lo, double hi) {
  std::vector<double> out{lo, hi};
  for (const double t : points) {
    if (std::isfinite(t) && t > lo && t < hi) out.push_back(t);
  }
  return out;
}

}  // namespace

ProductConstants product_constants(double L, double p) {
  require_positive(L, "L");
  require_positive(p, "p");
  const double Q = std::pow(L * p, 1.0 / (2.0 + p));
  return {Q, 0.5 * Q * Q + L * std::pow(Q, -p)};
}

double product_tail_asymptotic(double L, double p, double alpha, double C, double u) {
  const auto [Q, T] = product_constants(L, p);
  const double log_value = -0.5 * std::log(2.0 + p) + std::log(C) - alpha * std::log(Q) +
                           (2.0 * alpha / (2.0 + p)) * std::log(u) -
                           T * std::pow(u, 2.0 * p / (2.0 + p));
  return std::exp(log_value);
}

double product_tail_asymptotic(const WeibullianParams& w, double u) {
  return product_tail_asymptotic(w.L, w.p, w.alpha, w.C, u);
}

double scale_expectation(const ScaleDistribution& dist, const std::function<double(double)>& h,
                         double u_hint, double tol, const char* what) {
  // On [0, t0) the quantile exp(-t) sits on the atom at u0.
  const double u0 = dist.strict_decrease_start();
  const double t0 = dist.atom_mass() > 0.0 ? -std::log1p(-dist.atom_mass()) : 0.0;
  const double atom_part = dist.atom_mass() > 0.0 ? dist.atom_mass() * h(u0) : 0.0;

  std::vector<double> points;
  add_geometric_grid(points, t0, 1.0, -8, 9);
  if (dist.is_weibullian()) {
    const auto& w = dist.weibullian_params();
    const double s_peak = std::pow(u_hint * u_hint / (w.L * w.p), 1.0 / (2.0 + w.p));
    const double t_peak = w.L * std::pow(s_peak, w.p);
    for (const double f : {0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 4.0}) points.push_back(f * t_peak);
  } else {
    const double gamma = dist.bounded_params().gamma;
    add_geometric_grid(points, 0.0, gamma, -10, 10);
    for (int k = -4; k <= 4; ++k) {
      const double s = std::ldexp(u_hint, k);
      if (s < 1.0) points.push_back(-gamma * std::log1p(-s));
    }
  }

  const auto integrand = [&](double t) { return h(dist.quantile_log(-t)) * std::exp(-t); };
  points = clip(std::move(points), t0, kMaxExponent);
  if (t0 == 0.0) return integrate_segments(integrand, std::move(points), tol, kAbsFloor, what).value;

  // The quantile leaves the atom like sqrt(t - t0); integrate in w = sqrt(t - t0).
  for (double& t : points) t = std::sqrt(t - t0);
  add_geometric_grid(points, 0.0, 1.0, -20, -9);
  const auto smooth = [&](double w) { return 2.0 * w * integrand(t0 + w * w); };
  return atom_part + integrate_segments(smooth, std::move(points), tol, kAbsFloor, what).value;
}

double product_tail_oracle(const ScaleDistribution& dist, double u, double tol) {
  if (!(u > 0.0)) throw ConfigError("product_tail_oracle: u must be > 0");
  if (!(tol > 0.0 && tol <= 1e-6)) throw ConfigError("product_tail_oracle: tol must lie in (0, 1e-6]");
  const auto tail = [u](double s) { return s > 0.0 ? normal_tail(u / s) : 0.0; };
  return std::clamp(scale_expectation(dist, tail, u, tol, "product_tail_oracle"), 0.0, 1.0);
}

ProductTailReport product_tail_report(const ScaleDistribution& dist, double u, double tol) {
  ProductTailReport report;
  report.u = u;
  report.asymptotic = product_tail_asymptotic(dist.weibullian_params(), u);
  report.oracle = product_tail_oracle(dist, u, tol);
  report.ratio = report.oracle > 0.0 ? report.asymptotic / report.oracle
                                     : std::numeric_limits<double>::quiet_NaN();
  return report;
}

double asymptotic_tail_level(const WeibullianParams& w, double prob) {
  if (!(prob > 0.0 && prob < 1.0)) throw ConfigError("asymptotic_tail_level: prob must lie in (0,1)");
  const auto [Q, T] = product_constants(w.L, w.p);
  const double beta = 2.0 * w.p / (2.0 + w.p);
  const double power = 2.0 * w.alpha / (2.0 + w.p);
  const double log_k = -0.5 * std::log(2.0 + w.p) + std::log(w.C) - w.alpha * std::log(Q);
  const double target = std::log(prob);
  const auto f = [&](double u) { return log_k + power * std::log(u) - T * std::pow(u, beta) - target; };
  // d/du log asymptotic < 0 for u^beta > power / (T beta).
  double lo = power > 0.0 ? std::pow(power / (T * beta), 1.0 / beta) : 0.0;
  lo = std::max(lo, 1e-12);
  if (f(lo) < 0.0) throw NoBracket("asymptotic_tail_level: probability not attained on the decreasing branch");
  double hi = std::max(1.0, 2.0 * lo);
  while (f(hi) > 0.0) hi *= 2.0;
  return find_root(f, lo, hi, {1e-14, 0.0, 400});
}

NormingConstants norming_constants(double L, double p, double alpha, double C, double n) {
  if (!(n >= 2.0)) throw ConfigError("norming_constants: n must be >= 2");
  require_positive(C, "C");
  const auto [Q, T] = product_constants(L, p);
  const double log_n = std::log(n);
  const double a_n = (2.0 + p) / (2.0 * p) * std::pow(T, -(2.0 + p) / (2.0 * p)) *
                     std::pow(log_n, (2.0 - p) / (2.0 * p));
  const double b_n = std::pow(log_n / T, (2.0 + p) / (2.0 * p)) +
                     a_n * ((alpha / p) * std::log(log_n / T) +
                            std::log(std::pow(2.0 + p, -0.5) * C * std::pow(Q, -alpha)));
  return {a_n, b_n, n, false};
}

NormingConstants norming_constants(const WeibullianParams& w, double n) {
  return norming_constants(w.L, w.p, w.alpha, w.C, n);
}

NormingConstants classical_norming_constants(double n) {
  if (!(n > 1.0)) throw ConfigError("classical_norming_constants: n must be > 1");
  const double root = std::sqrt(2.0 * std::log(n));
  const double b_n =
      root - (std::log(std::log(n)) + std::log(4.0 * std::numbers::pi)) / (2.0 * root);
  return {1.0 / root, b_n, n, true};
}

double solve_level(const ScaleDistribution& dist, double n, double x, double tol) {
  if (!(n >= 1.0)) throw ConfigError("solve_level: n must be >= 1");
  if (!std::isfinite(x)) throw ConfigError("solve_level: x must be finite");
  if (!(tol > 0.0 && tol <= 1e-4)) throw ConfigError("solve_level: tol must lie in (0, 1e-4]");
  const double target = std::exp(-x);
  if (!(target / n < 1.0)) throw ConfigError("solve_level: requires exp(-x)/n < 1");
  if (!(target / n < 0.5)) throw NoBracket("solve_level: exp(-x)/n >= 1/2 = sup P(Y > u)");

  const double oracle_tol = std::clamp(0.01 * tol, 1e-13, 1e-6);
  const double log_target = std::log(target / n);
  const auto g = [&](double u) {
    const double tail = product_tail_oracle(dist, u, oracle_tol);
    return tail > 0.0 ? std::log(tail) - log_target : -std::numeric_limits<double>::infinity();
  };

  // Start from the level of the unscaled Gaussian and grow the bracket.
  const double reference = target / n < 0.5 ? normal_tail_inverse(target / n) : 1.0;
  double lo = std::max(reference, 0.1);
  double hi = lo;
  while (g(lo) <= 0.0) {
    lo *= 0.5;
    if (lo < 1e-12) {
      throw NoBracket("solve_level: exp(-x)/n exceeds the attainable tail P(Y > u)");
    }
  }
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw NoBracket("solve_level: cannot bracket the level from above");
  }
  const double u = find_root(g, lo, hi, {4e-16, 0.0, 400});
  if (!(std::abs(std::expm1(g(u))) <= tol)) {
    throw NoConvergence("solve_level: level residual exceeds tolerance");
  }
  return u;
}

ScaledProductConstants scaled_product_constants(double L, double p, double q, double L_n) {
  require_positive(L, "L");
  require_positive(p, "p");
  require_positive(q, "q");
  require_positive(L_n, "L_n");
  const double A = std::pow(q * L_n, 1.0 / (p + q)) * std::pow(L * p, -1.0 / (p + q));
  const double D = (L + L * p / q) * std::pow(A, p);
  return {q, L_n, A, D};
}

double scaled_product_tail_asymptotic(double L, double p, double alpha, double C, double q,
                                      double L_n, double u) {
  require_positive(u, "u");
  const auto k = scaled_product_constants(L, p, q, L_n);
  const double g_arg = k.A * std::pow(u, q / (p + q));
  const double log_value = 0.5 * std::log(2.0 * std::numbers::pi * L * p / (p + q)) +
                           0.5 * p * std::log(k.A) + (p * q / (2.0 * (p + q))) * std::log(u) +
                           std::log(C) + alpha * std::log(g_arg) -
                           k.D * std::pow(u, p * q / (p + q));
  return std::exp(log_value);
}

double scaled_product_tail_oracle(const ScaleDistribution& dist, double q, double L_n, double u,
                                  double tol) {
  require_positive(q, "q");
  require_positive(L_n, "L_n");
  require_positive(u, "u");
  if (!(tol > 0.0 && tol <= 1e-6)) throw ConfigError("scaled_product_tail_oracle: tol must lie in (0, 1e-6]");

  // Z quantile at exp(-t) is (t / L_n)^(1/q), so P(SZ > u) = int survival(u (L_n/t)^(1/q)) e^-t dt.
  std::vector<double> points;
  add_geometric_grid(points, 0.0, 1.0, -8, 9);
  const double u0 = dist.strict_decrease_start();
  if (u0 > 0.0) points.push_back(L_n * std::pow(u / u0, q));
  if (dist.is_weibullian()) {
    const auto& w = dist.weibullian_params();
    const auto k = scaled_product_constants(w.L, w.p, q, L_n);
    const double z_peak = std::pow(u, w.p / (w.p + q)) / k.A;
    const double t_peak = L_n * std::pow(z_peak, q);
    for (const double f : {0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 4.0}) points.push_back(f * t_peak);
  } else {
    points.push_back(L_n * std::pow(u, q));
  }
  const auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    return dist.survival(u * std::pow(L_n / t, 1.0 / q)) * std::exp(-t);
  };
  const auto result = integrate_segments(integrand, clip(std::move(points), 0.0, kMaxExponent), tol,
                                         kAbsFloor, "scaled_product_tail_oracle");
  return std::clamp(result.value, 0.0, 1.0);
}

std::vector<TailRatioRow> tail_equivalence_check(const ScaleDistribution& dist_a,
                                                 const ScaleDistribution& dist_b, double c,
                                                 const std::vector<double>& u_grid, double tol) {
  if (!dist_a.is_weibullian() || !dist_b.is_weibullian()) {
    throw ConfigError("tail_equivalence_check: both scale laws must be Weibullian");
  }
  const auto& a = dist_a.weibullian_params();
  const auto& b = dist_b.weibullian_params();
  if (a.L != b.L || a.p != b.p) {
    throw ConfigError("tail_equivalence_check: scale laws must share L and p");
  }
  std::vector<TailRatioRow> rows;
  rows.reserve(u_grid.size());
  for (const double u : u_grid) {
    TailRatioRow row;
    row.u = u;
    row.tail_a = product_tail_oracle(dist_a, u, tol);
    row.tail_b = dist_a == dist_b ? row.tail_a : product_tail_oracle(dist_b, u, tol);
    row.ratio = row.tail_a / row.tail_b;
    row.deviation = std::abs(row.ratio - c);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace exceed
