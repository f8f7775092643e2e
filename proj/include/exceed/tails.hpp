#pragma once

#include <functional>
#include <vector>

#include "exceed/scaling.hpp"

namespace exceed {

/// Exponent constants of the Gaussian-product tail:
/// Q = (L p)^(1/(2+p)), T = Q^2/2 + L Q^(-p).
struct ProductConstants {
  double Q = 0.0;
  double T = 0.0;
};

ProductConstants product_constants(double L, double p);

/// First-order tail of Y = S X with Weibullian S and standard normal X:
/// (2+p)^(-1/2) C Q^(-alpha) u^(2 alpha/(2+p)) exp(-T u^(2p/(2+p))).
double product_tail_asymptotic(double L, double p, double alpha, double C, double u);
double product_tail_asymptotic(const WeibullianParams& w, double u);

/// E h(S) by quadrature over the quantile domain q = exp(-t) of S, including
/// any atom exactly. h must be finite on [0, inf). `u_hint` is the level of a
/// normal-tail-like kernel h(s) ~ exp(-u^2 / (2 s^2)) and places breakpoints
/// around its Laplace peak.
double scale_expectation(const ScaleDistribution& dist, const std::function<double(double)>& h,
                         double u_hint, double tol, const char* what);

/// P(S X > u) for u > 0 by quadrature of the normal tail over the quantile
/// domain of S, with relative tolerance tol in (0, 1e-6]. Atoms of S are
/// integrated exactly. Throws QuadratureFailure if the tolerance is missed.
double product_tail_oracle(const ScaleDistribution& dist, double u, double tol = 1e-10);

struct ProductTailReport {
  double u = 0.0;
  double asymptotic = 0.0;
  double oracle = 0.0;
  double ratio = 0.0;  ///< asymptotic / oracle (NaN when oracle == 0)
};

ProductTailReport product_tail_report(const ScaleDistribution& dist, double u, double tol = 1e-10);

/// Level u at which product_tail_asymptotic equals prob, taken on the
/// branch where the asymptotic decreases in u.
double asymptotic_tail_level(const WeibullianParams& w, double prob);

/// Norming constants with u_n(x) = a_n x + b_n. Weibullian constants follow
/// n P(Y > u_n(x)) -> exp(-x); the classical ones are those of the unscaled
/// Gaussian maximum.
struct NormingConstants {
  double a_n = 0.0;
  double b_n = 0.0;
  double n = 0.0;
  bool classical = false;

  double level(double x) const noexcept { return a_n * x + b_n; }
};

/// `n` is real so that grids such as n = e^10 can be expressed; n >= 2.
NormingConstants norming_constants(double L, double p, double alpha, double C, double n);
NormingConstants norming_constants(const WeibullianParams& w, double n);
NormingConstants classical_norming_constants(double n);

/// Solves n P(S X > u) = exp(-x) for u by bracketed root finding on the
/// quadrature tail. The result satisfies |n oracle(u) - e^-x| <= tol e^-x.
/// Throws NoBracket when the target exceeds every attainable n P(Y > u).
double solve_level(const ScaleDistribution& dist, double n, double x, double tol = 1e-10);

/// Constants of S Z_n with P(Z_n > z) = exp(-L_n z^q):
/// A = (q L_n)^(1/(p+q)) (L p)^(-1/(p+q)), D = (L + L p / q) A^p.
struct ScaledProductConstants {
  double q = 0.0;
  double L_n = 0.0;
  double A = 0.0;
  double D = 0.0;
};

ScaledProductConstants scaled_product_constants(double L, double p, double q, double L_n);

/// sqrt(2 pi L p/(p+q)) A^(p/2) u^(pq/(2(p+q))) g(A u^(q/(p+q))) exp(-D u^(pq/(p+q)))
/// with g(v) = C v^alpha.
double scaled_product_tail_asymptotic(double L, double p, double alpha, double C, double q,
                                      double L_n, double u);

/// P(S Z > u) with P(Z > z) = exp(-L_n z^q), by quadrature over the quantile
/// domain of Z.
double scaled_product_tail_oracle(const ScaleDistribution& dist, double q, double L_n, double u,
                                  double tol = 1e-10);

struct TailRatioRow {
  double u = 0.0;
  double tail_a = 0.0;
  double tail_b = 0.0;
  double ratio = 0.0;
  double deviation = 0.0;  ///< |ratio - c|
};

/// Ratios of Gaussian-product tails of two scale laws whose own tails have
/// ratio tending to c. Both laws must be Weibullian with equal (L, p).
std::vector<TailRatioRow> tail_equivalence_check(const ScaleDistribution& dist_a,
                                                 const ScaleDistribution& dist_b, double c,
                                                 const std::vector<double>& u_grid,
                                                 double tol = 1e-10);

}  // namespace exceed
