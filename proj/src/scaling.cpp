#include "exceed/scaling.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "exceed/error.hpp"
#include "exceed/numeric.hpp"
#include "exceed/rng.hpp"

namespace exceed {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

ScaleDistribution ScaleDistribution::weibullian(double L, double p, double alpha, double C) {
  if (!positive_finite(L)) throw ConfigError("weibullian scale needs L > 0");
  if (!positive_finite(p)) throw ConfigError("weibullian scale needs p > 0");
  if (!std::isfinite(alpha)) throw ConfigError("weibullian scale needs finite alpha");
  if (!positive_finite(C)) throw ConfigError("weibullian scale needs C > 0");
  return ScaleDistribution(WeibullianParams{L, p, alpha, C});
}

ScaleDistribution ScaleDistribution::bounded(double gamma) {
  if (!positive_finite(gamma)) throw ConfigError("bounded scale needs gamma > 0");
  return ScaleDistribution(BoundedParams{gamma});
}

ScaleDistribution::ScaleDistribution(Params params) : params_(params) {
  const auto* w = std::get_if<WeibullianParams>(&params_);
  if (w == nullptr) return;

  // C u^alpha exp(-L u^p) decreases strictly for u > turning.
  const double turning = std::pow(std::max(w->alpha, 0.0) / (w->L * w->p), 1.0 / w->p);
  if (log_kernel(turning) <= 0.0) {
    u0_ = turning;
  } else if (w->alpha == 0.0) {
    u0_ = std::pow(std::log(w->C) / w->L, 1.0 / w->p);
  } else {
    double lo = turning > 0.0 ? turning : 1e-300;
    double hi = std::max(1.0, 2.0 * lo);
    while (log_kernel(hi) > 0.0) hi *= 2.0;
    u0_ = find_root([&](double u) { return log_kernel(u); }, lo, hi, {1e-15, 0.0, 400});
    // The root may sit an ulp on the wrong side; move it into the region
    // where the kernel is at most one.
    while (log_kernel(u0_) > 0.0) u0_ = std::nextafter(u0_, kInf);
  }
  if (!(u0_ >= turning)) {
    throw ConfigError("weibullian scale: survival is not non-increasing past its left edge");
  }
  log_survival_u0_ = std::min(0.0, log_kernel(u0_));
  atom_ = -std::expm1(log_survival_u0_);
}

const WeibullianParams& ScaleDistribution::weibullian_params() const {
  return std::get<WeibullianParams>(params_);
}

const BoundedParams& ScaleDistribution::bounded_params() const {
  return std::get<BoundedParams>(params_);
}

double ScaleDistribution::log_kernel(double u) const noexcept {
  const auto& w = std::get<WeibullianParams>(params_);
  const double log_power = w.alpha == 0.0 ? 0.0 : w.alpha * std::log(u);
  return std::log(w.C) + log_power - w.L * std::pow(u, w.p);
}

double ScaleDistribution::survival(double u) const noexcept {
  if (const auto* b = std::get_if<BoundedParams>(&params_)) {
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    return std::pow(1.0 - u, b->gamma);
  }
  if (u < u0_) return 1.0;
  if (u == kInf) return 0.0;
  return std::min(1.0, std::exp(log_kernel(u)));
}

double ScaleDistribution::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("quantile: q must lie in (0, 1)");
  if (const auto* b = std::get_if<BoundedParams>(&params_)) {
    return 1.0 - std::pow(q, 1.0 / b->gamma);
  }
  return quantile_log(std::log(q));
}

double ScaleDistribution::quantile_log(double log_q) const {
  if (const auto* b = std::get_if<BoundedParams>(&params_)) {
    return -std::expm1(log_q / b->gamma);
  }
  if (log_q >= log_survival_u0_) return u0_;
  const auto& w = std::get<WeibullianParams>(params_);
  const double base = ((w.C == 1.0 ? 0.0 : std::log(w.C)) - log_q) / w.L;
  const double closed = w.p == 1.0 ? base : w.p == 2.0 ? std::sqrt(base) : std::pow(base, 1.0 / w.p);
  if (w.alpha == 0.0) return closed;

  const auto target = [&](double u) { return log_kernel(u) - log_q; };
  const double lo = u0_;
  double hi = std::max(closed, 2.0 * std::max(lo, 1e-300));
  for (int grow = 0; target(hi) > 0.0; ++grow) {
    if (grow > 2000) throw NoConvergence("quantile: cannot bracket the root");
    hi *= 2.0;
  }
  if (target(lo) <= 0.0) return lo;
  double u = find_root(target, lo, hi, {1e-13, 0.0, 300});
  for (int step = 0; step < 3; ++step) {
    const double slope = w.alpha / u - w.L * w.p * std::pow(u, w.p - 1.0);
    if (!(slope < 0.0)) break;
    const double next = u - target(u) / slope;
    if (!(next > lo) || next == u) break;
    u = next;
  }
  return u;
}

double ScaleDistribution::upper_endpoint() const noexcept {
  return is_weibullian() ? kInf : 1.0;
}

std::string ScaleDistribution::tag() const { return is_weibullian() ? "weibullian" : "bounded"; }

std::string ScaleDistribution::describe() const {
  std::ostringstream out;
  out.precision(17);
  if (const auto* w = std::get_if<WeibullianParams>(&params_)) {
    out << "weibullian(L=" << w->L << ",p=" << w->p << ",alpha=" << w->alpha << ",C=" << w->C
        << ")";
  } else {
    out << "bounded(gamma=" << bounded_params().gamma << ")";
  }
  return out.str();
}

void sample_scales_into(const ScaleDistribution& dist, RandomStream& stream,
                        std::span<double> out) {
  for (double& s : out) s = dist.quantile_log(std::log(stream.uniform()));
}

std::vector<double> sample_scales(const ScaleDistribution& dist, std::size_t count,
                                  std::uint64_t seed, std::uint64_t stream_id) {
  if (count == 0) throw ConfigError("sample_scales: count must be >= 1");
  std::vector<double> out(count);
  RandomStream stream(seed, StreamPurpose::kScales, stream_id);
  sample_scales_into(dist, stream, out);
  return out;
}

}  // namespace exceed
