#include <cmath>
#include <exception>
#include <mutex>

#include <omp.h>

#include "exceed/config.hpp"
#include "exceed/error.hpp"
#include "exceed/montecarlo.hpp"
#include "exceed/numeric.hpp"
#include "exceed/tails.hpp"

namespace exceed {

namespace {

constexpr double kRhoCutoff = 1e-14;

double lag_integral(const ScaleDistribution& dist, double u, double r, double tol) {
  const double scale = 1.0 + r;
  const auto h = [u, scale](double s) {
    return s > 0.0 ? std::exp(-u * u / (2.0 * scale * s * s)) : 0.0;
  };
  return scale_expectation(dist, h, u / std::sqrt(scale), tol, "berman_sum");
}

}  // namespace

BermanSumResult berman_sum(const CorrelationModel& model, const ScaleDistribution& dist, std::uint64_t n,
                           double x, double tol, Execution execution) {
  if (!dist.is_weibullian()) throw ConfigError("berman_sum requires the Weibullian scale law");
  if (n < 2) throw ConfigError("berman_sum: n must be >= 2");
  if (!(tol > 0.0 && tol <= 1e-6)) throw ConfigError("berman_sum: tol must lie in (0, 1e-6]");

  BermanSumResult result;
  result.n = n;
  result.level = solve_level(dist, static_cast<double>(n), x);

  std::vector<double> rho;
  for (std::uint64_t k = 1; k < n; ++k) {
    const double r = std::abs(model.rho(k));
    if (r < kRhoCutoff) {
      result.truncated = true;
      break;
    }
    rho.push_back(r);
  }
  result.terms = rho.size();
  const double nd = static_cast<double>(n);
  if (result.truncated) {
    const double bound = lag_integral(dist, result.level, kRhoCutoff, tol);
    result.tail_bound = nd * static_cast<double>(n - 1 - rho.size()) * kRhoCutoff * bound * bound;
  }

  std::vector<double> terms(rho.size());
  const auto total = static_cast<std::int64_t>(rho.size());
  const auto evaluate = [&](std::int64_t i) {
    const double I = lag_integral(dist, result.level, rho[i], tol);
    terms[i] = rho[i] * I * I;
  };
  // Runs of equal correlations (e.g. a capped power law) reuse one quadrature.
  const auto fill_repeats = [&] {
    for (std::int64_t i = 1; i < total; ++i) {
      if (rho[i] == rho[i - 1]) terms[i] = terms[i - 1];
    }
  };
  const auto is_head = [&](std::int64_t i) { return i == 0 || rho[i] != rho[i - 1]; };

  if (execution == Execution::kSerial) {
    for (std::int64_t i = 0; i < total; ++i) {
      if (is_head(i)) evaluate(i);
    }
  } else {
    std::exception_ptr failure;
    std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < total; ++i) {
      if (!is_head(i)) continue;
      try {
        evaluate(i);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  fill_repeats();

  CompensatedSum sum;
  for (const double t : terms) sum.add(t);
  result.value = nd * sum.value();
  return result;
}

ExperimentReport berman_report(const CorrelationModel& model, const ScaleDistribution& dist,
                               const std::vector<std::uint64_t>& n_grid, double x, double tol,
                               Execution execution) {
  if (n_grid.empty()) throw ConfigError("berman_report: n grid is empty");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw ConfigError("berman_report: n grid must be strictly increasing");
  }
  ExperimentReport report;
  report.test = "berman-sum";
  report.provenance["tool"] = "exceed";
  report.provenance["version"] = EXCEED_VERSION;
  report.provenance["model"] = to_json(model);
  report.provenance["dist"] = to_json(dist);
  report.provenance["x"] = x;
  report.provenance["tol"] = tol;

  Table table{"berman_sum", {"n", "level", "value", "terms", "truncated", "tail_bound"}, {}};
  std::vector<double> values;
  for (const auto n : n_grid) {
    const auto r = berman_sum(model, dist, n, x, tol, execution);
    values.push_back(r.value);
    table.rows.push_back({static_cast<double>(n), r.level, r.value, static_cast<double>(r.terms),
                          r.truncated ? 1.0 : 0.0, r.tail_bound});
  }
  if (model.berman_ok()) {
    GateOutcome o;
    o.pass = true;
    o.empirical = values.back();
    o.target = values.front();
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (!(values[i] < values[i - 1])) o.pass = false;
    }
    report.gates.push_back(Gate::combine("berman_decreasing", "value strictly decreasing along the n grid", {o}));
  } else {
    report.notes["gated"] = false;
    report.notes["reason"] = model.describe() + " violates rho(n) ln n -> 0";
  }
  report.tables.push_back(std::move(table));
  return report;
}

}  // namespace exceed
