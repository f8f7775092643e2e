// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "exceed/correlation.hpp"
#include "exceed/montecarlo.hpp"
#include "exceed/numeric.hpp"
#include "exceed/rng.hpp"
#include "exceed/scaling.hpp"
#include "exceed/stats.hpp"
#include "exceed/tails.hpp"

using namespace exceed;

namespace {

int failures = 0;

void emit(int id, const char* title, bool pass, const std::string& detail, double seconds) {
  std::printf("%s %2d %-28s %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, title, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

void run(int id, const char* title, const std::function<bool(std::string&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  emit(id, title, pass, detail, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
}

// Passes only if the named gate exists and passes; appends a short summary.
bool gate(const ExperimentReport& r, const std::string& name, std::string& detail) {
  const Gate* g = r.find_gate(name);
  if (!g) {
    detail += " missing " + name + ";";
    return false;
  }
  const auto& o = g->primary();
  if (o.dof > 0) {
    detail += fmt(" %s p=%.3g dof=%d", name.c_str(), o.p_value, o.dof);
  } else {
    detail += fmt(" %s emp=%.4g target=%.4g", name.c_str(), o.empirical, o.target);
  }
  detail += fmt(" failed=%zu/%zu;", g->seeds_failed, g->outcomes.size());
  return g->pass;
}

const auto kWeibullian = ScaleDistribution::weibullian(1.0, 1.0, 0.0, 1.0);
const auto kBounded = ScaleDistribution::bounded(1.0);

ExperimentConfig harness(const ScaleDistribution& dist) {
  ExperimentConfig c;
  c.model = CorrelationModel::geometric(0.5);
  c.dist = dist;
  c.n = 65536;
  c.replications = 4000;
  c.levels = {{0.0, 0.0}, {1.0, 0.5}};
  c.intervals = {{0.0, 1.0}, {0.0, 0.5}, {0.5, 1.0}};
  c.avoidance_unions = {{{0.0, 0.25}, {0.5, 0.75}}};
  c.k = 2;
  c.l = 1;
  c.blocks = {0.5, 0.25, 0.25};
  c.n_grid = {4096, 16384, 65536};
  c.master_seed = 20261014;
  c.seed_count = 20;
  return c;
}

const std::string kLevel0 = "x=0,y=0";

bool poisson_gates(const ExperimentReport& r, std::string& detail) {
  bool ok = true;
  for (const char* d : {"1", "2"}) {
    ok &= gate(r, "mean[" + kLevel0 + ",B=(0,1],d=" + d + "]", detail);
    ok &= gate(r, "chi_square[" + kLevel0 + ",B=(0,1],d=" + d + "]", detail);
    ok &= gate(r, "avoidance[" + kLevel0 + ",B=(0,0.5],d=" + d + "]", detail);
  }
  return ok;
}

}  // namespace

int main() {
  run(1, "constants exactness", [](std::string& detail) {
    const auto a = product_constants(0.5, 2.0);
    const auto b = product_constants(1.0, 2.0);
    double err = std::max({std::abs(a.Q - 1.0), std::abs(a.T - 1.0), std::abs(b.Q - std::pow(2.0, 0.25)),
                           std::abs(b.T - std::sqrt(2.0))});
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> range(0.2, 5.0);
    double identity = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double L = range(gen), p = range(gen);
      const double T = product_constants(L, p).T;
      identity = std::max(identity, std::abs(scaled_product_constants(L, p, 2.0, 0.5).D - T) / T);
    }
    detail = fmt("max |Q,T error| = %.2e, max |D/T - 1| = %.2e over 50 draws", err, identity);
    return err <= 1e-12 && identity <= 1e-12;
  });

  run(2, "tail asymptotic vs oracle", [](std::string& detail) {
    const auto& w = kWeibullian.weibullian_params();
    std::vector<double> dev;
    for (int e = 3; e <= 10; ++e) {
      const double u = asymptotic_tail_level(w, std::pow(10.0, -e));
      dev.push_back(std::abs(product_tail_report(kWeibullian, u).ratio - 1.0));
      detail += fmt("%.4g ", dev.back());
    }
    bool ok = dev.back() <= 0.10;
    for (std::size_t i = 1; i < dev.size(); ++i) ok &= dev[i] <= dev[i - 1];
    detail = "|ratio - 1| = " + detail;
    return ok;
  });

  run(3, "scaled-product tail MC", [](std::string& detail) {
    const double q = 2.0, Ln = 0.5;
    const auto log_gap = [&](double u) {
      return std::log(scaled_product_tail_asymptotic(1.0, 1.0, 0.0, 1.0, q, Ln, u)) - std::log(1e-4);
    };
    const double u = find_root(log_gap, 5.0, 100.0, {1e-14, 0.0, 200});
    const double target = scaled_product_tail_asymptotic(1.0, 1.0, 0.0, 1.0, q, Ln, u);
    constexpr std::size_t kSamples = 10'000'000;
    RandomStream stream(99, StreamPurpose::kAuxiliary, 0);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < kSamples; ++i) {
      const double s = kWeibullian.quantile_log(std::log(stream.uniform()));
      const double z = std::pow(-std::log(stream.uniform()) / Ln, 1.0 / q);
      hits += s * z > u ? 1 : 0;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(kSamples);
    const double se = binomial_se(target, kSamples);
    const double oracle = scaled_product_tail_oracle(kWeibullian, q, Ln, u);
    detail = fmt("u=%.6g asymptotic=%.5g mc=%.5g se=%.2g oracle=%.5g", u, target, p, se, oracle);
    return std::abs(p - target) <= std::max(3.0 * se, 0.10 * target);
  });

  run(4, "level consistency", [](std::string& detail) {
    const auto& w = kWeibullian.weibullian_params();
    bool ok = true;
    double worst = 0.0;
    for (const double x : {-1.0, 0.0, 2.0}) {
      std::vector<double> gap;
      for (const double n : {1e4, 1e6, 1e8}) {
        const double u = solve_level(kWeibullian, n, x);
        worst = std::max(worst, std::abs(n * product_tail_oracle(kWeibullian, u, 1e-12) / std::exp(-x) - 1.0));
        const auto c = norming_constants(w, n);
        gap.push_back(std::abs(u - c.level(x)) / c.a_n);
      }
      const bool decreasing = gap[1] < gap[0] && gap[2] < gap[1];
      ok &= decreasing;
      detail += fmt(" x=%g gap/a_n=%.4g,%.4g,%.4g%s;", x, gap[0], gap[1], gap[2], decreasing ? "" : " (not decreasing)");
    }
    ok &= worst <= 1e-9;
    detail = fmt("max |n P/e^-x - 1| = %.2e;", worst) + detail;
    return ok;
  });

  // Criteria 5-9 share one 20-seed ensemble per scaling model at n = 2^16.
  std::vector<Ensemble> weib, bound, weib_small[2];
  double ensemble_seconds = 0.0;
  try {
    const auto start = std::chrono::steady_clock::now();
    const auto cw = harness(kWeibullian);
    weib = simulate_seeds(cw, cw.n);
    bound = simulate_seeds(harness(kBounded), cw.n);
    weib_small[0].push_back(simulate_ensemble(cw, 4096, cw.master_seed));
    weib_small[1].push_back(simulate_ensemble(cw, 16384, cw.master_seed));
    ensemble_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("# ensembles simulated in %.1fs\n", ensemble_seconds);
  } catch (const std::exception& e) {
    std::printf("# ensemble simulation failed: %s\n", e.what());
  }
  const bool have = !weib.empty() && !bound.empty();
  const auto needs = [have](const std::function<bool(std::string&)>& body) {
    return [have, body](std::string& detail) {
      if (!have) {
        detail = "ensembles unavailable";
        return false;
      }
      return body(detail);
    };
  };

  run(5, "Poisson limit, Weibullian", needs([&](std::string& detail) {
        return poisson_gates(analyze_poisson(harness(kWeibullian), weib), detail);
      }));

  run(6, "Poisson limit, bounded", needs([&](std::string& detail) {
        return poisson_gates(analyze_poisson(harness(kBounded), bound), detail);
      }));

  run(7, "joint order statistics", needs([&](std::string& detail) {
        const std::vector<std::vector<Ensemble>> by_n{weib_small[0], weib_small[1], weib};
        const auto r = analyze_joint_order(harness(kWeibullian), by_n);
        bool ok = gate(r, "joint_order[k=2,l=1," + kLevel0 + ",n=65536]", detail);
        ok &= gate(r, "joint_order_trend[k=2,l=1," + kLevel0 + "]", detail);
        for (const auto& row : r.tables.front().rows) {
          if (row[1] == 0.0 && row[2] == 0.0) detail += fmt(" dev(n=%g)=%.4f", row[0], row[5]);
        }
        return ok;
      }));

  run(8, "max/min independence", needs([&](std::string& detail) {
        bool ok = true;
        for (const auto* seeds : {&weib, &bound}) {
          const auto r = analyze_independence(harness(seeds == &weib ? kWeibullian : kBounded), *seeds);
          detail += seeds == &weib ? " weibullian:" : " bounded:";
          ok &= gate(r, "independence[x=0,y=0]", detail);
          ok &= gate(r, "independence[x=1,y=0.5]", detail);
        }
        return ok;
      }));

  run(9, "block limits", needs([&](std::string& detail) {
        const auto r = analyze_blocks(harness(kWeibullian), weib);
        bool ok = gate(r, "block[" + kLevel0 + ",i=0,theta=0.5]", detail);
        ok &= gate(r, "block_pair[" + kLevel0 + ",i=1,j=2]", detail);
        return ok;
      }));

  run(10, "Berman sum", [](std::string& detail) {
    const std::vector<std::uint64_t> grid{1024, 4096, 16384, 65536};
    const auto r = berman_report(CorrelationModel::geometric(0.5), kWeibullian, grid, 0.0);
    const bool ok = gate(r, "berman_decreasing", detail);
    for (const auto& row : r.tables.front().rows) detail += fmt(" %.4g", row[2]);
    const auto control = berman_report(CorrelationModel::log_decay(0.5), kWeibullian, grid, 0.0);
    detail += "; log decay (ungated):";
    for (const auto& row : control.tables.front().rows) detail += fmt(" %.4g", row[2]);
    return ok && control.gates.empty();
  });

  run(11, "thread-count reproducibility", [](std::string& detail) {
    auto c = harness(kWeibullian);
    c.n = 4096;
    c.replications = 200;
    c.n_grid = {1024, 4096};
    c.seed_count = 2;
    bool ok = true;
    std::size_t checked = 0;
    for (const auto* dist : {&kWeibullian, &kBounded}) {
      c.dist = *dist;
      std::vector<std::string> dumps[3];
      for (int variant = 0; variant < 3; ++variant) {
        c.thread_count = variant == 0 ? 1 : 8;
        const auto exec = variant == 2 ? Execution::kSerial : Execution::kParallel;
        for (const auto& r : {run_poisson_test(c, exec), run_joint_order_test(c, exec),
                              run_independence_test(c, exec), run_block_test(c, exec)}) {
          dumps[variant].push_back(r.to_json().dump());
        }
      }
      ok &= dumps[0] == dumps[1] && dumps[1] == dumps[2];
      checked += dumps[0].size();
    }
    detail = fmt("%zu reports identical across threads 1, 8 and serial: %s", checked, ok ? "yes" : "no");
    return ok;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
