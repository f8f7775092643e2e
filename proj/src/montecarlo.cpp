#include "exceed/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "exceed/config.hpp"
#include "exceed/error.hpp"
#include "exceed/numeric.hpp"
#include "exceed/rng.hpp"
#include "exceed/stats.hpp"
#include "exceed/tails.hpp"

namespace exceed {

namespace {

constexpr double kZGate = 3.0;
constexpr double kDistributionalFloor = 0.05;
constexpr double kChiSquareAlpha = 0.01;

std::string interval_label(const Interval& iv) {
  return "(" + format_number(iv.s) + "," + format_number(iv.t) + "]";
}

std::string level_label(const LevelPair& lv) {
  return "x=" + format_number(lv.x) + ",y=" + format_number(lv.y);
}

void check_interval(const Interval& iv) {
  if (!(iv.s >= 0.0 && iv.s < iv.t && iv.t <= 1.0)) {
    throw ConfigError("interval " + interval_label(iv) + " must satisfy 0 <= s < t <= 1");
  }
}

GateOutcome z_outcome(double empirical, double target, double se) {
  GateOutcome o;
  o.empirical = empirical;
  o.target = target;
  o.se = se;
  o.threshold = kZGate * se;
  o.statistic = se > 0.0 ? (empirical - target) / se : (empirical == target ? 0.0 : INFINITY);
  o.pass = std::abs(empirical - target) <= o.threshold;
  return o;
}

GateOutcome tolerance_outcome(double empirical, double target, double se) {
  GateOutcome o = z_outcome(empirical, target, se);
  o.threshold = std::max(kZGate * se, kDistributionalFloor);
  o.pass = std::abs(empirical - target) <= o.threshold;
  return o;
}

double mean_of(std::span<const char> flags) {
  std::size_t hits = 0;
  for (const char f : flags) hits += f ? 1 : 0;
  return flags.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(flags.size());
}

void require_seeds(std::span<const Ensemble> seeds) {
  if (seeds.empty()) throw ConfigError("analysis needs at least one ensemble");
  for (const auto& e : seeds) {
    if (e.reps.empty()) throw ConfigError("ensemble has no replications");
  }
}

// Events M(I) <= u(x) and m(I) > -u(y) on a whole path.
std::vector<char> max_below(const Ensemble& e, double u) {
  std::vector<char> out(e.reps.size());
  for (std::size_t r = 0; r < e.reps.size(); ++r) out[r] = e.reps[r].max <= u;
  return out;
}

std::vector<char> min_above(const Ensemble& e, double v) {
  std::vector<char> out(e.reps.size());
  for (std::size_t r = 0; r < e.reps.size(); ++r) out[r] = e.reps[r].min > -v;
  return out;
}

std::vector<char> block_event(const Ensemble& e, std::size_t b, std::size_t level) {
  const double u = e.levels.upper[level];
  const double v = e.levels.lower[level];
  std::vector<char> out(e.reps.size());
  for (std::size_t r = 0; r < e.reps.size(); ++r) {
    out[r] = e.reps[r].block_max[b] <= u && e.reps[r].block_min[b] > -v;
  }
  return out;
}

ExperimentReport start_report(const char* test, const ExperimentConfig& config,
                              std::span<const Ensemble> seeds) {
  ExperimentReport report;
  report.test = test;
  report.provenance = provenance(config, seeds);
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < config.levels.size(); ++i) {
    levels.push_back({{"x", config.levels[i].x},
                      {"y", config.levels[i].y},
                      {"u_upper", seeds.front().levels.upper[i]},
                      {"u_lower", seeds.front().levels.lower[i]}});
  }
  report.notes["levels"] = std::move(levels);
  return report;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 2) throw ConfigError("n must be >= 2 (got " + std::to_string(n) + ")");
  if (replications < 100) {
    throw ConfigError("replications must be >= 100 (got " + std::to_string(replications) + ")");
  }
  if (levels.empty()) throw ConfigError("at least one level pair (x, y) is required");
  for (const auto& lv : levels) {
    if (std::isnan(lv.x) || std::isnan(lv.y) || lv.x == -INFINITY || lv.y == -INFINITY) {
      throw ConfigError("level indices must be real numbers or +infinity");
    }
  }
  for (const auto& iv : intervals) check_interval(iv);
  for (const auto& u : avoidance_unions) {
    if (u.empty()) throw ConfigError("avoidance union must have at least one interval");
    auto sorted = u;
    for (const auto& iv : sorted) check_interval(iv);
    std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.s < b.s; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      if (sorted[i].s < sorted[i - 1].t) throw ConfigError("avoidance union intervals must be disjoint");
    }
  }
  const auto grid = effective_n_grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 2) throw ConfigError("n_grid entries must be >= 2");
    if (i > 0 && grid[i] <= grid[i - 1]) throw ConfigError("n_grid must be strictly increasing");
  }
  if (!n_grid.empty() && n_grid.back() != n) throw ConfigError("n_grid must end at n");
  if (k < 1 || l < 1 || k > grid.front() || l > grid.front()) {
    throw ConfigError("k and l must lie in [1, " + std::to_string(grid.front()) + "]");
  }
  double total = 0.0;
  for (const double theta : blocks) {
    if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("block fractions must lie in (0, 1]");
    total += theta;
  }
  if (total > 1.0 + 1e-12) throw ConfigError("block fractions must sum to at most 1 (got " + format_number(total) + ")");
  if (seed_count < 1) throw ConfigError("seed_count must be >= 1");
  if (thread_count < 0) throw ConfigError("threads must be >= 0");
  if (!(level_tol > 0.0 && level_tol <= 1e-4)) throw ConfigError("level_tol must lie in (0, 1e-4]");
  if (level_method == LevelMethod::kClosedForm && !dist.is_weibullian()) {
    throw ConfigError("closed-form levels exist only for the Weibullian scale law");
  }
}

std::vector<std::uint64_t> ExperimentConfig::effective_n_grid() const {
  return n_grid.empty() ? std::vector<std::uint64_t>{n} : n_grid;
}

Levels compute_levels(const ExperimentConfig& config, std::uint64_t n) {
  const auto level = [&](double x) -> double {
    if (x == INFINITY) return INFINITY;
    if (config.level_method == LevelMethod::kClosedForm) {
      return norming_constants(config.dist.weibullian_params(), static_cast<double>(n)).level(x);
    }
    return solve_level(config.dist, static_cast<double>(n), x, config.level_tol);
  };
  Levels out;
  for (const auto& lv : config.levels) {
    out.upper.push_back(level(lv.x));
    out.lower.push_back(level(lv.y));
  }
  return out;
}

double joint_order_limit(std::uint64_t k, std::uint64_t l, double x, double y) {
  if (x == -INFINITY || y == -INFINITY) return 0.0;
  const double ex = std::exp(-x);
  const double ey = std::exp(-y);
  const auto partial = [](std::uint64_t terms, double e) {
    double term = 1.0;
    double sum = 1.0;
    for (std::uint64_t i = 1; i < terms; ++i) {
      term *= e / static_cast<double>(i);
      sum += term;
    }
    return sum;
  };
  return std::exp(-ex - ey) * partial(k, ex) * partial(l, ey);
}

IndependenceGap independence_gap(std::span<const char> a, std::span<const char> b) {
  if (a.size() != b.size()) throw LengthMismatch("independence_gap: series differ in length");
  if (a.empty()) throw ConfigError("independence_gap: empty series");
  IndependenceGap g;
  std::size_t both = 0;
  for (std::size_t i = 0; i < a.size(); ++i) both += (a[i] && b[i]) ? 1 : 0;
  const auto R = static_cast<double>(a.size());
  g.joint = static_cast<double>(both) / R;
  g.p_a = mean_of(a);
  g.p_b = mean_of(b);
  g.gap = g.joint - g.p_a * g.p_b;
  g.se = std::sqrt(g.p_a * (1.0 - g.p_a) * g.p_b * (1.0 - g.p_b) / R);
  return g;
}

double factorization_se(std::span<const double> probabilities, std::size_t replications) {
  if (replications == 0) throw ConfigError("factorization_se: replications must be > 0");
  double P = 1.0;
  for (const double p : probabilities) P *= p;
  if (P <= 0.0) return 0.0;
  double ratio_sum = 0.0;
  for (const double p : probabilities) ratio_sum += (1.0 - p) / p;
  const double var = P * (1.0 - P) - P * P * ratio_sum;
  return std::sqrt(std::max(var, 0.0) / static_cast<double>(replications));
}

nlohmann::ordered_json provenance(const ExperimentConfig& config, std::span<const Ensemble> seeds) {
  nlohmann::ordered_json p;
  p["tool"] = "exceed";
  p["version"] = EXCEED_VERSION;
  const std::string canonical = canonical_config_text(config);
  p["config_hash"] = fnv1a_hex(canonical);
  auto cfg = to_json(config);
  cfg.erase("threads");
  p["config"] = std::move(cfg);
  p["master_seed"] = config.master_seed;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  for (const auto& e : seeds) list.push_back({{"n", e.n}, {"seed", e.seed}});
  p["ensembles"] = std::move(list);
  if (!seeds.empty()) {
    const auto& info = seeds.front().embedding;
    p["embedding"] = {{"method", info.method},
                      {"circulant_size", info.circulant_size},
                      {"min_eigenvalue", info.min_eigenvalue},
                      {"clipped_count", info.clipped_count},
                      {"warning", info.warning}};
  }
  return p;
}

ExperimentReport analyze_poisson(const ExperimentConfig& config, std::span<const Ensemble> seeds) {
  require_seeds(seeds);
  auto report = start_report("poisson", config, seeds);
  const std::size_t R = config.replications;
  const double Rd = static_cast<double>(R);
  const std::size_t base = config.intervals.size();

  Table summary{"poisson_intervals",
                {"level", "x_d", "interval", "s", "t", "mark", "mean", "target_mean", "p_empty",
                 "target_p_empty", "chi_square", "dof", "p_value"},
                {}};
  Table histogram{"poisson_histogram", {"level", "interval", "mark", "count", "observed", "expected"}, {}};

  for (std::size_t li = 0; li < config.levels.size(); ++li) {
    const auto& lv = config.levels[li];
    for (std::size_t j = 0; j < base; ++j) {
      const auto& iv = config.intervals[j];
      for (int mark = 1; mark <= 2; ++mark) {
        const double xd = mark == 1 ? lv.x : lv.y;
        const double lambda = iv.length() * std::exp(-xd);
        const std::string tag = "[" + level_label(lv) + ",B=" + interval_label(iv) + ",d=" + std::to_string(mark) + "]";
        std::vector<GateOutcome> mean_out, chi_out, avoid_out;
        for (std::size_t si = 0; si < seeds.size(); ++si) {
          const auto& e = seeds[si];
          std::vector<std::uint64_t> counts(R);
          CompensatedSum sum;
          std::size_t empty = 0;
          for (std::size_t r = 0; r < R; ++r) {
            counts[r] = e.get_count(r, li, j, mark);
            sum.add(static_cast<double>(counts[r]));
            empty += counts[r] == 0 ? 1 : 0;
          }
          const double mean = sum.value() / Rd;
          mean_out.push_back(z_outcome(mean, lambda, std::sqrt(lambda / Rd)));

          const auto chi = chi_square_poisson(counts, lambda);
          GateOutcome c;
          c.statistic = chi.statistic;
          c.dof = chi.dof;
          c.p_value = chi.p_value;
          c.threshold = kChiSquareAlpha;
          c.pass = !chi.applicable || chi.p_value >= kChiSquareAlpha;
          chi_out.push_back(c);

          const double p_empty = static_cast<double>(empty) / Rd;
          const double target_empty = std::exp(-lambda);
          avoid_out.push_back(tolerance_outcome(p_empty, target_empty, binomial_se(target_empty, R)));

          if (si == 0) {
            summary.rows.push_back({static_cast<double>(li), xd, static_cast<double>(j), iv.s, iv.t,
                                    static_cast<double>(mark), mean, lambda, p_empty, target_empty,
                                    chi.statistic, static_cast<double>(chi.dof), chi.p_value});
            for (const auto& bin : chi.bins) {
              histogram.rows.push_back({static_cast<double>(li), static_cast<double>(j), static_cast<double>(mark),
                                        static_cast<double>(bin.first), bin.observed, bin.expected});
            }
          }
        }
        report.gates.push_back(Gate::combine("mean" + tag, "|mean - (t-s)e^-x_d| <= 3 sqrt(lambda/R)", std::move(mean_out)));
        report.gates.push_back(Gate::combine("chi_square" + tag, "Poisson goodness of fit p >= 0.01", std::move(chi_out)));
        report.gates.push_back(Gate::combine("avoidance" + tag, "|P(N=0) - exp(-lambda)| <= max(3 SE, 0.05)", std::move(avoid_out)));
      }
    }

    // Unions of disjoint intervals, one mark at a time.
    std::size_t offset = base;
    for (const auto& members : config.avoidance_unions) {
      double measure = 0.0;
      std::string label;
      for (const auto& iv : members) {
        measure += iv.length();
        label += (label.empty() ? "" : "u") + interval_label(iv);
      }
      for (int mark = 1; mark <= 2; ++mark) {
        const double target = std::exp(-measure * std::exp(-(mark == 1 ? lv.x : lv.y)));
        std::vector<GateOutcome> outs;
        for (const auto& e : seeds) {
          std::size_t empty = 0;
          for (std::size_t r = 0; r < R; ++r) {
            bool none = true;
            for (std::size_t m = 0; m < members.size(); ++m) none = none && e.get_count(r, li, offset + m, mark) == 0;
            empty += none ? 1 : 0;
          }
          outs.push_back(tolerance_outcome(static_cast<double>(empty) / Rd, target, binomial_se(target, R)));
        }
        report.gates.push_back(Gate::combine("union_avoidance[" + level_label(lv) + ",B=" + label + ",d=" + std::to_string(mark) + "]",
                                             "|P(N(U)=0) - exp(-m(U)e^-x_d)| <= max(3 SE, 0.05)", std::move(outs)));
      }
      offset += members.size();
    }

    // Cross-mark joint avoidance over every (B1, B2) pair of configured intervals.
    for (std::size_t a = 0; a < base; ++a) {
      for (std::size_t b = 0; b < base; ++b) {
        const double target = std::exp(-config.intervals[a].length() * std::exp(-lv.x) -
                                       config.intervals[b].length() * std::exp(-lv.y));
        std::vector<GateOutcome> outs;
        for (const auto& e : seeds) {
          std::size_t empty = 0;
          for (std::size_t r = 0; r < R; ++r) {
            empty += (e.get_count(r, li, a, 1) == 0 && e.get_count(r, li, b, 2) == 0) ? 1 : 0;
          }
          outs.push_back(tolerance_outcome(static_cast<double>(empty) / Rd, target, binomial_se(target, R)));
        }
        report.gates.push_back(Gate::combine("joint_avoidance[" + level_label(lv) + ",B1=" + interval_label(config.intervals[a]) +
                                                 ",B2=" + interval_label(config.intervals[b]) + "]",
                                             "|P(N1(B1)=0,N2(B2)=0) - exp(-m(B1)e^-x - m(B2)e^-y)| <= max(3 SE, 0.05)",
                                             std::move(outs)));
      }
    }

    // Increments over disjoint intervals are uncorrelated.
    for (std::size_t a = 0; a < base; ++a) {
      for (std::size_t b = a + 1; b < base; ++b) {
        const auto& A = config.intervals[a];
        const auto& B = config.intervals[b];
        if (A.t > B.s && B.t > A.s) continue;
        for (int mark = 1; mark <= 2; ++mark) {
          const double e_x = std::exp(-(mark == 1 ? lv.x : lv.y));
          const double se = std::sqrt(A.length() * e_x * B.length() * e_x / Rd);
          std::vector<GateOutcome> outs;
          for (const auto& e : seeds) {
            std::vector<double> ca(R), cb(R);
            for (std::size_t r = 0; r < R; ++r) {
              ca[r] = e.get_count(r, li, a, mark);
              cb[r] = e.get_count(r, li, b, mark);
            }
            outs.push_back(z_outcome(sample_covariance(ca, cb), 0.0, se));
          }
          report.gates.push_back(Gate::combine("covariance[" + level_label(lv) + ",B1=" + interval_label(A) + ",B2=" +
                                                   interval_label(B) + ",d=" + std::to_string(mark) + "]",
                                               "|cov(N(B1), N(B2))| <= 3 sqrt(lambda1 lambda2 / R)", std::move(outs)));
        }
      }
    }
  }

  GateOutcome duality;
  std::size_t bad = 0;
  for (const auto& e : seeds) {
    for (const auto& rep : e.reps) bad += rep.duality_ok ? 0 : 1;
  }
  duality.empirical = static_cast<double>(bad);
  duality.pass = bad == 0;
  report.gates.push_back(Gate::combine("duality", "order statistic vs count duality holds in every replication", {duality}));
  report.tables.push_back(std::move(summary));
  report.tables.push_back(std::move(histogram));
  return report;
}

ExperimentReport analyze_joint_order(const ExperimentConfig& config,
                                     const std::vector<std::vector<Ensemble>>& by_n) {
  const auto grid = config.effective_n_grid();
  if (by_n.size() != grid.size()) throw ConfigError("analyze_joint_order: one ensemble list per n_grid entry is required");
  for (const auto& list : by_n) require_seeds(list);
  auto report = start_report("joint", config, by_n.back());
  const std::size_t R = config.replications;
  const double Rd = static_cast<double>(R);

  Table trend{"joint_deviation", {"n", "x", "y", "empirical", "target", "deviation", "se"}, {}};
  for (std::size_t li = 0; li < config.levels.size(); ++li) {
    const auto& lv = config.levels[li];
    const double target = joint_order_limit(config.k, config.l, lv.x, lv.y);
    const double se = binomial_se(target, R);
    const auto probability = [&](const Ensemble& e) {
      const double u = e.levels.upper[li];
      const double v = e.levels.lower[li];
      std::size_t hits = 0;
      for (const auto& rep : e.reps) hits += (rep.kth_max <= u && rep.lth_min > -v) ? 1 : 0;
      return static_cast<double>(hits) / Rd;
    };
    const std::string tag = "[k=" + std::to_string(config.k) + ",l=" + std::to_string(config.l) + "," + level_label(lv);

    std::vector<GateOutcome> outs;
    for (const auto& e : by_n.back()) outs.push_back(tolerance_outcome(probability(e), target, se));
    report.gates.push_back(Gate::combine("joint_order" + tag + ",n=" + std::to_string(grid.back()) + "]",
                                         "|P(M^(k) <= u(x), m^(l) > -u(y)) - limit| <= max(3 SE, 0.05)", std::move(outs)));

    std::vector<double> deviation;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double p = probability(by_n[i].front());
      deviation.push_back(std::abs(p - target));
      trend.rows.push_back({static_cast<double>(grid[i]), lv.x, lv.y, p, target, deviation.back(), se});
    }
    if (grid.size() > 1) {
      GateOutcome o;
      o.pass = true;
      o.se = se;
      o.threshold = std::sqrt(2.0) * se;
      for (std::size_t i = 1; i < deviation.size(); ++i) {
        o.statistic = std::max(o.statistic, deviation[i] - deviation[i - 1]);
        if (deviation[i] > deviation[i - 1] + o.threshold) o.pass = false;
      }
      o.empirical = deviation.back();
      o.target = deviation.front();
      report.gates.push_back(Gate::combine("joint_order_trend" + tag + "]",
                                           "|dev(n_i+1)| <= |dev(n_i)| + sqrt(SE_i^2 + SE_i+1^2) along n_grid", {o}));
    }
  }
  report.tables.push_back(std::move(trend));
  return report;
}

ExperimentReport analyze_independence(const ExperimentConfig& config, std::span<const Ensemble> seeds) {
  require_seeds(seeds);
  auto report = start_report("independence", config, seeds);
  Table table{"independence", {"x", "y", "p_max", "p_min", "joint", "gap", "se"}, {}};
  for (std::size_t li = 0; li < config.levels.size(); ++li) {
    const auto& lv = config.levels[li];
    std::vector<GateOutcome> outs;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      const auto& e = seeds[si];
      const auto g = independence_gap(max_below(e, e.levels.upper[li]), min_above(e, e.levels.lower[li]));
      GateOutcome o = z_outcome(g.gap, 0.0, g.se);
      if (g.se == 0.0) o.pass = g.gap == 0.0;
      outs.push_back(o);
      if (si == 0) table.rows.push_back({lv.x, lv.y, g.p_a, g.p_b, g.joint, g.gap, g.se});
    }
    report.gates.push_back(Gate::combine("independence[" + level_label(lv) + "]",
                                         "|P(M <= u, m > -v) - P(M <= u) P(m > -v)| <= 3 pooled SE", std::move(outs)));
  }
  report.tables.push_back(std::move(table));
  return report;
}

ExperimentReport analyze_blocks(const ExperimentConfig& config, std::span<const Ensemble> seeds) {
  require_seeds(seeds);
  if (config.blocks.empty()) throw ConfigError("block test needs at least one block fraction");
  auto report = start_report("blocks", config, seeds);
  const std::size_t R = config.replications;
  const std::size_t B = config.blocks.size();
  Table table{"blocks", {"x", "y", "block", "theta", "empirical", "target"}, {}};

  for (std::size_t li = 0; li < config.levels.size(); ++li) {
    const auto& lv = config.levels[li];
    const std::string tag = level_label(lv);
    std::vector<std::vector<GateOutcome>> per_block(B);
    std::vector<GateOutcome> joint_out;
    std::vector<std::vector<GateOutcome>> pair_out(B * B);

    for (std::size_t si = 0; si < seeds.size(); ++si) {
      const auto& e = seeds[si];
      std::vector<std::vector<char>> events;
      std::vector<double> probs;
      for (std::size_t b = 0; b < B; ++b) {
        events.push_back(block_event(e, b, li));
        probs.push_back(mean_of(events.back()));
        const double target = std::exp(-config.blocks[b] * (std::exp(-lv.x) + std::exp(-lv.y)));
        per_block[b].push_back(tolerance_outcome(probs.back(), target, binomial_se(target, R)));
        if (si == 0) table.rows.push_back({lv.x, lv.y, static_cast<double>(b), config.blocks[b], probs.back(), target});
      }
      if (B > 1) {
        std::size_t all = 0;
        for (std::size_t r = 0; r < R; ++r) {
          bool ok = true;
          for (std::size_t b = 0; b < B && ok; ++b) ok = events[b][r] != 0;
          all += ok ? 1 : 0;
        }
        double product = 1.0;
        for (const double p : probs) product *= p;
        GateOutcome o = z_outcome(static_cast<double>(all) / static_cast<double>(R), product, factorization_se(probs, R));
        joint_out.push_back(o);
        for (std::size_t a = 0; a < B; ++a) {
          for (std::size_t b = a + 1; b < B; ++b) {
            const auto g = independence_gap(events[a], events[b]);
            GateOutcome q = z_outcome(g.gap, 0.0, g.se);
            if (g.se == 0.0) q.pass = g.gap == 0.0;
            pair_out[a * B + b].push_back(q);
          }
        }
      }
    }
    for (std::size_t b = 0; b < B; ++b) {
      report.gates.push_back(Gate::combine("block[" + tag + ",i=" + std::to_string(b) + ",theta=" + format_number(config.blocks[b]) + "]",
                                           "|P(-u(y) < m(I) <= M(I) <= u(x)) - exp(-theta(e^-x + e^-y))| <= max(3 SE, 0.05)",
                                           std::move(per_block[b])));
    }
    if (B > 1) {
      report.gates.push_back(Gate::combine("block_factorization[" + tag + "]",
                                           "|P(all blocks) - prod P(block)| <= 3 SE", std::move(joint_out)));
      for (std::size_t a = 0; a < B; ++a) {
        for (std::size_t b = a + 1; b < B; ++b) {
          report.gates.push_back(Gate::combine("block_pair[" + tag + ",i=" + std::to_string(a) + ",j=" + std::to_string(b) + "]",
                                               "|P(A_i A_j) - P(A_i) P(A_j)| <= 3 pooled SE", std::move(pair_out[a * B + b])));
        }
      }
    }
  }
  report.tables.push_back(std::move(table));
  return report;
}

ExperimentReport run_poisson_test(const ExperimentConfig& config, Execution execution) {
  const auto seeds = simulate_seeds(config, config.n, execution);
  return analyze_poisson(config, seeds);
}

ExperimentReport run_joint_order_test(const ExperimentConfig& config, Execution execution) {
  config.validate();
  const auto grid = config.effective_n_grid();
  std::vector<std::vector<Ensemble>> by_n;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i + 1 == grid.size()) {
      by_n.push_back(simulate_seeds(config, grid[i], execution));
    } else {
      by_n.push_back({simulate_ensemble(config, grid[i], config.master_seed, execution)});
    }
  }
  return analyze_joint_order(config, by_n);
}

ExperimentReport run_independence_test(const ExperimentConfig& config, Execution execution) {
  const auto seeds = simulate_seeds(config, config.n, execution);
  return analyze_independence(config, seeds);
}

ExperimentReport run_block_test(const ExperimentConfig& config, Execution execution) {
  const auto seeds = simulate_seeds(config, config.n, execution);
  return analyze_blocks(config, seeds);
}

}  // namespace exceed
