#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "exceed/correlation.hpp"
#include "exceed/gaussian.hpp"
#include "exceed/report.hpp"
#include "exceed/scaling.hpp"

namespace exceed {

enum class LevelMethod { kSolve, kClosedForm };
enum class Execution { kSerial, kParallel };

/// Normalised index interval (s, t] within (0, 1].
struct Interval {
  double s = 0.0;
  double t = 1.0;
  double length() const noexcept { return t - s; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Level indices: mark 1 uses u_n(x), mark 2 uses u_n(y).
struct LevelPair {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const LevelPair&, const LevelPair&) = default;
};

struct ExperimentConfig {
  CorrelationModel model = CorrelationModel::geometric(0.5);
  ScaleDistribution dist = ScaleDistribution::weibullian(1.0, 1.0, 0.0, 1.0);
  std::uint64_t n = 65536;
  std::uint64_t replications = 4000;
  std::vector<LevelPair> levels{{0.0, 0.0}};
  std::vector<Interval> intervals{{0.0, 1.0}};
  /// Each entry is a set of pairwise disjoint intervals whose union is tested
  /// for avoidance.
  std::vector<std::vector<Interval>> avoidance_unions;
  std::uint64_t k = 1;
  std::uint64_t l = 1;
  /// Fractions theta_i of consecutive disjoint blocks starting at index 1.
  std::vector<double> blocks;
  /// Path lengths for the joint-order bias trend; empty means {n}.
  std::vector<std::uint64_t> n_grid;
  std::uint64_t master_seed = 1;
  std::uint64_t seed_count = 1;
  /// Worker count hint; 0 uses the OpenMP default. Never affects results.
  int thread_count = 0;
  LevelMethod level_method = LevelMethod::kSolve;
  double level_tol = 1e-10;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
  std::vector<std::uint64_t> effective_n_grid() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct Levels {
  std::vector<double> upper;  ///< u_n(x) per level pair
  std::vector<double> lower;  ///< u_n(y) per level pair
};

/// Exceedance levels for path length n using the configured method.
Levels compute_levels(const ExperimentConfig& config, std::uint64_t n);

/// Per-replication statistics from which every test is evaluated.
struct ReplicationSummary {
  std::vector<std::uint32_t> counts;  ///< [level][interval][mark], see Ensemble::count_index
  double kth_max = 0.0;
  double lth_min = 0.0;
  double max = 0.0;
  double min = 0.0;
  std::vector<double> block_max;
  std::vector<double> block_min;
  bool duality_ok = true;
};

/// Replications of one (config, n, seed).
struct Ensemble {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  Levels levels;
  /// Configured intervals followed by the members of every avoidance union.
  std::vector<Interval> intervals;
  /// 0-based [begin, end) index ranges of the blocks.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
  EmbeddingInfo embedding;
  std::vector<ReplicationSummary> reps;

  std::size_t count_index(std::size_t level, std::size_t interval, int mark) const noexcept {
    return (level * intervals.size() + interval) * 2 + static_cast<std::size_t>(mark - 1);
  }
  std::uint32_t get_count(std::size_t r, std::size_t level, std::size_t interval, int mark) const {
    return reps[r].counts[count_index(level, interval, mark)];
  }
};

/// Simulates config.replications replications at length n from `seed`.
/// Replication r uses Gaussian pair r/2 (half r%2) and scale stream r, so the
/// serial and parallel executions produce identical ensembles.
Ensemble simulate_ensemble(const ExperimentConfig& config, std::uint64_t n, std::uint64_t seed,
                           Execution execution = Execution::kParallel);

/// One ensemble per derived seed (config.seed_count of them).
std::vector<Ensemble> simulate_seeds(const ExperimentConfig& config, std::uint64_t n,
                                     Execution execution = Execution::kParallel);

/// Poisson limit of the exceedance point process: per-interval mean counts,
/// count histograms, avoidance of intervals and unions, cross-mark joint
/// avoidance, increment covariances and the order-statistic duality.
ExperimentReport analyze_poisson(const ExperimentConfig& config, std::span<const Ensemble> seeds);
ExperimentReport run_poisson_test(const ExperimentConfig& config,
                                  Execution execution = Execution::kParallel);

/// Joint law of the k-th largest and l-th smallest; `by_n[i]` holds the seed
/// ensembles at effective_n_grid()[i].
ExperimentReport analyze_joint_order(const ExperimentConfig& config,
                                     const std::vector<std::vector<Ensemble>>& by_n);
ExperimentReport run_joint_order_test(const ExperimentConfig& config,
                                      Execution execution = Execution::kParallel);

ExperimentReport analyze_independence(const ExperimentConfig& config,
                                      std::span<const Ensemble> seeds);
ExperimentReport run_independence_test(const ExperimentConfig& config,
                                       Execution execution = Execution::kParallel);

ExperimentReport analyze_blocks(const ExperimentConfig& config, std::span<const Ensemble> seeds);
ExperimentReport run_block_test(const ExperimentConfig& config,
                                Execution execution = Execution::kParallel);

/// exp(-e^-x - e^-y) sum_{i<k} e^{-ix}/i! sum_{j<l} e^{-jy}/j!
double joint_order_limit(std::uint64_t k, std::uint64_t l, double x, double y);

/// Gap P(A and B) - P(A) P(B) between two indicator series with its
/// standard error under independence.
struct IndependenceGap {
  double joint = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
  double gap = 0.0;
  double se = 0.0;
};
IndependenceGap independence_gap(std::span<const char> a, std::span<const char> b);

/// Standard error of P(all A_i) - prod P(A_i) under independence:
/// sqrt((P (1 - P) - P^2 sum (1 - p_i)/p_i) / R), P = prod p_i.
double factorization_se(std::span<const double> probabilities, std::size_t replications);

struct BermanSumResult {
  std::uint64_t n = 0;
  double level = 0.0;
  double value = 0.0;
  std::uint64_t terms = 0;   ///< lags evaluated
  bool truncated = false;    ///< sum stopped where |rho(k)| < 1e-14
  double tail_bound = 0.0;   ///< bound on the omitted terms
};

/// n sum_{k<n} |rho(k)| (E exp(-u^2 / (2 (1+|rho(k)|) S^2)))^2 with u = u_n(x).
/// The double integral over two independent scales factorises, so each lag
/// needs one quantile-domain quadrature.
BermanSumResult berman_sum(const CorrelationModel& model, const ScaleDistribution& dist,
                           std::uint64_t n, double x, double tol = 1e-9,
                           Execution execution = Execution::kParallel);

/// Berman sums over an increasing n grid. Families that satisfy the Berman
/// condition are gated on strict decrease; the others are reported only.
ExperimentReport berman_report(const CorrelationModel& model, const ScaleDistribution& dist,
                               const std::vector<std::uint64_t>& n_grid, double x, double tol = 1e-9,
                               Execution execution = Execution::kParallel);

/// Provenance block shared by all reports.
nlohmann::ordered_json provenance(const ExperimentConfig& config, std::span<const Ensemble> seeds);

}  // namespace exceed
