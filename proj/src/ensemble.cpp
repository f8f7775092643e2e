#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#include <omp.h>

#include "exceed/error.hpp"
#include "exceed/montecarlo.hpp"
#include "exceed/pointproc.hpp"
#include "exceed/rng.hpp"
#include "exceed/scaling.hpp"

namespace exceed {

namespace {

struct Layout {
  std::vector<Interval> intervals;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;
};

Layout make_layout(const ExperimentConfig& config, std::uint64_t n) {
  Layout layout;
  layout.intervals = config.intervals;
  for (const auto& u : config.avoidance_unions) {
    layout.intervals.insert(layout.intervals.end(), u.begin(), u.end());
  }
  double cumulative = 0.0;
  std::uint64_t begin = 0;
  for (const double theta : config.blocks) {
    cumulative += theta;
    const auto end = std::min<std::uint64_t>(n, static_cast<std::uint64_t>(std::llround(cumulative * n)));
    if (end <= begin) throw ConfigError("block fraction " + format_number(theta) + " is empty at n=" + std::to_string(n));
    layout.blocks.emplace_back(begin, end);
    begin = end;
  }
  return layout;
}

// floor(s n) < i <= floor(t n) for 1-based i, i.e. 0-based [floor(s n), floor(t n)).
std::pair<std::size_t, std::size_t> index_range(const Interval& iv, std::size_t n) {
  const auto a = static_cast<std::size_t>(std::floor(iv.s * static_cast<double>(n)));
  const auto b = static_cast<std::size_t>(std::floor(iv.t * static_cast<double>(n)));
  return {a, std::max(a, b)};
}

struct Scratch {
  explicit Scratch(const CirculantEmbedding& embedding, std::size_t n)
      : workspace(embedding.make_workspace()), first(n), second(n), scales(n), y(n) {}
  CirculantEmbedding::Workspace workspace;
  std::vector<double> first, second, scales, y, select;
  std::vector<std::uint32_t> prefix;
};

class Kernel {
 public:
  Kernel(const ExperimentConfig& config, const Ensemble& ensemble, const CirculantEmbedding& embedding)
      : config_(config), ens_(ensemble), embedding_(embedding) {
    for (const auto& iv : ensemble.intervals) ranges_.push_back(index_range(iv, ensemble.n));
  }

  void run_pair(std::uint64_t pair, std::vector<ReplicationSummary>& out, Scratch& s) const {
    embedding_.sample_pair(ens_.seed, pair, s.first, s.second, s.workspace);
    for (std::uint64_t half = 0; half < 2; ++half) {
      const std::uint64_t r = 2 * pair + half;
      if (r >= out.size()) break;
      summarize(r, half == 0 ? s.first : s.second, out[r], s);
    }
  }

 private:
  void summarize(std::uint64_t r, std::span<const double> x, ReplicationSummary& rep, Scratch& s) const {
    const std::size_t n = ens_.n;
    RandomStream stream(ens_.seed, StreamPurpose::kScales, r);
    sample_scales_into(config_.dist, stream, s.scales);
    scale_into(x, s.scales, s.y);
    const std::span<const double> y(s.y);

    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    rep.min = *lo_it;
    rep.max = *hi_it;
    const auto order = order_stats(y, config_.k, config_.l, s.select);
    rep.kth_max = order.kth_max;
    rep.lth_min = order.lth_min;

    const std::size_t levels = ens_.levels.upper.size();
    rep.counts.assign(levels * ranges_.size() * 2, 0);
    rep.duality_ok = true;
    s.prefix.resize(n + 1);
    for (std::size_t li = 0; li < levels; ++li) {
      for (int mark = 1; mark <= 2; ++mark) {
        const double u = mark == 1 ? ens_.levels.upper[li] : ens_.levels.lower[li];
        s.prefix[0] = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const bool hit = mark == 1 ? y[i] > u : -y[i] > u;
          s.prefix[i + 1] = s.prefix[i] + (hit ? 1u : 0u);
        }
        for (std::size_t j = 0; j < ranges_.size(); ++j) {
          rep.counts[ens_.count_index(li, j, mark)] = s.prefix[ranges_[j].second] - s.prefix[ranges_[j].first];
        }
        const std::uint64_t total = s.prefix[n];
        const bool below = mark == 1 ? rep.kth_max <= u : rep.lth_min > -u;
        const std::uint64_t rank = mark == 1 ? config_.k : config_.l;
        if (below != (total <= rank - 1)) rep.duality_ok = false;
      }
    }

    rep.block_max.resize(ens_.blocks.size());
    rep.block_min.resize(ens_.blocks.size());
    for (std::size_t b = 0; b < ens_.blocks.size(); ++b) {
      const auto [first, last] = std::minmax_element(y.begin() + static_cast<std::ptrdiff_t>(ens_.blocks[b].first),
                                                     y.begin() + static_cast<std::ptrdiff_t>(ens_.blocks[b].second));
      rep.block_min[b] = *first;
      rep.block_max[b] = *last;
    }
  }

  const ExperimentConfig& config_;
  const Ensemble& ens_;
  const CirculantEmbedding& embedding_;
  std::vector<std::pair<std::size_t, std::size_t>> ranges_;
};

Ensemble simulate_with(const ExperimentConfig& config, std::uint64_t n, std::uint64_t seed,
                       const Levels& levels, const CirculantEmbedding& embedding, Execution execution) {
  auto layout = make_layout(config, n);
  Ensemble ens;
  ens.n = n;
  ens.seed = seed;
  ens.levels = levels;
  ens.intervals = std::move(layout.intervals);
  ens.blocks = std::move(layout.blocks);
  ens.embedding = embedding.info();
  ens.reps.resize(config.replications);

  const Kernel kernel(config, ens, embedding);
  const auto pairs = static_cast<std::int64_t>((config.replications + 1) / 2);

  if (execution == Execution::kSerial) {
    Scratch scratch(embedding, n);
    for (std::int64_t j = 0; j < pairs; ++j) kernel.run_pair(static_cast<std::uint64_t>(j), ens.reps, scratch);
    return ens;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  const int threads = config.thread_count > 0 ? config.thread_count : omp_get_max_threads();
#pragma omp parallel num_threads(threads)
  {
    std::unique_ptr<Scratch> scratch;
    try {
      scratch = std::make_unique<Scratch>(embedding, n);
    } catch (...) {
      const std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
#pragma omp for schedule(dynamic, 4)
    for (std::int64_t j = 0; j < pairs; ++j) {
      if (!scratch) continue;
      try {
        kernel.run_pair(static_cast<std::uint64_t>(j), ens.reps, *scratch);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return ens;
}

}  // namespace

Ensemble simulate_ensemble(const ExperimentConfig& config, std::uint64_t n, std::uint64_t seed,
                           Execution execution) {
  config.validate();
  const CirculantEmbedding embedding(config.model, n);
  return simulate_with(config, n, seed, compute_levels(config, n), embedding, execution);
}

std::vector<Ensemble> simulate_seeds(const ExperimentConfig& config, std::uint64_t n, Execution execution) {
  config.validate();
  const CirculantEmbedding embedding(config.model, n);
  const Levels levels = compute_levels(config, n);
  std::vector<Ensemble> out;
  out.reserve(config.seed_count);
  for (std::uint64_t i = 0; i < config.seed_count; ++i) {
    out.push_back(simulate_with(config, n, derive_seed(config.master_seed, i), levels, embedding, execution));
  }
  return out;
}

}  // namespace exceed
