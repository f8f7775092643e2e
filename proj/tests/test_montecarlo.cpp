#include <gtest/gtest.h>

#include <cmath>

#include "exceed/error.hpp"
#include "exceed/montecarlo.hpp"
#include "exceed/tails.hpp"

using namespace exceed;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.n = 4096;
  c.replications = 400;
  c.levels = {{0.0, 0.0}, {1.0, 0.5}};
  c.intervals = {{0.0, 1.0}, {0.0, 0.5}, {0.5, 1.0}};
  c.avoidance_unions = {{{0.0, 0.25}, {0.5, 0.75}}};
  c.k = 2;
  c.blocks = {0.5, 0.25, 0.25};
  return c;
}

}  // namespace

TEST(JointOrderLimit, Examples) {
  EXPECT_NEAR(joint_order_limit(1, 1, 0, 0), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(joint_order_limit(2, 1, 0, 0), 2.0 * std::exp(-2.0), 1e-15);
  EXPECT_NEAR(joint_order_limit(1, 1, 0.7, INFINITY), std::exp(-std::exp(-0.7)), 1e-15);
  EXPECT_NEAR(joint_order_limit(3, 2, 1, -1),
              std::exp(-std::exp(-1.0) - std::exp(1.0)) * (1 + std::exp(-1.0) + std::exp(-2.0) / 2) * (1 + std::exp(1.0)),
              1e-14);
}

TEST(IndependenceGap, Arithmetic) {
  const std::vector<char> a{1, 1, 0, 0}, b{1, 0, 1, 0};
  const auto g = independence_gap(a, b);
  EXPECT_EQ(g.joint, 0.25);
  EXPECT_EQ(g.gap, 0.0);
  EXPECT_DOUBLE_EQ(g.se, std::sqrt(0.0625 / 4.0));
  const std::vector<char> ones(4, 1);
  EXPECT_EQ(independence_gap(ones, b).gap, 0.0);
  EXPECT_EQ(independence_gap(ones, b).se, 0.0);
}

TEST(FactorizationSe, TwoEventsReduceToIndependenceSe) {
  const std::vector<double> p{0.3, 0.6};
  EXPECT_NEAR(factorization_se(p, 1000), std::sqrt(0.3 * 0.7 * 0.6 * 0.4 / 1000.0), 1e-15);
}

TEST(Config, Validation) {
  auto c = small_config();
  EXPECT_NO_THROW(c.validate());
  c.replications = 99;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.intervals = {{0.5, 0.5}};
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.blocks = {0.6, 0.5};
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.avoidance_unions = {{{0.0, 0.5}, {0.4, 0.6}}};
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.k = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.dist = ScaleDistribution::bounded(1.0);
  c.level_method = LevelMethod::kClosedForm;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_config();
  c.n_grid = {4096, 1024};
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Levels, ClosedFormAndSolve) {
  auto c = small_config();
  const auto solved = compute_levels(c, c.n);
  c.level_method = LevelMethod::kClosedForm;
  const auto closed = compute_levels(c, c.n);
  const auto nc = norming_constants(c.dist.weibullian_params(), static_cast<double>(c.n));
  EXPECT_EQ(closed.upper[1], nc.level(1.0));
  EXPECT_NEAR(solved.upper[0], closed.upper[0], 0.1 * nc.a_n);
}

TEST(Ensemble, SerialAndParallelIdentical) {
  auto c = small_config();
  c.replications = 201;
  const auto serial = simulate_ensemble(c, c.n, 5, Execution::kSerial);
  for (const int threads : {1, 3}) {
    c.thread_count = threads;
    const auto parallel = simulate_ensemble(c, c.n, 5, Execution::kParallel);
    ASSERT_EQ(parallel.reps.size(), serial.reps.size());
    for (std::size_t r = 0; r < serial.reps.size(); ++r) {
      EXPECT_EQ(parallel.reps[r].counts, serial.reps[r].counts);
      EXPECT_EQ(parallel.reps[r].kth_max, serial.reps[r].kth_max);
      EXPECT_EQ(parallel.reps[r].lth_min, serial.reps[r].lth_min);
      EXPECT_EQ(parallel.reps[r].block_max, serial.reps[r].block_max);
    }
  }
}

TEST(Ensemble, DualityAndLayout) {
  const auto c = small_config();
  const auto e = simulate_ensemble(c, c.n, 2);
  EXPECT_EQ(e.intervals.size(), 5u);
  ASSERT_EQ(e.blocks.size(), 3u);
  EXPECT_EQ(e.blocks[0], (std::pair<std::uint64_t, std::uint64_t>{0, 2048}));
  EXPECT_EQ(e.blocks[2].second, 4096u);
  for (const auto& rep : e.reps) {
    EXPECT_TRUE(rep.duality_ok);
    EXPECT_EQ(rep.counts[e.count_index(0, 0, 1)], rep.counts[e.count_index(0, 1, 1)] + rep.counts[e.count_index(0, 2, 1)]);
    EXPECT_EQ(std::max({rep.block_max[0], rep.block_max[1], rep.block_max[2]}), rep.max);
  }
}

TEST(Reports, BitIdenticalAcrossThreadCounts) {
  auto c = small_config();
  c.seed_count = 2;
  c.thread_count = 1;
  const auto a = run_poisson_test(c).to_json().dump();
  c.thread_count = 4;
  const auto b = run_poisson_test(c).to_json().dump();
  EXPECT_EQ(a, b);
}

TEST(Reports, InfiniteLevelGivesEmptyProcess) {
  auto c = small_config();
  c.levels = {{INFINITY, INFINITY}};
  const auto seeds = simulate_seeds(c, c.n);
  for (const auto& rep : seeds[0].reps) {
    for (const auto v : rep.counts) EXPECT_EQ(v, 0u);
  }
  const auto ind = analyze_independence(c, seeds);
  EXPECT_EQ(ind.gates[0].primary().empirical, 0.0);
  EXPECT_TRUE(ind.pass());
}

TEST(Reports, PoissonGatesOnSmallRun) {
  auto c = small_config();
  c.replications = 2000;
  const auto report = run_poisson_test(c);
  const auto* mean = report.find_gate("mean[x=0,y=0,B=(0,1],d=1]");
  ASSERT_NE(mean, nullptr);
  EXPECT_EQ(mean->primary().target, 1.0);
  EXPECT_NEAR(report.find_gate("avoidance[x=0,y=0,B=(0,1],d=1]")->primary().target, std::exp(-1.0), 1e-15);
  ASSERT_NE(report.find_gate("duality"), nullptr);
  EXPECT_TRUE(report.find_gate("duality")->pass);
  EXPECT_TRUE(mean->pass);
  const auto* cov = report.find_gate("covariance[x=0,y=0,B1=(0,0.5],B2=(0.5,1],d=1]");
  ASSERT_NE(cov, nullptr);
  EXPECT_EQ(cov->primary().target, 0.0);
}

TEST(Reports, SingleBlockMatchesJointOrder) {
  auto c = small_config();
  c.k = 1;
  c.l = 1;
  c.blocks = {1.0};
  const std::vector<Ensemble> seeds{simulate_ensemble(c, c.n, 3)};
  const auto blocks = analyze_blocks(c, seeds);
  const auto joint = analyze_joint_order(c, {seeds});
  EXPECT_EQ(blocks.gates[0].primary().empirical, joint.gates[0].primary().empirical);
  EXPECT_NEAR(blocks.gates[0].primary().target, joint.gates[0].primary().target, 1e-15);
}

TEST(Reports, IndependenceSymmetricUnderFlip) {
  auto c = small_config();
  auto e = simulate_ensemble(c, c.n, 4);
  const auto direct = analyze_independence(c, std::vector<Ensemble>{e});

  auto flipped_config = c;
  for (auto& lv : flipped_config.levels) std::swap(lv.x, lv.y);
  Ensemble f = e;
  std::swap(f.levels.upper, f.levels.lower);
  for (auto& rep : f.reps) {
    const double mx = rep.max;
    rep.max = -rep.min;
    rep.min = -mx;
  }
  const auto flipped = analyze_independence(flipped_config, std::vector<Ensemble>{f});
  for (std::size_t i = 0; i < direct.gates.size(); ++i) {
    EXPECT_EQ(direct.gates[i].primary().empirical, flipped.gates[i].primary().empirical);
  }
}

TEST(Reports, JointOrderTargetsAndTrend) {
  auto c = small_config();
  c.levels = {{0.0, 0.0}};
  c.n_grid = {1024, 4096};
  c.replications = 1000;
  const auto r = run_joint_order_test(c);
  EXPECT_NEAR(r.gates[0].primary().target, 2.0 * std::exp(-2.0), 1e-15);
  ASSERT_EQ(r.gates.size(), 2u);
  EXPECT_EQ(r.tables[0].rows.size(), 2u);
}

TEST(Reports, WhiteNoiseAgreesWithGeometric) {
  ExperimentConfig c;
  c.n = 65536;
  c.replications = 1000;
  const auto geometric = simulate_ensemble(c, c.n, 11);
  c.model = CorrelationModel::geometric(0.0);
  const auto white = simulate_ensemble(c, c.n, 12);
  const auto p = [](const Ensemble& e) {
    std::size_t hits = 0;
    for (const auto& rep : e.reps) hits += (rep.max <= e.levels.upper[0] && rep.min > -e.levels.lower[0]) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(e.reps.size());
  };
  const double a = p(geometric), b = p(white);
  const double se = std::sqrt(a * (1 - a) / 1000.0 + b * (1 - b) / 1000.0);
  EXPECT_LE(std::abs(a - b), 3.0 * se);
}

TEST(Berman, WhiteNoiseIsZero) {
  const auto r = berman_sum(CorrelationModel::geometric(0.0), ScaleDistribution::weibullian(1, 1, 0, 1), 4096, 0.0);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_EQ(r.terms, 0u);
}

TEST(Berman, GeometricDecaysAndParallelMatchesSerial) {
  const auto m = CorrelationModel::geometric(0.5);
  const auto d = ScaleDistribution::weibullian(1, 1, 0, 1);
  const auto small = berman_sum(m, d, 1 << 12, 0.0);
  const auto large = berman_sum(m, d, 1 << 16, 0.0, 1e-9, Execution::kParallel);
  EXPECT_LT(large.value, small.value);
  EXPECT_TRUE(large.truncated);
  EXPECT_GT(large.tail_bound, 0.0);
  EXPECT_LT(large.tail_bound, 1e-6 * large.value);
  EXPECT_EQ(large.value, berman_sum(m, d, 1 << 16, 0.0, 1e-9, Execution::kSerial).value);
}

TEST(Berman, PowerDecayCappedRunsReused) {
  const auto m = CorrelationModel::power(0.3, 2.0);
  const auto d = ScaleDistribution::weibullian(1, 1, 0, 1);
  const auto a = berman_sum(m, d, 2048, 0.0, 1e-9, Execution::kSerial);
  const auto b = berman_sum(m, d, 2048, 0.0, 1e-9, Execution::kParallel);
  EXPECT_EQ(a.value, b.value);
  EXPECT_FALSE(a.truncated);
  EXPECT_EQ(a.terms, 2047u);
}

TEST(Berman, LogDecayReportIsUngated) {
  const auto r = berman_report(CorrelationModel::log_decay(1.0), ScaleDistribution::weibullian(1, 1, 0, 1),
                               {1024, 4096}, 0.0);
  EXPECT_TRUE(r.gates.empty());
  EXPECT_EQ(r.tables[0].rows.size(), 2u);
  EXPECT_GT(r.tables[0].rows[1][2], 0.0);
  EXPECT_THROW(berman_sum(CorrelationModel::geometric(0.5), ScaleDistribution::bounded(1.0), 1024, 0.0), ConfigError);
}
