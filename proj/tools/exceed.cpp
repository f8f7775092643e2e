// exceed: constants, tail and level tables, Monte Carlo verification and raw
// path dumps for randomly scaled Gaussian sequences.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "exceed/config.hpp"
#include "exceed/error.hpp"
#include "exceed/gaussian.hpp"
#include "exceed/montecarlo.hpp"
#include "exceed/pointproc.hpp"
#include "exceed/scaling.hpp"
#include "exceed/tails.hpp"

namespace fs = std::filesystem;
using namespace exceed;
using ojson = nlohmann::ordered_json;

namespace {

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Next unused run-NNNN under root; never reuses an existing directory.
fs::path create_run_dir(const fs::path& root) {
  fs::create_directories(root);
  for (int i = 1; i < 100000; ++i) {
    char name[16];
    std::snprintf(name, sizeof name, "run-%04d", i);
    const fs::path dir = root / name;
    if (fs::create_directory(dir)) return dir;
  }
  throw ConfigError("no free run directory under " + root.string());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

std::string table_csv(const Table& t) {
  std::ostringstream out;
  write_table_csv(out, t);
  return out.str();
}

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;
  std::string started;
  std::vector<std::string> argv;
};

struct Overrides {
  std::optional<std::uint64_t> n, R, k, l, seeds;
  std::optional<double> x, y;
  std::string corr, scale, level_method;
  std::vector<double> theta;
  std::vector<std::uint64_t> n_grid;
};

ExperimentConfig resolve(const Common& c, const Overrides& o) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw ConfigError("cannot open config file '" + c.config_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError("config file '" + c.config_path + "' is not valid JSON: " + e.what());
    }
    cfg = config_from_json(j);
  }
  if (!o.corr.empty()) cfg.model = parse_correlation_spec(o.corr);
  if (!o.scale.empty()) cfg.dist = parse_distribution_spec(o.scale);
  if (o.n) {
    cfg.n = *o.n;
    if (!cfg.n_grid.empty() && cfg.n_grid.back() != cfg.n) cfg.n_grid.clear();
  }
  if (o.R) cfg.replications = *o.R;
  if (o.k) cfg.k = *o.k;
  if (o.l) cfg.l = *o.l;
  if (o.seeds) cfg.seed_count = *o.seeds;
  if (o.x || o.y) {
    const LevelPair base = cfg.levels.empty() ? LevelPair{} : cfg.levels.front();
    cfg.levels = {{o.x.value_or(base.x), o.y.value_or(base.y)}};
  }
  if (!o.theta.empty()) cfg.blocks = o.theta;
  if (!o.n_grid.empty()) {
    cfg.n_grid = o.n_grid;
    if (!o.n) cfg.n = o.n_grid.back();
  }
  if (o.level_method == "closed_form") cfg.level_method = LevelMethod::kClosedForm;
  if (o.level_method == "solve") cfg.level_method = LevelMethod::kSolve;
  if (c.seed) cfg.master_seed = *c.seed;
  if (c.threads) cfg.thread_count = *c.threads;
  cfg.validate();
  return cfg;
}

ojson manifest(const Common& c, const fs::path& dir, const ojson& resolved) {
  ojson m;
  m["tool"] = "exceed";
  m["version"] = EXCEED_VERSION;
  m["argv"] = c.argv;
  m["config_path"] = c.config_path;
  m["resolved"] = resolved;
  m["output_directory"] = dir.string();
  m["started"] = c.started;
  m["finished"] = utc_now();
  return m;
}

void persist(const Common& c, const ojson& resolved, const std::string& primary_name,
             const std::string& primary, const std::vector<Table>& tables) {
  if (c.out.empty()) return;
  const auto dir = create_run_dir(c.out);
  write_text(dir / primary_name, primary);
  for (const auto& t : tables) write_text(dir / (t.name + ".csv"), table_csv(t));
  write_text(dir / "manifest.json", manifest(c, dir, resolved).dump(2) + "\n");
  std::cerr << "wrote " << dir.string() << "\n";
}

int emit_report(const Common& c, const ExperimentConfig* cfg, const ExperimentReport& report) {
  const std::string text = report.to_json().dump(2) + "\n";
  std::cout << text;
  ojson resolved = cfg ? to_json(*cfg) : report.provenance;
  if (cfg) resolved["master_seed"] = cfg->master_seed;
  persist(c, resolved, "report.json", text, report.tables);
  for (const auto& g : report.gates) {
    if (!g.pass) std::cerr << "FAIL " << g.name << " (" << g.seeds_failed << "/" << g.outcomes.size() << " seeds)\n";
  }
  return report.pass() ? 0 : 1;
}

int emit_table(const Common& c, const Table& table, const ojson& summary) {
  const std::string csv = table_csv(table);
  std::cout << csv;
  ojson resolved = summary;
  persist(c, resolved, "summary.json", summary.dump(2) + "\n", {table});
  return 0;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--threads", c.threads, "Worker threads (0 = default); never changes results")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--out", c.out, "Root directory for append-only run directories");
}

void add_overrides(CLI::App* app, Overrides& o) {
  app->add_option("--n", o.n, "Path length")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 28));
  app->add_option("--R", o.R, "Replications per seed")->check(CLI::Range(std::uint64_t{100}, std::uint64_t{1} << 32));
  app->add_option("--x", o.x, "Level index of the upper mark");
  app->add_option("--y", o.y, "Level index of the lower mark");
  app->add_option("--k", o.k, "Rank of the largest value")->check(CLI::PositiveNumber);
  app->add_option("--l", o.l, "Rank of the smallest value")->check(CLI::PositiveNumber);
  app->add_option("--seeds", o.seeds, "Number of derived seeds")->check(CLI::PositiveNumber);
  app->add_option("--corr", o.corr, "Correlation: geometric:r | power:a,c | log:c");
  app->add_option("--scale", o.scale, "Scale law: weibullian:L,p,alpha,C | bounded:gamma");
  app->add_option("--theta", o.theta, "Block fractions")->delimiter(',');
  app->add_option("--n-grid", o.n_grid, "Path lengths for the bias trend")->delimiter(',');
  app->add_option("--levels", o.level_method, "Level construction")->check(CLI::IsMember({"solve", "closed_form"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exceed: exceedance point processes of randomly scaled Gaussian sequences"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EXCEED_VERSION);

  Common common;
  common.started = utc_now();
  common.argv.assign(argv, argv + argc);
  Overrides over;

  // constants
  auto* constants = app.add_subcommand("constants", "Product-tail and norming constants");
  double L = 1.0, p = 1.0, alpha = 0.0, C = 1.0;
  std::optional<double> q, Ln;
  std::vector<double> n_values;
  constants->add_option("--L", L, "Weibull rate L")->required()->check(CLI::PositiveNumber);
  constants->add_option("--p", p, "Weibull exponent p")->required()->check(CLI::PositiveNumber);
  constants->add_option("--alpha", alpha, "Power-law exponent alpha");
  constants->add_option("--C", C, "Prefactor C")->check(CLI::PositiveNumber);
  constants->add_option("--q", q, "Exponent of the scaled variable Z")->check(CLI::PositiveNumber);
  constants->add_option("--Ln", Ln, "Rate of the scaled variable Z")->check(CLI::PositiveNumber);
  constants->add_option("--n", n_values, "Sample sizes for a_n, b_n")->delimiter(',')->check(CLI::Range(2.0, 1e300));
  add_common(constants, common);

  // tail
  auto* tail = app.add_subcommand("tail", "Asymptotic product tail against the quadrature oracle");
  std::string tail_scale = "weibullian:1,1,0,1";
  std::vector<double> us, probs;
  double tail_tol = 1e-10;
  tail->add_option("--scale", tail_scale, "Weibullian scale law");
  tail->add_option("--u", us, "Levels u")->delimiter(',')->check(CLI::PositiveNumber);
  tail->add_option("--probs", probs, "Asymptotic probabilities defining the u grid")
      ->delimiter(',')->check(CLI::Range(1e-300, 0.5));
  tail->add_option("--tol", tail_tol, "Oracle relative tolerance")->check(CLI::Range(1e-14, 1e-6));
  add_common(tail, common);

  // levels
  auto* levels = app.add_subcommand("levels", "Solved exceedance levels u_n(x)");
  std::string level_scale = "weibullian:1,1,0,1";
  std::vector<double> level_n{1e4, 1e6, 1e8}, level_x{-1.0, 0.0, 2.0};
  double level_tol = 1e-10;
  levels->add_option("--scale", level_scale, "Scale law");
  levels->add_option("--n", level_n, "Sample sizes")->delimiter(',')->check(CLI::Range(2.0, 1e300));
  levels->add_option("--x", level_x, "Level indices")->delimiter(',');
  levels->add_option("--tol", level_tol, "Relative tolerance of n P(Y > u) = e^-x")->check(CLI::Range(1e-14, 1e-4));
  add_common(levels, common);

  // verify
  auto* verify = app.add_subcommand("verify", "Monte Carlo and numerical gates");
  verify->require_subcommand(1);
  std::vector<CLI::App*> mc;
  for (const auto* name : {"poisson", "joint", "independence", "blocks"}) {
    auto* sub = verify->add_subcommand(name);
    add_common(sub, common);
    add_overrides(sub, over);
    mc.push_back(sub);
  }
  mc[0]->description("Poisson limit of the exceedance point process");
  mc[1]->description("Joint law of the k-th largest and l-th smallest");
  mc[2]->description("Asymptotic independence of maxima and minima");
  mc[3]->description("Block probabilities and their factorization");
  auto* berman = verify->add_subcommand("berman-sum", "Berman sum along an n grid");
  std::string berman_corr = "geometric:0.5", berman_scale = "weibullian:1,1,0,1";
  std::vector<std::uint64_t> berman_grid{1024, 4096, 16384, 65536};
  double berman_x = 0.0;
  berman->add_option("--corr", berman_corr, "Correlation model");
  berman->add_option("--scale", berman_scale, "Weibullian scale law");
  berman->add_option("--n-grid", berman_grid, "Path lengths")->delimiter(',')->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40));
  berman->add_option("--x", berman_x, "Level index");
  add_common(berman, common);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Dump one Gaussian path, scaled path or point pattern");
  std::string sim_what = "pattern";
  std::uint64_t sim_stream = 0;
  simulate->add_option("--what", sim_what, "gaussian | scaled | pattern")->check(CLI::IsMember({"gaussian", "scaled", "pattern"}));
  simulate->add_option("--stream", sim_stream, "Stream id");
  add_common(simulate, common);
  add_overrides(simulate, over);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*constants) {
      const auto [Q, T] = product_constants(L, p);
      Table table{"constants", {"n", "Q", "T", "A", "D", "a_n", "b_n"}, {}};
      ojson summary{{"L", L}, {"p", p}, {"alpha", alpha}, {"C", C}, {"Q", Q}, {"T", T}};
      double A = NAN, D = NAN;
      if (q || Ln) {
        if (!q || !Ln) throw ConfigError("--q and --Ln must be given together");
        const auto sc = scaled_product_constants(L, p, *q, *Ln);
        A = sc.A;
        D = sc.D;
        summary["q"] = *q;
        summary["Ln"] = *Ln;
        summary["A"] = A;
        summary["D"] = D;
      }
      if (n_values.empty()) table.rows.push_back({NAN, Q, T, A, D, NAN, NAN});
      ojson norming = ojson::array();
      for (const double n : n_values) {
        const auto nc = norming_constants(L, p, alpha, C, n);
        table.rows.push_back({n, Q, T, A, D, nc.a_n, nc.b_n});
        norming.push_back({{"n", n}, {"a_n", nc.a_n}, {"b_n", nc.b_n}});
      }
      if (!n_values.empty()) summary["norming"] = norming;
      return emit_table(common, table, summary);
    }

    if (*tail) {
      const auto dist = parse_distribution_spec(tail_scale);
      if (!dist.is_weibullian()) throw ConfigError("tail needs a Weibullian scale law");
      if (us.empty() && probs.empty()) probs = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
      for (const double pr : probs) us.push_back(asymptotic_tail_level(dist.weibullian_params(), pr));
      std::sort(us.begin(), us.end());
      Table table{"tail", {"u", "asymptotic", "oracle", "ratio"}, {}};
      double worst = 0.0;
      for (const double u : us) {
        const auto r = product_tail_report(dist, u, tail_tol);
        table.rows.push_back({r.u, r.asymptotic, r.oracle, r.ratio});
        worst = std::max(worst, std::abs(r.ratio - 1.0));
      }
      ojson summary{{"dist", to_json(dist)}, {"tol", tail_tol}, {"points", us.size()},
                    {"final_ratio", table.rows.back()[3]}, {"max_abs_ratio_minus_1", worst}};
      return emit_table(common, table, summary);
    }

    if (*levels) {
      const auto dist = parse_distribution_spec(level_scale);
      Table table{"levels", {"n", "x", "u_solve", "a_n", "b_n", "u_closed", "gap_over_a_n"}, {}};
      for (const double n : level_n) {
        for (const double x : level_x) {
          const double u = solve_level(dist, n, x, level_tol);
          if (dist.is_weibullian()) {
            const auto nc = norming_constants(dist.weibullian_params(), n);
            table.rows.push_back({n, x, u, nc.a_n, nc.b_n, nc.level(x), std::abs(u - nc.level(x)) / nc.a_n});
          } else {
            table.rows.push_back({n, x, u, NAN, NAN, NAN, NAN});
          }
        }
      }
      ojson summary{{"dist", to_json(dist)}, {"tol", level_tol}, {"rows", table.rows.size()}};
      return emit_table(common, table, summary);
    }

    if (*verify) {
      if (*berman) {
        const auto report = berman_report(parse_correlation_spec(berman_corr),
                                          parse_distribution_spec(berman_scale), berman_grid, berman_x);
        return emit_report(common, nullptr, report);
      }
      const auto cfg = resolve(common, over);
      if (*mc[0]) return emit_report(common, &cfg, run_poisson_test(cfg));
      if (*mc[1]) return emit_report(common, &cfg, run_joint_order_test(cfg));
      if (*mc[2]) return emit_report(common, &cfg, run_independence_test(cfg));
      return emit_report(common, &cfg, run_block_test(cfg));
    }

    if (*simulate) {
      auto cfg = resolve(common, over);
      const auto gauss = sample_path(cfg.model, cfg.n, cfg.master_seed, sim_stream);
      std::ostringstream out;
      if (sim_what == "gaussian") {
        write_path_csv(out, gauss);
      } else {
        const auto scales = sample_scales(cfg.dist, cfg.n, cfg.master_seed, sim_stream);
        const auto scaled = scale_path(gauss, scales, cfg.dist.describe());
        if (sim_what == "scaled") {
          GaussianPath view = gauss;
          view.values = scaled.values;
          write_path_csv(out, view);
        } else {
          const auto lv = compute_levels(cfg, cfg.n);
          write_pattern_csv(out, extract(scaled, lv.upper.front(), lv.lower.front()));
        }
      }
      std::cout << out.str();
      ojson resolved = to_json(cfg);
      resolved["master_seed"] = cfg.master_seed;
      resolved["stream"] = sim_stream;
      persist(common, resolved, sim_what + ".csv", out.str(), {});
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
