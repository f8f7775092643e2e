#include "exceed/config.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <variant>

#include "exceed/error.hpp"

namespace exceed {

namespace {

using ojson = nlohmann::ordered_json;

double number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing numeric field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t unsigned_number(const nlohmann::json& v, const char* key) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
  }
  if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0) {
    throw ConfigError(std::string("field '") + key + "' must be non-negative");
  }
  return v.get<std::uint64_t>();
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const char* what) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError(std::string("unknown field '") + it.key() + "' in " + what);
    }
  }
}

ojson interval_json(const Interval& iv) { return ojson::array({iv.s, iv.t}); }

Interval interval_from(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("interval must be a two-element numeric array [s, t]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<double> split_numbers(const std::string& text, const std::string& spec) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse number '" + item + "' in '" + spec + "'");
    }
  }
  return out;
}

}  // namespace

ojson to_json(const CorrelationModel& model) {
  ojson j;
  j["family"] = model.tag();
  if (const auto* g = std::get_if<Geometric>(&model.family())) j["r"] = g->r;
  if (const auto* p = std::get_if<PowerDecay>(&model.family())) {
    j["a"] = p->a;
    j["c"] = p->c;
  }
  if (const auto* l = std::get_if<LogDecay>(&model.family())) j["c"] = l->c;
  return j;
}

ojson to_json(const ScaleDistribution& dist) {
  ojson j;
  j["family"] = dist.tag();
  if (dist.is_weibullian()) {
    const auto& w = dist.weibullian_params();
    j["L"] = w.L;
    j["p"] = w.p;
    j["alpha"] = w.alpha;
    j["Cc"] = w.C;
  } else {
    j["gamma"] = dist.bounded_params().gamma;
  }
  return j;
}

CorrelationModel correlation_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw ConfigError("correlation model needs a string 'family'");
  }
  const auto family = j["family"].get<std::string>();
  if (family == "geometric") {
    reject_unknown(j, {"family", "r"}, "geometric model");
    return CorrelationModel::geometric(number(j, "r"));
  }
  if (family == "power") {
    reject_unknown(j, {"family", "a", "c"}, "power model");
    return CorrelationModel::power(number(j, "a"), number(j, "c"));
  }
  if (family == "log") {
    reject_unknown(j, {"family", "c"}, "log model");
    return CorrelationModel::log_decay(number(j, "c"));
  }
  throw ConfigError("unknown correlation family '" + family + "' (expected geometric, power, log)");
}

ScaleDistribution distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw ConfigError("scale distribution needs a string 'family'");
  }
  const auto family = j["family"].get<std::string>();
  if (family == "weibullian") {
    reject_unknown(j, {"family", "L", "p", "alpha", "Cc"}, "weibullian distribution");
    return ScaleDistribution::weibullian(number(j, "L"), number(j, "p"), number(j, "alpha"),
                                         number(j, "Cc"));
  }
  if (family == "bounded") {
    reject_unknown(j, {"family", "gamma"}, "bounded distribution");
    return ScaleDistribution::bounded(number(j, "gamma"));
  }
  throw ConfigError("unknown scale family '" + family + "' (expected weibullian, bounded)");
}

ojson to_json(const ExperimentConfig& c) {
  ojson j;
  j["model"] = to_json(c.model);
  j["dist"] = to_json(c.dist);
  j["n"] = c.n;
  j["replications"] = c.replications;
  auto& levels = j["levels"] = ojson::array();
  for (const auto& lv : c.levels) levels.push_back(ojson::array({lv.x, lv.y}));
  auto& intervals = j["intervals"] = ojson::array();
  for (const auto& iv : c.intervals) intervals.push_back(interval_json(iv));
  auto& unions = j["avoidance_unions"] = ojson::array();
  for (const auto& u : c.avoidance_unions) {
    ojson members = ojson::array();
    for (const auto& iv : u) members.push_back(interval_json(iv));
    unions.push_back(std::move(members));
  }
  j["k"] = c.k;
  j["l"] = c.l;
  j["blocks"] = c.blocks;
  j["n_grid"] = c.n_grid;
  j["master_seed"] = c.master_seed;
  j["seed_count"] = c.seed_count;
  j["threads"] = c.thread_count;
  j["level_method"] = c.level_method == LevelMethod::kSolve ? "solve" : "closed_form";
  j["level_tol"] = c.level_tol;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  reject_unknown(j,
                 {"model", "dist", "n", "replications", "levels", "intervals", "avoidance_unions",
                  "k", "l", "blocks", "n_grid", "master_seed", "seed_count", "threads",
                  "level_method", "level_tol"},
                 "experiment config");
  ExperimentConfig c;
  if (j.contains("model")) c.model = correlation_from_json(j["model"]);
  if (j.contains("dist")) c.dist = distribution_from_json(j["dist"]);
  if (j.contains("n")) c.n = unsigned_number(j["n"], "n");
  if (j.contains("replications")) c.replications = unsigned_number(j["replications"], "replications");
  if (j.contains("levels")) {
    c.levels.clear();
    for (const auto& lv : j["levels"]) {
      if (!lv.is_array() || lv.size() != 2 || !lv[0].is_number() || !lv[1].is_number()) {
        throw ConfigError("each level must be a two-element numeric array [x, y]");
      }
      c.levels.push_back({lv[0].get<double>(), lv[1].get<double>()});
    }
  }
  if (j.contains("intervals")) {
    c.intervals.clear();
    for (const auto& iv : j["intervals"]) c.intervals.push_back(interval_from(iv));
  }
  if (j.contains("avoidance_unions")) {
    for (const auto& u : j["avoidance_unions"]) {
      std::vector<Interval> members;
      for (const auto& iv : u) members.push_back(interval_from(iv));
      c.avoidance_unions.push_back(std::move(members));
    }
  }
  if (j.contains("k")) c.k = unsigned_number(j["k"], "k");
  if (j.contains("l")) c.l = unsigned_number(j["l"], "l");
  if (j.contains("blocks")) {
    for (const auto& b : j["blocks"]) {
      if (!b.is_number()) throw ConfigError("blocks must be numbers");
      c.blocks.push_back(b.get<double>());
    }
  }
  if (j.contains("n_grid")) {
    for (const auto& v : j["n_grid"]) c.n_grid.push_back(unsigned_number(v, "n_grid"));
  }
  if (j.contains("master_seed")) c.master_seed = unsigned_number(j["master_seed"], "master_seed");
  if (j.contains("seed_count")) c.seed_count = unsigned_number(j["seed_count"], "seed_count");
  if (j.contains("threads")) c.thread_count = static_cast<int>(unsigned_number(j["threads"], "threads"));
  if (j.contains("level_method")) {
    const auto m = j["level_method"].get<std::string>();
    if (m == "solve") {
      c.level_method = LevelMethod::kSolve;
    } else if (m == "closed_form") {
      c.level_method = LevelMethod::kClosedForm;
    } else {
      throw ConfigError("level_method must be 'solve' or 'closed_form'");
    }
  }
  if (j.contains("level_tol")) c.level_tol = number(j, "level_tol");
  c.validate();
  return c;
}

CorrelationModel parse_correlation_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("correlation spec '" + spec + "' needs family:params");
  const auto family = spec.substr(0, colon);
  const auto values = split_numbers(spec.substr(colon + 1), spec);
  if (family == "geometric" && values.size() == 1) return CorrelationModel::geometric(values[0]);
  if (family == "power" && values.size() == 2) return CorrelationModel::power(values[0], values[1]);
  if (family == "log" && values.size() == 1) return CorrelationModel::log_decay(values[0]);
  throw ConfigError("bad correlation spec '" + spec +
                    "' (expected geometric:r, power:a,c or log:c)");
}

ScaleDistribution parse_distribution_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("scale spec '" + spec + "' needs family:params");
  const auto family = spec.substr(0, colon);
  const auto v = split_numbers(spec.substr(colon + 1), spec);
  if (family == "weibullian" && v.size() == 4) return ScaleDistribution::weibullian(v[0], v[1], v[2], v[3]);
  if (family == "bounded" && v.size() == 1) return ScaleDistribution::bounded(v[0]);
  throw ConfigError("bad scale spec '" + spec + "' (expected weibullian:L,p,alpha,C or bounded:gamma)");
}

std::string canonical_config_text(const ExperimentConfig& config) {
  auto j = to_json(config);
  j.erase("threads");
  return j.dump();
}

}  // namespace exceed
