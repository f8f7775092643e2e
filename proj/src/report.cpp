#include "exceed/report.hpp"

#include <cstdint>
#include <cstdio>
#include <ostream>

namespace exceed {

Gate Gate::combine(std::string name, std::string rule, std::vector<GateOutcome> outcomes) {
  Gate gate;
  gate.name = std::move(name);
  gate.rule = std::move(rule);
  for (const auto& o : outcomes) {
    if (!o.pass) ++gate.seeds_failed;
  }
  gate.outcomes = std::move(outcomes);
  const std::size_t seeds = gate.outcomes.size();
  gate.pass = seeds == 1 ? gate.seeds_failed == 0
                         : 10 * gate.seeds_failed <= seeds;
  return gate;
}

bool ExperimentReport::pass() const {
  for (const auto& g : gates) {
    if (!g.pass) return false;
  }
  return true;
}

const Gate* ExperimentReport::find_gate(const std::string& name) const {
  for (const auto& g : gates) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

nlohmann::ordered_json ExperimentReport::to_json() const {
  nlohmann::ordered_json out;
  out["test"] = test;
  out["pass"] = pass();
  out["provenance"] = provenance;
  auto& gate_list = out["gates"] = nlohmann::ordered_json::array();
  for (const auto& g : gates) {
    nlohmann::ordered_json j;
    j["name"] = g.name;
    j["rule"] = g.rule;
    j["pass"] = g.pass;
    j["seeds"] = g.outcomes.size();
    j["seeds_failed"] = g.seeds_failed;
    const auto& p = g.primary();
    j["empirical"] = p.empirical;
    j["target"] = p.target;
    j["se"] = p.se;
    j["statistic"] = p.statistic;
    j["threshold"] = p.threshold;
    if (p.dof > 0) {
      j["dof"] = p.dof;
      j["p_value"] = p.p_value;
    }
    if (g.outcomes.size() > 1) {
      auto& per_seed = j["per_seed"] = nlohmann::ordered_json::array();
      for (const auto& o : g.outcomes) {
        nlohmann::ordered_json s;
        s["empirical"] = o.empirical;
        s["statistic"] = o.statistic;
        if (o.dof > 0) s["p_value"] = o.p_value;
        s["pass"] = o.pass;
        per_seed.push_back(std::move(s));
      }
    }
    gate_list.push_back(std::move(j));
  }
  out["notes"] = notes;
  return out;
}

void write_table_csv(std::ostream& out, const Table& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << '\n';
  char buf[32];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace exceed
