#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace exceed {

/// One seed's evaluation of a gate.
struct GateOutcome {
  double empirical = 0.0;
  double target = 0.0;
  double se = 0.0;
  double statistic = 0.0;  ///< z-score, chi-square statistic, or gap/SE
  double threshold = 0.0;  ///< the bound the statistic or deviation was held to
  double p_value = 1.0;    ///< chi-square gates only
  int dof = 0;             ///< chi-square gates only
  bool pass = false;
};

/// A named statistical gate evaluated on one or more seeds. With several
/// seeds the gate fails only if more than 10% of them fail.
struct Gate {
  std::string name;
  std::string rule;
  std::vector<GateOutcome> outcomes;
  std::size_t seeds_failed = 0;
  bool pass = false;

  static Gate combine(std::string name, std::string rule, std::vector<GateOutcome> outcomes);
  const GateOutcome& primary() const { return outcomes.front(); }
};

/// Rows of numeric columns, written as CSV alongside the JSON report.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
  std::string test;
  nlohmann::ordered_json provenance;
  std::vector<Gate> gates;
  std::vector<Table> tables;
  nlohmann::ordered_json notes = nlohmann::ordered_json::object();

  bool pass() const;
  const Gate* find_gate(const std::string& name) const;
  nlohmann::ordered_json to_json() const;
};

void write_table_csv(std::ostream& out, const Table& table);

/// FNV-1a 64-bit hash, rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Compact %g formatting used in gate names ("0", "0.5", "1e-06").
std::string format_number(double v);

}  // namespace exceed
