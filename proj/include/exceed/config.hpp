#pragma once

#include <string>

#include "exceed/montecarlo.hpp"
#include "json.hpp"

namespace exceed {

nlohmann::ordered_json to_json(const CorrelationModel& model);
nlohmann::ordered_json to_json(const ScaleDistribution& dist);
nlohmann::ordered_json to_json(const ExperimentConfig& config);

CorrelationModel correlation_from_json(const nlohmann::json& j);
ScaleDistribution distribution_from_json(const nlohmann::json& j);

/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Compact specs used on the command line: "geometric:0.5", "power:2,1",
/// "log:1", "weibullian:L,p,alpha,C", "bounded:gamma".
CorrelationModel parse_correlation_spec(const std::string& spec);
ScaleDistribution parse_distribution_spec(const std::string& spec);

/// Canonical text used for hashing; excludes the thread-count hint.
std::string canonical_config_text(const ExperimentConfig& config);

}  // namespace exceed
