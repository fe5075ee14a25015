#pragma once
#include <string>
#include <vector>

#include "pure_explore/harness.hpp"

namespace pure_explore {

// Validated config, or every validation error found (not just the first).
struct ParseResult {
  bool ok = false;
  ExperimentConfig config;
  std::vector<std::string> errors;
};

ParseResult parse_config(const std::string& json_text);

// Normalized echo of a config (stable key order) for the summary file.
std::string config_to_json(const ExperimentConfig& config);

std::string summary_json(const ExperimentConfig& config, const AggregateStats& stats);

}  // namespace pure_explore
