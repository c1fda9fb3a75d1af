#pragma once

#include <filesystem>
#include <string>

#include "fuzzyadapt/controller.hpp"
#include "fuzzyadapt/error.hpp"
#include "fuzzyadapt/report.hpp"
#include "fuzzyadapt/sim.hpp"

namespace fuzzyadapt {

/// The scenario document is structurally broken (bad JSON, wrong field types, missing sections).
class ScenarioFormatError : public Error {
 public:
  using Error::Error;
};

/// One experiment: the control model, loop settings and context trajectories, loaded from a
/// JSON document plus three `.rules` files resolved relative to it.
struct Scenario {
  std::string name;
  std::filesystem::path path;
  ControlModel model;
  ReadaptationSettings settings;
  TrajectorySpec trajectories;
  bool conflicts_are_errors = true;
  std::string digest;  // FNV-1a 64 over the scenario and rule file bytes
};

/// Throws IoError for unreadable files (including rule files), ScenarioFormatError for malformed
/// documents, ValidationError for invalid element definitions and ParseError for bad rule lines.
/// Content checks that can be reported rather than thrown are left to validate_scenario.
Scenario load_scenario(const std::filesystem::path& path);

/// Parses a scenario from text; rule file paths resolve against `base_dir`.
Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir);

/// Every validator over the loaded scenario: variables, elements, goal graph, topology,
/// rule kinds, rule/edge consistency, rule conflicts, settings and trajectories.
ValidationReport validate_scenario(const Scenario& scenario);

/// Hex FNV-1a 64 digest.
std::string fnv1a_hex(const std::string& bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace fuzzyadapt
