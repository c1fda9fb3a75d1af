#pragma once

#include <map>
#include <string>
#include <vector>

#include "fuzzyadapt/inference.hpp"
#include "fuzzyadapt/model.hpp"
#include "fuzzyadapt/nelder_mead.hpp"
#include "fuzzyadapt/rules.hpp"

namespace fuzzyadapt {

/// Values keyed by element id (context id, softgoal id or task id).
using ValueMap = std::map<std::string, double>;

/// Everything the feedforward-feedback loop needs: elements, topology and the three rule bases.
struct ControlModel {
  Registry registry;
  GoalGraph graph;
  std::vector<RelationEdge> edges;
  RuleBase upd{RelationKind::Upd, {}};
  RuleBase ena{RelationKind::Ena, {}};
  RuleBase cor{RelationKind::Cor, {}};
  NoRuleFiredPolicy fallback = NoRuleFiredPolicy::Error;

  /// Softgoal weights keyed by softgoal id.
  ValueMap weights() const;
};

/// Rule antecedents must stay within their edge's sources, and every UPD/ENA/COR edge target
/// needs at least one rule concluding it.
ValidationReport validate_rules_against_edges(const ControlModel& model);

enum class TriggerMode { Total, Individual };

struct ReadaptationSettings {
  TriggerMode mode = TriggerMode::Total;
  double xi = 0.1;
  int max_iterations = 200;
  double initial_scale = 0.1;
  double tolerance = 1e-4;
  int restarts = 2;
  int probe_levels = 5;  // lattice points per task when the simplex stalls; 0 disables
};

/// Throws ValidationError unless xi > 0, max_iterations >= 1, scale/tolerance are positive and
/// probe_levels is 0 or at least 2.
void check_settings(const ReadaptationSettings& settings);

struct DeviationReport {
  ValueMap individual;  // sd^A - sd^D per softgoal
  double total = 0.0;   // sum of individual * weight
  double xi = 0.1;
  TriggerMode mode = TriggerMode::Total;
  std::map<std::string, bool> acceptable;  // individual >= -xi
  bool total_acceptable = true;            // total >= -xi
  bool all_individual_acceptable = true;

  /// The acceptance criterion that decides whether readaptation is needed.
  bool acceptable_overall() const noexcept {
    return mode == TriggerMode::Total ? total_acceptable : all_individual_acceptable;
  }
};

/// Throws ValidationError on mismatched softgoal keys or xi <= 0.
DeviationReport deviation(const ValueMap& desired, const ValueMap& actual, const ValueMap& weights, double xi,
                          TriggerMode mode = TriggerMode::Total);

struct FeedforwardResult {
  ValueMap desired_sd;
  ValueMap configs;
};

struct ReadaptResult {
  ValueMap configs;
  ValueMap actual_sd;
  DeviationReport deviation;
  int iterations = 0;
  int evaluations = 0;
};

struct TimeStepRecord {
  int t = 0;
  ValueMap context;
  ValueMap desired_sd;
  ValueMap configs_pre;
  ValueMap actual_sd_pre;
  DeviationReport deviation_pre;
  bool readapted = false;
  int iterations = 0;
  ValueMap configs_post;
  ValueMap actual_sd_post;
  DeviationReport deviation_post;
};

/// The feedforward-feedback adaptation loop over one ControlModel. Stateless between calls:
/// every operation takes its inputs explicitly.
class Controller {
 public:
  explicit Controller(const ControlModel& model);

  const ControlModel& model() const noexcept { return model_; }

  /// Desired satisfaction (UPD) and first-fold task configurations (ENA) from context readings.
  /// `previous` supplies held outputs for the HoldPrevious fallback.
  FeedforwardResult feedforward_step(const ValueMap& context, const TimeStepRecord* previous = nullptr) const;

  /// Actual satisfaction per softgoal from the COR rules.
  ValueMap actual_satisfaction(const ValueMap& configs, NoRuleFiredPolicy fallback,
                               const ValueMap* previous = nullptr) const;
  ValueMap actual_satisfaction(const ValueMap& configs) const {
    return actual_satisfaction(configs, model_.fallback);
  }

  /// Bounded Nelder-Mead over task configurations maximising the weighted deviation, with the
  /// desired satisfaction held fixed. Returns the start unchanged when it is already acceptable.
  /// Points where a COR output has no active rule score -inf; a failing start point throws.
  ReadaptResult readapt(const ValueMap& configs, const ValueMap& desired_sd, const ReadaptationSettings& settings) const;

  /// feedforward -> actual -> deviation -> readapt if triggered -> final deviation.
  TimeStepRecord step(const ValueMap& context, const ReadaptationSettings& settings, int t = 0,
                      const TimeStepRecord* previous = nullptr) const;

 private:
  struct EdgeRules {
    std::string target;           // element id
    std::string target_variable;  // its variable name
    std::vector<std::string> sources;
    RuleBase rules;
  };

  ValueMap run_edges(const std::vector<EdgeRules>& edges, const ValueMap& inputs, NoRuleFiredPolicy fallback,
                     const ValueMap* previous) const;

  const ControlModel& model_;
  std::vector<EdgeRules> upd_;
  std::vector<EdgeRules> ena_;
  std::vector<EdgeRules> cor_;
  std::vector<std::string> task_order_;
};

}  // namespace fuzzyadapt
