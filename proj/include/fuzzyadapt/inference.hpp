#pragma once

#include <map>
#include <string>
#include <vector>

#include "fuzzyadapt/linguistic.hpp"
#include "fuzzyadapt/model.hpp"
#include "fuzzyadapt/rules.hpp"

namespace fuzzyadapt {

/// Fuzzified inputs keyed by variable name.
using FuzzyInputs = std::map<std::string, FuzzifiedValue>;
/// Crisp values keyed by variable name.
using CrispValues = std::map<std::string, double>;

struct FiringResult {
  std::size_t rule_index = 0;
  double strength = 0.0;
  std::vector<Clause> consequents;
};

/// Per-term strength of one output variable; only terms with positive strength appear.
struct AggregatedOutput {
  std::string variable;
  std::map<std::string, double> strengths;
};

/// Clause degrees combined left to right (AND = min, OR = max), then scaled by the rule weight.
double firing_strength(const Rule& rule, const FuzzyInputs& inputs);

std::vector<FiringResult> fire(const RuleBase& rb, const FuzzyInputs& inputs);

/// Max-aggregation per (output variable, term). Every variable concluded by some rule appears,
/// possibly with an empty strength map.
std::vector<AggregatedOutput> aggregate(const RuleBase& rb, const FuzzyInputs& inputs);

/// Center-average defuzzification: sum(strength_k * center_k) / sum(strength_k).
/// Throws NoRuleFired when no term has positive strength.
double defuzzify(const AggregatedOutput& agg, const LinguisticVariable& var);

/// What infer does when an output has no active rule.
enum class NoRuleFiredPolicy { Error, HoldPrevious, Midpoint };

struct InferenceOptions {
  NoRuleFiredPolicy fallback = NoRuleFiredPolicy::Error;
  /// Previous outputs for HoldPrevious; a missing entry falls back to the universe midpoint.
  const CrispValues* previous = nullptr;
};

/// Fuzzify -> fire -> aggregate -> defuzzify for every output variable of the rule base.
/// Inputs are keyed by variable name and resolved through the registry.
CrispValues infer(const RuleBase& rb, const CrispValues& inputs, const Registry& registry,
                  const InferenceOptions& options = {});

/// Rules whose consequents mention `output_variable`, with other consequents dropped.
RuleBase restrict_to_output(const RuleBase& rb, const std::string& output_variable);

}  // namespace fuzzyadapt
