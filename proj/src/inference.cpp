#include "fuzzyadapt/inference.hpp"

#include <algorithm>
#include <set>

#include "fuzzyadapt/error.hpp"

namespace fuzzyadapt {

double firing_strength(const Rule& rule, const FuzzyInputs& inputs) {
  const auto& clauses = rule.antecedent.clauses;
  auto degree = [&](const Clause& c) {
    auto it = inputs.find(c.variable);
    if (it == inputs.end()) throw MissingInput(c.variable);
    return it->second.degree(c.term);
  };
  if (clauses.empty()) return 0.0;
  double acc = degree(clauses.front());
  for (std::size_t i = 1; i < clauses.size(); ++i) {
    const double d = degree(clauses[i]);
    acc = rule.antecedent.connectives[i - 1] == Connective::And ? std::min(acc, d) : std::max(acc, d);
  }
  return std::clamp(acc * rule.weight, 0.0, 1.0);
}

std::vector<FiringResult> fire(const RuleBase& rb, const FuzzyInputs& inputs) {
  std::vector<FiringResult> out;
  out.reserve(rb.rules.size());
  for (std::size_t i = 0; i < rb.rules.size(); ++i)
    out.push_back({i, firing_strength(rb.rules[i], inputs), rb.rules[i].consequents});
  return out;
}

std::vector<AggregatedOutput> aggregate(const RuleBase& rb, const FuzzyInputs& inputs) {
  std::vector<AggregatedOutput> out;
  auto slot = [&](const std::string& var) -> AggregatedOutput& {
    for (auto& o : out)
      if (o.variable == var) return o;
    out.push_back({var, {}});
    return out.back();
  };
  for (const auto& f : fire(rb, inputs)) {
    for (const auto& c : f.consequents) {
      auto& o = slot(c.variable);
      if (f.strength <= 0.0) continue;
      auto [it, inserted] = o.strengths.emplace(c.term, f.strength);
      if (!inserted) it->second = std::max(it->second, f.strength);
    }
  }
  return out;
}

double defuzzify(const AggregatedOutput& agg, const LinguisticVariable& var) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& [term, strength] : agg.strengths) {
    if (!(strength > 0.0)) continue;
    num += strength * var.term(term).mf.center();
    den += strength;
  }
  if (!(den > 0.0)) throw NoRuleFired(agg.variable);
  return num / den;
}

CrispValues infer(const RuleBase& rb, const CrispValues& inputs, const Registry& registry,
                  const InferenceOptions& options) {
  auto variable = [&](const std::string& name) -> const LinguisticVariable& {
    const auto* v = registry.find_variable(name);
    if (!v) throw ValidationError("unknown variable '" + name + "'");
    return *v;
  };

  std::set<std::string> needed;
  for (const auto& r : rb.rules)
    for (const auto& c : r.antecedent.clauses) needed.insert(c.variable);

  FuzzyInputs fuzzy;
  for (const auto& name : needed) {
    auto it = inputs.find(name);
    if (it == inputs.end()) throw MissingInput(name);
    fuzzy.emplace(name, fuzzify(variable(name), it->second));
  }

  CrispValues out;
  for (const auto& agg : aggregate(rb, fuzzy)) {
    const LinguisticVariable& var = variable(agg.variable);
    try {
      out[agg.variable] = defuzzify(agg, var);
    } catch (const NoRuleFired&) {
      switch (options.fallback) {
        case NoRuleFiredPolicy::Error:
          throw;
        case NoRuleFiredPolicy::HoldPrevious:
          if (options.previous) {
            if (auto p = options.previous->find(agg.variable); p != options.previous->end()) {
              out[agg.variable] = p->second;
              break;
            }
          }
          out[agg.variable] = var.universe().mid();
          break;
        case NoRuleFiredPolicy::Midpoint:
          out[agg.variable] = var.universe().mid();
          break;
      }
    }
  }
  return out;
}

RuleBase restrict_to_output(const RuleBase& rb, const std::string& output_variable) {
  RuleBase out;
  out.kind = rb.kind;
  for (const auto& r : rb.rules) {
    auto it = std::find_if(r.consequents.begin(), r.consequents.end(),
                           [&](const Clause& c) { return c.variable == output_variable; });
    if (it == r.consequents.end()) continue;
    Rule copy = r;
    copy.consequents = {*it};
    out.rules.push_back(std::move(copy));
  }
  return out;
}

}  // namespace fuzzyadapt
