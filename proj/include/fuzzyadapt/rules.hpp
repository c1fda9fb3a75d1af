#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fuzzyadapt/linguistic.hpp"
#include "fuzzyadapt/model.hpp"
#include "fuzzyadapt/report.hpp"

namespace fuzzyadapt {

struct Clause {
  std::string variable;
  std::string term;

  friend bool operator==(const Clause&, const Clause&) = default;
};

enum class Connective { And, Or };

/// Flat clause chain evaluated strictly left to right; connectives.size() == clauses.size() - 1.
struct Antecedent {
  std::vector<Clause> clauses;
  std::vector<Connective> connectives;

  friend bool operator==(const Antecedent&, const Antecedent&) = default;
};

struct Rule {
  Antecedent antecedent;
  std::vector<Clause> consequents;
  double weight = 1.0;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Rule kinds mirror the relation kinds: UPD (contexts -> desired sd), ENA (contexts -> task
/// configuration), COR (task configuration -> actual sd).
struct RuleBase {
  RelationKind kind = RelationKind::Upd;
  std::vector<Rule> rules;
};

// ---------------------------------------------------------------------------
// DSL
//
//   [<n>.] If (<Var> is <Term>) [and|or (<Var> is <Term>)]* then (<Var> is <Term>) [and (<Var> is <Term>)]* (<w>)
//
// Keywords are case-insensitive; the leading "<n>." label is optional and ignored.

/// Syntax only: no name resolution. Throws ParseError carrying line and column.
Rule parse_rule_syntax(std::string_view line, int line_no = 1);

/// Parses and resolves every clause against the registry; unknown names are ParseErrors.
Rule parse_rule(std::string_view line, const Registry& registry, int line_no = 1);

/// Canonical single-line text; parse_rule_syntax(format_rule(r)) == r.
std::string format_rule(const Rule& rule);

/// One rule per line; '#' starts a comment; blank lines are skipped.
RuleBase parse_rule_text(std::string_view text, RelationKind kind, const Registry& registry);
RuleBase load_rule_file(const std::filesystem::path& path, RelationKind kind, const Registry& registry);
std::string format_rule_base(const RuleBase& rb);

// ---------------------------------------------------------------------------
// Rule-space tooling

/// prod(inputs) * prod(outputs) * 2^(m + n - 2). Throws ValidationError on empty lists,
/// zero counts or overflow.
std::uint64_t count_rule_space(const std::vector<std::uint64_t>& input_term_counts,
                               const std::vector<std::uint64_t>& output_term_counts);

/// Regulation operator, AND-only: every input-term combination crossed with every output-term
/// combination, weight 1. The first input varies slowest.
std::vector<Rule> enumerate_rules(const std::vector<const LinguisticVariable*>& inputs,
                                  const std::vector<const LinguisticVariable*>& outputs);

/// Proposes a consequent term for a rule by mapping each antecedent term to an ordinal in
/// [1, 3] (by position within its variable), averaging with the given weights, and mapping
/// the mean back onto the output's terms. `invert[i]` flips input i's ordering.
std::size_t propose_consequent_term(const std::vector<std::size_t>& term_indices,
                                    const std::vector<std::size_t>& term_counts, const std::vector<double>& weights,
                                    const std::vector<bool>& invert, std::size_t output_term_count);

struct RulePair {
  std::size_t first;
  std::size_t second;
};

struct ConflictReport {
  std::vector<RulePair> conflicts;   // same antecedent, different term for a shared output variable
  std::vector<RulePair> duplicates;  // same antecedent and same consequents
};

ConflictReport detect_conflicts(const RuleBase& rb);

/// Clause names resolve, weights in (0, 1], consequent variables distinct, and variable roles
/// match the rule kind.
ValidationReport validate_rule_base(const RuleBase& rb, const Registry& registry);

}  // namespace fuzzyadapt
