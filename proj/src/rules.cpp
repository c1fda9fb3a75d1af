#include "fuzzyadapt/rules.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "fuzzyadapt/error.hpp"
#include "fuzzyadapt/format.hpp"

namespace fuzzyadapt {
namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { LParen, RParen, Word, Number, End };

struct Token {
  Tok kind;
  std::string text;
  int column;  // 1-based
};

bool word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '&' || c == '-' || c == '.';
}

std::vector<Token> lex(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    const int col = static_cast<int>(i) + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      out.push_back({Tok::LParen, "(", col});
      ++i;
    } else if (c == ')') {
      out.push_back({Tok::RParen, ")", col});
      ++i;
    } else if (word_char(c) || c == '+') {
      std::size_t j = i;
      while (j < line.size() && (word_char(line[j]) || line[j] == '+')) ++j;
      std::string text(line.substr(i, j - i));
      const bool numeric = std::isdigit(static_cast<unsigned char>(text[0])) || text[0] == '.' || text[0] == '+' ||
                           (text[0] == '-' && text.size() > 1);
      out.push_back({numeric ? Tok::Number : Tok::Word, std::move(text), col});
      i = j;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line_no, col);
    }
  }
  out.push_back({Tok::End, "", static_cast<int>(line.size()) + 1});
  return out;
}

bool keyword(const Token& t, std::string_view kw) {
  if (t.kind != Tok::Word || t.text.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(t.text[i])) != kw[i]) return false;
  return true;
}

std::string describe(const Token& t) { return t.kind == Tok::End ? "end of line" : "'" + t.text + "'"; }

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view line, int line_no) : tokens_(lex(line, line_no)), line_no_(line_no) {}

  Rule parse() {
    // Optional "<n>." label as printed in rule listings.
    if (peek().kind == Tok::Number && !peek().text.empty() && peek().text.back() == '.' &&
        std::all_of(peek().text.begin(), peek().text.end() - 1, [](char c) { return std::isdigit(c); }))
      ++pos_;

    Rule rule;
    expect_keyword("if");
    rule.antecedent.clauses.push_back(clause());
    while (keyword(peek(), "and") || keyword(peek(), "or")) {
      rule.antecedent.connectives.push_back(keyword(next(), "and") ? Connective::And : Connective::Or);
      rule.antecedent.clauses.push_back(clause());
    }
    expect_keyword("then");
    rule.consequents.push_back(clause());
    while (keyword(peek(), "and")) {
      ++pos_;
      rule.consequents.push_back(clause());
    }
    if (keyword(peek(), "or")) fail("consequents may only be joined with 'and'", peek());

    const Token& open = expect(Tok::LParen, "'(' before the rule weight");
    const Token& num = next();
    if (num.kind != Tok::Number) fail("expected a numeric rule weight, got " + describe(num), num);
    rule.weight = to_number(num);
    expect(Tok::RParen, "')' after the rule weight");
    if (peek().kind != Tok::End) fail("unexpected trailing input " + describe(peek()), peek());
    if (!(rule.weight > 0.0 && rule.weight <= 1.0))
      fail("rule weight " + num.text + " is outside (0, 1]", num);
    (void)open;
    return rule;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const { throw ParseError(msg, line_no_, at.column); }

  const Token& expect(Tok kind, const std::string& what) {
    const Token& t = next();
    if (t.kind != kind) fail("expected " + what + ", got " + describe(t), t);
    return t;
  }

  void expect_keyword(std::string_view kw) {
    const Token& t = next();
    if (!keyword(t, kw)) fail("expected '" + std::string(kw) + "', got " + describe(t), t);
  }

  Clause clause() {
    expect(Tok::LParen, "'(' opening a clause");
    const Token& var = next();
    if (var.kind != Tok::Word || keyword(var, "is")) fail("expected a variable name, got " + describe(var), var);
    expect_keyword("is");
    const Token& term = next();
    if (term.kind != Tok::Word) fail("expected a term name, got " + describe(term), term);
    expect(Tok::RParen, "')' closing the clause");
    return {var.text, term.text};
  }

  double to_number(const Token& t) const {
    double value = 0.0;
    const char* first = t.text.data() + (t.text[0] == '+' ? 1 : 0);
    const char* last = t.text.data() + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) fail("malformed number '" + t.text + "'", t);
    return value;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int line_no_;
};

std::string shortest(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void append_clause(std::string& out, const Clause& c) { out += "(" + c.variable + " is " + c.term + ")"; }

// Column of the n-th clause's variable and term names, for resolution errors.
struct ClausePosition {
  int variable_column;
  int term_column;
};

std::vector<ClausePosition> clause_positions(std::string_view line, int line_no) {
  std::vector<ClausePosition> out;
  auto tokens = lex(line, line_no);
  for (std::size_t i = 0; i + 4 < tokens.size(); ++i)
    if (tokens[i].kind == Tok::LParen && tokens[i + 1].kind == Tok::Word && keyword(tokens[i + 2], "is"))
      out.push_back({tokens[i + 1].column, tokens[i + 3].column});
  return out;
}

}  // namespace

Rule parse_rule_syntax(std::string_view line, int line_no) { return Parser(line, line_no).parse(); }

Rule parse_rule(std::string_view line, const Registry& registry, int line_no) {
  Rule rule = parse_rule_syntax(line, line_no);
  const auto positions = clause_positions(line, line_no);
  std::vector<const Clause*> all;
  for (const auto& c : rule.antecedent.clauses) all.push_back(&c);
  for (const auto& c : rule.consequents) all.push_back(&c);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Clause& c = *all[i];
    const ClausePosition pos = i < positions.size() ? positions[i] : ClausePosition{1, 1};
    const LinguisticVariable* var = registry.find_variable(c.variable);
    if (!var) throw ParseError("unknown variable '" + c.variable + "'", line_no, pos.variable_column);
    if (!var->term_index(c.term))
      throw ParseError("unknown term '" + c.term + "' for variable '" + c.variable + "'", line_no, pos.term_column);
  }
  std::set<std::string> outputs;
  for (const auto& c : rule.consequents)
    if (!outputs.insert(c.variable).second)
      throw ParseError("consequent variable '" + c.variable + "' appears twice", line_no, 1);
  return rule;
}

std::string format_rule(const Rule& rule) {
  std::string out = "If ";
  const auto& a = rule.antecedent;
  for (std::size_t i = 0; i < a.clauses.size(); ++i) {
    if (i > 0) out += a.connectives[i - 1] == Connective::And ? " and " : " or ";
    append_clause(out, a.clauses[i]);
  }
  out += " then ";
  for (std::size_t i = 0; i < rule.consequents.size(); ++i) {
    if (i > 0) out += " and ";
    append_clause(out, rule.consequents[i]);
  }
  out += " (" + shortest(rule.weight) + ")";
  return out;
}

RuleBase parse_rule_text(std::string_view text, RelationKind kind, const Registry& registry) {
  RuleBase rb;
  rb.kind = kind;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const bool blank = std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(c); });
    if (!blank) rb.rules.push_back(parse_rule(line, registry, line_no));
    start = end + 1;
  }
  return rb;
}

RuleBase load_rule_file(const std::filesystem::path& path, RelationKind kind, const Registry& registry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read rule file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_rule_text(buf.str(), kind, registry);
  } catch (const ParseError& e) {
    throw ParseError(path.filename().string() + ": " + e.what(), e.line(), e.column());
  }
}

std::string format_rule_base(const RuleBase& rb) {
  std::string out;
  for (const auto& r : rb.rules) out += format_rule(r) + "\n";
  return out;
}

// ---------------------------------------------------------------------------

std::uint64_t count_rule_space(const std::vector<std::uint64_t>& inputs, const std::vector<std::uint64_t>& outputs) {
  if (inputs.empty() || outputs.empty()) throw ValidationError("rule-space count needs at least one input and output");
  constexpr auto max = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 1;
  auto mul = [&](std::uint64_t k) {
    if (k == 0) throw ValidationError("term counts must be >= 1");
    if (total > max / k) throw ValidationError("rule-space count overflows 64 bits");
    total *= k;
  };
  for (auto k : inputs) mul(k);
  for (auto k : outputs) mul(k);
  const std::size_t exponent = inputs.size() + outputs.size() - 2;
  for (std::size_t i = 0; i < exponent; ++i) mul(2);
  return total;
}

std::vector<Rule> enumerate_rules(const std::vector<const LinguisticVariable*>& inputs,
                                  const std::vector<const LinguisticVariable*>& outputs) {
  if (inputs.empty() || outputs.empty()) throw ValidationError("enumeration needs at least one input and output");
  std::vector<const LinguisticVariable*> all = inputs;
  all.insert(all.end(), outputs.begin(), outputs.end());

  std::vector<std::size_t> idx(all.size(), 0);
  std::vector<Rule> rules;
  while (true) {
    Rule r;
    for (std::size_t i = 0; i < all.size(); ++i) {
      Clause c{all[i]->name(), all[i]->terms()[idx[i]].name};
      if (i < inputs.size()) {
        if (i > 0) r.antecedent.connectives.push_back(Connective::And);
        r.antecedent.clauses.push_back(std::move(c));
      } else {
        r.consequents.push_back(std::move(c));
      }
    }
    rules.push_back(std::move(r));

    // Odometer, last variable fastest.
    std::size_t k = all.size();
    while (k > 0) {
      --k;
      if (++idx[k] < all[k]->term_count()) break;
      idx[k] = 0;
      if (k == 0) return rules;
    }
  }
}

std::size_t propose_consequent_term(const std::vector<std::size_t>& term_indices,
                                    const std::vector<std::size_t>& term_counts, const std::vector<double>& weights,
                                    const std::vector<bool>& invert, std::size_t output_term_count) {
  if (term_indices.size() != term_counts.size() || weights.size() != term_indices.size() ||
      invert.size() != term_indices.size() || term_indices.empty() || output_term_count == 0)
    throw ValidationError("propose_consequent_term: mismatched inputs");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < term_indices.size(); ++i) {
    const double span = term_counts[i] > 1 ? static_cast<double>(term_counts[i] - 1) : 1.0;
    double pos = static_cast<double>(term_indices[i]) / span;  // 0..1
    if (invert[i]) pos = 1.0 - pos;
    num += weights[i] * (1.0 + 2.0 * pos);
    den += weights[i];
  }
  if (!(den > 0.0)) throw ValidationError("propose_consequent_term: weights must sum to a positive value");
  const double mean = num / den;                                              // in [1, 3]
  const double scaled = (mean - 1.0) / 2.0 * static_cast<double>(output_term_count - 1);  // 0..k-1
  return static_cast<std::size_t>(std::floor(scaled + 0.5 + 1e-9));
}

ConflictReport detect_conflicts(const RuleBase& rb) {
  ConflictReport report;
  for (std::size_t i = 0; i < rb.rules.size(); ++i) {
    for (std::size_t j = i + 1; j < rb.rules.size(); ++j) {
      const Rule& a = rb.rules[i];
      const Rule& b = rb.rules[j];
      if (!(a.antecedent == b.antecedent)) continue;
      bool conflict = false;
      for (const auto& ca : a.consequents)
        for (const auto& cb : b.consequents)
          if (ca.variable == cb.variable && ca.term != cb.term) conflict = true;
      if (conflict)
        report.conflicts.push_back({i, j});
      else if (a.consequents == b.consequents)
        report.duplicates.push_back({i, j});
    }
  }
  return report;
}

ValidationReport validate_rule_base(const RuleBase& rb, const Registry& registry) {
  ValidationReport report;
  const ElementKind expected_out = rb.kind == RelationKind::Ena ? ElementKind::ParametricTask : ElementKind::Softgoal;
  auto role = [&](const std::string& var) -> std::optional<ElementKind> {
    auto id = registry.id_of_variable(var);
    if (!id) return std::nullopt;
    auto k = registry.kind_of(*id);
    if (k == ElementKind::AlternativeGroup) k = ElementKind::ParametricTask;  // both are tasks
    return k;
  };
  const std::string kind = to_string(rb.kind);

  for (std::size_t i = 0; i < rb.rules.size(); ++i) {
    const Rule& r = rb.rules[i];
    const std::string where = kind + " rule " + std::to_string(i + 1);
    if (r.antecedent.clauses.empty() || r.antecedent.connectives.size() + 1 != r.antecedent.clauses.size())
      report.error("rule-shape", where + ": malformed antecedent");
    if (r.consequents.empty()) report.error("rule-shape", where + ": no consequent");
    if (!(r.weight > 0.0 && r.weight <= 1.0)) report.error("rule-weight", where + ": weight outside (0, 1]");

    auto check = [&](const Clause& c, bool antecedent) {
      const LinguisticVariable* var = registry.find_variable(c.variable);
      if (!var) {
        report.error("rule-unknown-variable", where + ": unknown variable '" + c.variable + "'");
        return;
      }
      if (!var->term_index(c.term))
        report.error("rule-unknown-term", where + ": unknown term '" + c.term + "' of '" + c.variable + "'");
      const auto k = role(c.variable);
      const ElementKind want =
          antecedent ? (rb.kind == RelationKind::Cor ? ElementKind::ParametricTask : ElementKind::Context)
                     : expected_out;
      if (k != want)
        report.error("rule-kind", where + ": '" + c.variable + "' cannot appear in " +
                                      (antecedent ? "the antecedent" : "the consequent") + " of a " + kind + " rule");
    };
    for (const auto& c : r.antecedent.clauses) check(c, true);
    std::set<std::string> outs;
    for (const auto& c : r.consequents) {
      check(c, false);
      if (!outs.insert(c.variable).second)
        report.error("rule-shape", where + ": consequent variable '" + c.variable + "' repeated");
    }
  }
  return report;
}

}  // namespace fuzzyadapt
