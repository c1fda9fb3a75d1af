#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "fuzzyadapt/membership.hpp"
#include "fuzzyadapt/report.hpp"

namespace fuzzyadapt {

/// Closed interval [lo, hi] with lo < hi.
class UniverseInterval {
 public:
  UniverseInterval(double lo, double hi, std::string unit = {});

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  double mid() const noexcept { return 0.5 * (lo_ + hi_); }
  const std::string& unit() const noexcept { return unit_; }

  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }
  bool contains(const UniverseInterval& other) const noexcept { return other.lo_ >= lo_ && other.hi_ <= hi_; }
  double clamp(double x) const noexcept;

 private:
  double lo_;
  double hi_;
  std::string unit_;
};

struct LinguisticTerm {
  std::string name;
  MembershipFunction mf;
};

/// A named quantity over a bounded universe described by ordered linguistic terms.
/// Term-name uniqueness is checked by validate_variable, not here.
class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, UniverseInterval universe, std::vector<LinguisticTerm> terms);

  const std::string& name() const noexcept { return name_; }
  const UniverseInterval& universe() const noexcept { return universe_; }
  const std::vector<LinguisticTerm>& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }

  /// Index of the first term with this name.
  std::optional<std::size_t> term_index(const std::string& term) const noexcept;
  const LinguisticTerm& term(const std::string& name) const;

 private:
  std::string name_;
  UniverseInterval universe_;
  std::vector<LinguisticTerm> terms_;
};

struct TermDegree {
  std::string term;
  double degree;
};

/// A crisp reading and its degree in every term of its variable, in term order.
struct FuzzifiedValue {
  std::string variable;
  double crisp = 0.0;
  std::vector<TermDegree> degrees;
  bool clamped = false;  // the raw input lay outside the universe

  /// Degree of a term; throws ValidationError when the term is unknown.
  double degree(const std::string& term) const;
};

/// Clamps x into the universe and evaluates every term. NaN is rejected.
FuzzifiedValue fuzzify(const LinguisticVariable& var, double x);

/// Grid resolution used for coverage checks.
inline constexpr std::size_t kCoverageGridPoints = 1000;

/// Duplicate names are errors; coverage gaps and MF support spilling past the universe are warnings.
ValidationReport validate_variable(const LinguisticVariable& var);

/// Bell parameters for term `index` of `count` evenly spaced terms over the universe:
/// peaks at lo ... hi, neighbours crossing at degree 0.5 halfway between peaks.
GeneralizedBell fit_bell(const UniverseInterval& universe, std::size_t index, std::size_t count, double slope = 2.0);

}  // namespace fuzzyadapt
