#include "fuzzyadapt/linguistic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fuzzyadapt/error.hpp"
#include "fuzzyadapt/format.hpp"

namespace fuzzyadapt {

UniverseInterval::UniverseInterval(double lo, double hi, std::string unit) : lo_(lo), hi_(hi), unit_(std::move(unit)) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw ValidationError("universe requires finite lo < hi, got [" + fmt_real(lo) + ", " + fmt_real(hi) + "]");
}

double UniverseInterval::clamp(double x) const noexcept { return std::clamp(x, lo_, hi_); }

LinguisticVariable::LinguisticVariable(std::string name, UniverseInterval universe, std::vector<LinguisticTerm> terms)
    : name_(std::move(name)), universe_(std::move(universe)), terms_(std::move(terms)) {
  if (name_.empty()) throw ValidationError("linguistic variable name must be nonempty");
  if (terms_.empty()) throw ValidationError("linguistic variable '" + name_ + "' has no terms");
  for (const auto& t : terms_)
    if (t.name.empty()) throw ValidationError("linguistic variable '" + name_ + "' has a term with an empty name");
}

std::optional<std::size_t> LinguisticVariable::term_index(const std::string& term) const noexcept {
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].name == term) return i;
  return std::nullopt;
}

const LinguisticTerm& LinguisticVariable::term(const std::string& name) const {
  auto idx = term_index(name);
  if (!idx) throw ValidationError("variable '" + name_ + "' has no term '" + name + "'");
  return terms_[*idx];
}

double FuzzifiedValue::degree(const std::string& term) const {
  for (const auto& d : degrees)
    if (d.term == term) return d.degree;
  throw ValidationError("variable '" + variable + "' has no term '" + term + "'");
}

FuzzifiedValue fuzzify(const LinguisticVariable& var, double x) {
  if (std::isnan(x)) throw ValidationError("cannot fuzzify NaN for variable '" + var.name() + "'");
  FuzzifiedValue out;
  out.variable = var.name();
  out.crisp = var.universe().clamp(x);
  out.clamped = out.crisp != x;
  out.degrees.reserve(var.term_count());
  for (const auto& t : var.terms()) out.degrees.push_back({t.name, t.mf(out.crisp)});
  return out;
}

ValidationReport validate_variable(const LinguisticVariable& var) {
  ValidationReport report;
  const auto& u = var.universe();

  std::set<std::string> seen;
  for (const auto& t : var.terms())
    if (!seen.insert(t.name).second)
      report.error("duplicate-term", "variable '" + var.name() + "' defines term '" + t.name + "' more than once");

  // Runs of grid points where no term is active.
  const std::size_t n = kCoverageGridPoints;
  std::optional<double> gap_start;
  double gap_end = 0.0;
  auto flush = [&] {
    if (!gap_start) return;
    report.warning("coverage-gap", "variable '" + var.name() + "' has no active term on [" + fmt_real(*gap_start) +
                                       ", " + fmt_real(gap_end) + "]");
    gap_start.reset();
  };
  for (std::size_t i = 0; i < n; ++i) {
    const double x = u.lo() + u.width() * static_cast<double>(i) / static_cast<double>(n - 1);
    const bool covered =
        std::any_of(var.terms().begin(), var.terms().end(), [x](const LinguisticTerm& t) { return t.mf(x) > 0.0; });
    if (covered) {
      flush();
    } else {
      if (!gap_start) gap_start = x;
      gap_end = x;
    }
  }
  flush();

  for (const auto& t : var.terms()) {
    auto [lo, hi] = t.mf.support();
    if (!std::isfinite(lo) || !std::isfinite(hi)) continue;
    if (lo < u.lo() || hi > u.hi())
      report.warning("support-exceeds-universe", "term '" + t.name + "' of '" + var.name() + "' has support [" +
                                                     fmt_real(lo) + ", " + fmt_real(hi) + "] outside [" +
                                                     fmt_real(u.lo()) + ", " + fmt_real(u.hi()) + "]");
  }
  return report;
}

GeneralizedBell fit_bell(const UniverseInterval& universe, std::size_t index, std::size_t count, double slope) {
  if (count == 0 || index >= count) throw ValidationError("bell fit index out of range");
  if (count == 1) return {universe.width() / 2.0, slope, universe.mid()};
  const double spacing = universe.width() / static_cast<double>(count - 1);
  return {spacing / 2.0, slope, universe.lo() + spacing * static_cast<double>(index)};
}

}  // namespace fuzzyadapt
