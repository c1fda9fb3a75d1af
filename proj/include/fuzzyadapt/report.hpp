#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fuzzyadapt {

enum class Severity { Warning, Error };

struct Issue {
  Severity severity;
  std::string code;     // short machine-readable tag, e.g. "coverage-gap"
  std::string message;
};

/// Accumulated findings of a validator. Validators never throw for content problems.
class ValidationReport {
 public:
  void error(std::string code, std::string message) {
    issues_.push_back({Severity::Error, std::move(code), std::move(message)});
  }
  void warning(std::string code, std::string message) {
    issues_.push_back({Severity::Warning, std::move(code), std::move(message)});
  }
  void merge(const ValidationReport& other) {
    issues_.insert(issues_.end(), other.issues_.begin(), other.issues_.end());
  }

  const std::vector<Issue>& issues() const noexcept { return issues_; }
  bool ok() const noexcept { return error_count() == 0; }
  std::size_t error_count() const noexcept { return count(Severity::Error); }
  std::size_t warning_count() const noexcept { return count(Severity::Warning); }
  bool has(const std::string& code) const {
    for (const auto& issue : issues_)
      if (issue.code == code) return true;
    return false;
  }

 private:
  std::size_t count(Severity s) const noexcept {
    std::size_t n = 0;
    for (const auto& issue : issues_)
      if (issue.severity == s) ++n;
    return n;
  }

  std::vector<Issue> issues_;
};

inline std::ostream& operator<<(std::ostream& os, const ValidationReport& report) {
  for (const auto& issue : report.issues())
    os << (issue.severity == Severity::Error ? "error" : "warning") << " [" << issue.code << "] " << issue.message
       << '\n';
  return os;
}

}  // namespace fuzzyadapt
