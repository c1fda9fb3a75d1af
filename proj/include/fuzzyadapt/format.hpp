#pragma once

#include <cstdio>
#include <string>

namespace fuzzyadapt {

/// Real number with 9 significant digits ("%.9g"); the canonical text form for traces and reports.
inline std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);  // no "-0"
  return buf;
}

/// Fixed 9-decimal form, used for membership degrees.
inline std::string fmt_degree(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9f", x == 0.0 ? 0.0 : x);
  return buf;
}

}  // namespace fuzzyadapt
