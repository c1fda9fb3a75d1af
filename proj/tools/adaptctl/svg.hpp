#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace adaptctl {

struct Series {
  std::string title;
  std::string y_label;  // quantity and unit
  std::vector<double> values;
};

/// Minimal line chart: x is the step index, y auto-scaled to the data range.
std::string line_chart_svg(const Series& series);

/// Throws fuzzyadapt::IoError when the file cannot be written.
void write_svg(const Series& series, const std::filesystem::path& path);

}  // namespace adaptctl
