#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fuzzyadapt/error.hpp"
#include "fuzzyadapt/format.hpp"

namespace adaptctl {

using fuzzyadapt::fmt_real;

namespace {

constexpr double kWidth = 640, kHeight = 320;
constexpr double kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string line_chart_svg(const Series& s) {
  double lo = 0.0, hi = 1.0;
  if (!s.values.empty()) {
    const auto [mn, mx] = std::minmax_element(s.values.begin(), s.values.end());
    lo = *mn;
    hi = *mx;
  }
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double n = s.values.size() > 1 ? static_cast<double>(s.values.size() - 1) : 1.0;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double i) { return kLeft + pw * i / n; };
  auto py = [&](double v) { return kTop + ph * (1.0 - (v - lo) / (hi - lo)); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kWidth / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" << escape(s.title)
    << "</text>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
    << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt_real(py(v) + 4) << "\" text-anchor=\"end\">" << fmt_real(v)
      << "</text>\n";
    const double i = n * k / 4.0;
    o << "<text x=\"" << fmt_real(px(i)) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
      << fmt_real(std::round(i)) << "</text>\n";
  }
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">time step</text>\n";
  o << "<text transform=\"translate(16," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(s.y_label) << "</text>\n";
  o << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < s.values.size(); ++i)
    o << (i ? " " : "") << fmt_real(px(static_cast<double>(i))) << ',' << fmt_real(py(s.values[i]));
  o << "\"/>\n</svg>\n";
  return o.str();
}

void write_svg(const Series& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw fuzzyadapt::IoError("cannot write '" + path.string() + "'");
  out << line_chart_svg(series);
  if (!out) throw fuzzyadapt::IoError("failed writing '" + path.string() + "'");
}

}  // namespace adaptctl
