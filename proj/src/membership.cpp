#include "fuzzyadapt/membership.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzzyadapt/error.hpp"

namespace fuzzyadapt {
namespace {

bool finite(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

// Rising edge on [lo, hi]; a zero-width edge is a step to 1 at hi.
double rise(double x, double lo, double hi) { return hi > lo ? (x - lo) / (hi - lo) : 1.0; }
double fall(double x, double lo, double hi) { return hi > lo ? (hi - x) / (hi - lo) : 1.0; }

struct Evaluate {
  double x;

  double operator()(const Triangular& t) const {
    if (x < t.a || x > t.c) return 0.0;
    if (x < t.b) return rise(x, t.a, t.b);
    if (x == t.b) return 1.0;
    return fall(x, t.b, t.c);
  }

  double operator()(const Trapezoidal& t) const {
    if (x < t.a || x > t.d) return 0.0;
    if (x < t.b) return rise(x, t.a, t.b);
    if (x <= t.c) return 1.0;
    return fall(x, t.c, t.d);
  }

  double operator()(const GeneralizedBell& g) const {
    const double r = std::abs((x - g.center) / g.width);
    return 1.0 / (1.0 + std::pow(r, 2.0 * g.slope));
  }
};

}  // namespace

MembershipFunction::MembershipFunction(MembershipShape shape) : shape_(shape) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Triangular>) {
          if (!finite({s.a, s.b, s.c}) || !(s.a <= s.b && s.b <= s.c) || s.a == s.c)
            throw ValidationError("triangular MF requires a <= b <= c with a < c");
        } else if constexpr (std::is_same_v<T, Trapezoidal>) {
          if (!finite({s.a, s.b, s.c, s.d}) || !(s.a <= s.b && s.b <= s.c && s.c <= s.d) || s.a == s.d)
            throw ValidationError("trapezoidal MF requires a <= b <= c <= d with a < d");
        } else {
          if (!finite({s.width, s.slope, s.center}) || !(s.width > 0.0) || !(s.slope > 0.0))
            throw ValidationError("bell MF requires width > 0 and slope > 0");
        }
      },
      shape_);
}

double MembershipFunction::operator()(double x) const noexcept {
  if (std::isnan(x)) return 0.0;
  const double y = std::visit(Evaluate{x}, shape_);
  return std::clamp(y, 0.0, 1.0);
}

double MembershipFunction::center() const noexcept {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Triangular>)
          return s.b;
        else if constexpr (std::is_same_v<T, Trapezoidal>)
          return 0.5 * (s.b + s.c);
        else
          return s.center;
      },
      shape_);
}

std::pair<double, double> MembershipFunction::support() const noexcept {
  return std::visit(
      [](const auto& s) -> std::pair<double, double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Triangular>)
          return {s.a, s.c};
        else if constexpr (std::is_same_v<T, Trapezoidal>)
          return {s.a, s.d};
        else
          return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
      },
      shape_);
}

std::string MembershipFunction::type_name() const {
  switch (shape_.index()) {
    case 0: return "triangular";
    case 1: return "trapezoidal";
    default: return "bell";
  }
}

bool operator==(const Triangular& l, const Triangular& r) { return l.a == r.a && l.b == r.b && l.c == r.c; }
bool operator==(const Trapezoidal& l, const Trapezoidal& r) {
  return l.a == r.a && l.b == r.b && l.c == r.c && l.d == r.d;
}
bool operator==(const GeneralizedBell& l, const GeneralizedBell& r) {
  return l.width == r.width && l.slope == r.slope && l.center == r.center;
}
bool operator==(const MembershipFunction& lhs, const MembershipFunction& rhs) { return lhs.shape_ == rhs.shape_; }

}  // namespace fuzzyadapt
