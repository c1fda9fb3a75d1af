#pragma once

#include <string>
#include <utility>
#include <variant>

namespace fuzzyadapt {

struct Triangular {
  double a, b, c;
};

struct Trapezoidal {
  double a, b, c, d;
};

/// 1 / (1 + |(x - center) / width|^(2 slope)).
struct GeneralizedBell {
  double width, slope, center;
};

using MembershipShape = std::variant<Triangular, Trapezoidal, GeneralizedBell>;

/// A validated membership function. Construction rejects malformed parameters;
/// evaluation is total and always lands in [0, 1].
///
/// Degenerate shoulders (a == b, or b == c) are vertical edges: the shared point has degree 1.
class MembershipFunction {
 public:
  explicit MembershipFunction(MembershipShape shape);

  static MembershipFunction triangular(double a, double b, double c) { return MembershipFunction(Triangular{a, b, c}); }
  static MembershipFunction trapezoidal(double a, double b, double c, double d) {
    return MembershipFunction(Trapezoidal{a, b, c, d});
  }
  static MembershipFunction bell(double width, double slope, double center) {
    return MembershipFunction(GeneralizedBell{width, slope, center});
  }

  double operator()(double x) const noexcept;

  /// Representative point used by center-average defuzzification:
  /// triangle peak, trapezoid plateau midpoint, bell center.
  double center() const noexcept;

  /// Closed interval outside of which the degree is 0. Unbounded for bells.
  std::pair<double, double> support() const noexcept;

  const MembershipShape& shape() const noexcept { return shape_; }
  std::string type_name() const;

  friend bool operator==(const MembershipFunction& lhs, const MembershipFunction& rhs);

 private:
  MembershipShape shape_;
};

bool operator==(const Triangular& lhs, const Triangular& rhs);
bool operator==(const Trapezoidal& lhs, const Trapezoidal& rhs);
bool operator==(const GeneralizedBell& lhs, const GeneralizedBell& rhs);

inline double eval_membership(const MembershipFunction& mf, double x) noexcept { return mf(x); }

}  // namespace fuzzyadapt
