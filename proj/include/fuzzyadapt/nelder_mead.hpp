#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fuzzyadapt {

/// Downhill simplex over a box. The search runs in coordinates normalised to [0, 1] per
/// dimension and every trial point is clamped into the box, so the result never leaves it.
/// Objective values of +inf (or NaN) mark infeasible points; they are never accepted as best.
struct NelderMeadOptions {
  double initial_scale = 0.1;  // initial edge length, as a fraction of each range
  double tolerance = 1e-4;     // stop when the simplex diameter (normalised units) drops below this
  int max_iterations = 200;    // total over all restarts
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  /// After convergence, restart with a fresh simplex around the best point this many times.
  int restarts = 2;
  /// Stop as soon as the best value is <= target.
  std::optional<double> target;
  /// Stop as soon as this accepts the incumbent (box coordinates, value).
  std::function<bool(std::span<const double>, double)> accept;
};

enum class StopReason { Target, Converged, MaxIterations };

std::string to_string(StopReason reason);

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  StopReason reason = StopReason::MaxIterations;
};

using Objective = std::function<double(std::span<const double>)>;

/// Minimises `f` starting from `x0` (clamped into [lower, upper]). The returned value is never
/// worse than f(x0). Throws std::invalid_argument on mismatched sizes or an empty/inverted box.
NelderMeadResult nelder_mead_minimize(const Objective& f, std::vector<double> x0, std::span<const double> lower,
                                      std::span<const double> upper, const NelderMeadOptions& options = {});

}  // namespace fuzzyadapt
