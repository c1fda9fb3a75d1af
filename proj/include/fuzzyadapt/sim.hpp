#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fuzzyadapt/controller.hpp"

namespace fuzzyadapt {

/// Base signal of one context: piecewise-linear through (t, value) anchors, held flat beyond
/// the first and last anchor, plus Gaussian white noise of standard deviation `sigma`.
struct ContextSignal {
  std::string context_id;
  std::vector<std::pair<double, double>> anchors;
  double sigma = 0.0;
};

struct TrajectorySpec {
  std::vector<ContextSignal> signals;
  std::uint64_t seed = 42;
  int steps = 200;
};

/// Context id -> one value per step.
using Trajectory = std::map<std::string, std::vector<double>>;

/// Standard normal samples from a seeded 64-bit Mersenne Twister via Box-Muller.
/// Both are fully specified, so the stream is identical on every conforming platform:
///   u1 = (1 + (r1 >> 11)) * 2^-53 in (0, 1],  u2 = (r2 >> 11) * 2^-53 in [0, 1)
///   z  = sqrt(-2 ln u1) * cos(2 pi u2)
class GaussianNoise {
 public:
  GaussianNoise(std::uint64_t seed, std::uint64_t stream);
  double next();

 private:
  std::mt19937_64 engine_;
};

/// Checks anchors (sorted by t, values within the context universe) and noise parameters.
void validate_trajectory_spec(const TrajectorySpec& spec, const Registry& registry);

/// value(t) = base(t) + sigma * z_t, clamped to the context universe. Stream i uses noise
/// stream i of the seed, so a series depends only on (spec, seed).
Trajectory generate_trajectory(const TrajectorySpec& spec, const Registry& registry);

struct Trace {
  std::uint64_t seed = 0;
  std::string scenario_digest;
  std::vector<std::string> context_ids;
  std::vector<std::string> softgoal_ids;
  std::vector<std::string> task_ids;
  std::vector<TimeStepRecord> records;
};

/// One controller step per trajectory sample. A failing step aborts with its index.
Trace run(const Controller& controller, const TrajectorySpec& spec, const ReadaptationSettings& settings,
          const std::string& scenario_digest = {});

struct SummaryStats {
  std::size_t steps = 0;
  double xi = 0.1;
  double individual_acceptable_pre = 0.0;
  double individual_acceptable_post = 0.0;
  double total_acceptable_pre = 0.0;
  double total_acceptable_post = 0.0;
  double mean_abs_deviation_pre = 0.0;
  double mean_abs_deviation_post = 0.0;
  double readaptation_rate = 0.0;
  double mean_iterations = 0.0;
  std::map<std::string, double> mean_desired_sd;
  std::map<std::string, double> mean_actual_sd_pre;
  std::map<std::string, double> mean_actual_sd_post;
};

/// Acceptability is Δs >= -xi over every (step, softgoal) pair, and ΔS >= -xi per step.
/// Throws ValidationError on an empty trace.
SummaryStats summarize(const Trace& trace, double xi);

void write_csv(const Trace& trace, std::ostream& os);
void write_summary(const Trace& trace, const SummaryStats& stats, std::ostream& os);

/// Throws IoError naming the path when it cannot be written.
void export_csv(const Trace& trace, const std::filesystem::path& path);
void export_summary(const Trace& trace, const SummaryStats& stats, const std::filesystem::path& path);

}  // namespace fuzzyadapt
