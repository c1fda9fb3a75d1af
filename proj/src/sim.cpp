#include "fuzzyadapt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "fuzzyadapt/error.hpp"
#include "fuzzyadapt/format.hpp"

namespace fuzzyadapt {

GaussianNoise::GaussianNoise(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

double GaussianNoise::next() {
  constexpr double kTwoPow53 = 9007199254740992.0;
  const double u1 = static_cast<double>((engine_() >> 11) + 1) / kTwoPow53;
  const double u2 = static_cast<double>(engine_() >> 11) / kTwoPow53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

double interpolate(const std::vector<std::pair<double, double>>& anchors, double t) {
  if (t <= anchors.front().first) return anchors.front().second;
  if (t >= anchors.back().first) return anchors.back().second;
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    const auto [t1, v1] = anchors[i];
    if (t > t1) continue;
    const auto [t0, v0] = anchors[i - 1];
    if (t1 == t0) return v1;
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
  }
  return anchors.back().second;
}

}  // namespace

void validate_trajectory_spec(const TrajectorySpec& spec, const Registry& registry) {
  if (spec.steps < 1) throw ValidationError("trajectory steps must be >= 1");
  std::set<std::string> seen;
  for (const auto& s : spec.signals) {
    if (registry.kind_of(s.context_id) != ElementKind::Context)
      throw ValidationError("trajectory names unknown context '" + s.context_id + "'");
    if (!seen.insert(s.context_id).second)
      throw ValidationError("trajectory for '" + s.context_id + "' given twice");
    if (s.anchors.empty()) throw ValidationError("trajectory for '" + s.context_id + "' has no anchors");
    if (!(s.sigma >= 0.0) || !std::isfinite(s.sigma))
      throw ValidationError("trajectory sigma for '" + s.context_id + "' must be >= 0");
    const auto& u = registry.variable_of(s.context_id).universe();
    for (std::size_t i = 0; i < s.anchors.size(); ++i) {
      const auto [t, v] = s.anchors[i];
      if (i > 0 && t < s.anchors[i - 1].first)
        throw ValidationError("trajectory anchors for '" + s.context_id + "' are not sorted by t");
      if (!u.contains(v))
        throw ValidationError("trajectory anchor " + fmt_real(v) + " for '" + s.context_id + "' leaves [" +
                              fmt_real(u.lo()) + ", " + fmt_real(u.hi()) + "]");
    }
  }
  for (const auto& c : registry.contexts())
    if (!seen.count(c.id)) throw ValidationError("no trajectory for context '" + c.id + "'");
}

Trajectory generate_trajectory(const TrajectorySpec& spec, const Registry& registry) {
  validate_trajectory_spec(spec, registry);
  Trajectory out;
  for (std::size_t i = 0; i < spec.signals.size(); ++i) {
    const auto& s = spec.signals[i];
    const auto& u = registry.variable_of(s.context_id).universe();
    GaussianNoise noise(spec.seed, i);
    auto& series = out[s.context_id];
    series.reserve(static_cast<std::size_t>(spec.steps));
    for (int t = 0; t < spec.steps; ++t) {
      const double z = noise.next();
      series.push_back(u.clamp(interpolate(s.anchors, t) + s.sigma * z));
    }
  }
  return out;
}

Trace run(const Controller& controller, const TrajectorySpec& spec, const ReadaptationSettings& settings,
          const std::string& scenario_digest) {
  const auto& reg = controller.model().registry;
  const Trajectory traj = generate_trajectory(spec, reg);

  Trace trace;
  trace.seed = spec.seed;
  trace.scenario_digest = scenario_digest;
  for (const auto& c : reg.contexts()) trace.context_ids.push_back(c.id);
  for (const auto& sg : reg.softgoals()) trace.softgoal_ids.push_back(sg.id);
  trace.task_ids = reg.task_ids();
  trace.records.reserve(static_cast<std::size_t>(spec.steps));

  for (int t = 0; t < spec.steps; ++t) {
    ValueMap context;
    for (const auto& [id, series] : traj) context[id] = series[static_cast<std::size_t>(t)];
    const TimeStepRecord* previous = trace.records.empty() ? nullptr : &trace.records.back();
    try {
      trace.records.push_back(controller.step(context, settings, t, previous));
    } catch (const Error& e) {
      throw Error("simulation step " + std::to_string(t) + " failed: " + e.what());
    }
  }
  return trace;
}

SummaryStats summarize(const Trace& trace, double xi) {
  if (trace.records.empty()) throw ValidationError("cannot summarize an empty trace");
  SummaryStats s;
  s.steps = trace.records.size();
  s.xi = xi;
  std::size_t pairs = 0;
  double ok_pre = 0, ok_post = 0, tot_pre = 0, tot_post = 0, abs_pre = 0, abs_post = 0, readapted = 0, iters = 0;
  for (const auto& r : trace.records) {
    for (const auto& [sg, ds] : r.deviation_pre.individual) {
      const double post = r.deviation_post.individual.at(sg);
      ++pairs;
      ok_pre += ds >= -xi;
      ok_post += post >= -xi;
      abs_pre += std::abs(ds);
      abs_post += std::abs(post);
    }
    tot_pre += r.deviation_pre.total >= -xi;
    tot_post += r.deviation_post.total >= -xi;
    readapted += r.readapted;
    iters += r.iterations;
    for (const auto& [sg, v] : r.desired_sd) s.mean_desired_sd[sg] += v;
    for (const auto& [sg, v] : r.actual_sd_pre) s.mean_actual_sd_pre[sg] += v;
    for (const auto& [sg, v] : r.actual_sd_post) s.mean_actual_sd_post[sg] += v;
  }
  const double n = static_cast<double>(s.steps);
  const double p = pairs ? static_cast<double>(pairs) : 1.0;
  s.individual_acceptable_pre = pairs ? ok_pre / p : 1.0;
  s.individual_acceptable_post = pairs ? ok_post / p : 1.0;
  s.total_acceptable_pre = tot_pre / n;
  s.total_acceptable_post = tot_post / n;
  s.mean_abs_deviation_pre = abs_pre / p;
  s.mean_abs_deviation_post = abs_post / p;
  s.readaptation_rate = readapted / n;
  s.mean_iterations = iters / n;
  for (auto* m : {&s.mean_desired_sd, &s.mean_actual_sd_pre, &s.mean_actual_sd_post})
    for (auto& [k, v] : *m) v /= n;
  return s;
}

void write_csv(const Trace& trace, std::ostream& os) {
  std::vector<std::string> cols{"t"};
  for (const auto& id : trace.context_ids) cols.push_back("ac_" + id);
  for (const auto& id : trace.softgoal_ids) cols.push_back("sd_desired_" + id);
  for (const auto& id : trace.task_ids) cols.push_back("cfg_pre_" + id);
  for (const auto& id : trace.softgoal_ids) cols.push_back("sd_actual_pre_" + id);
  for (const auto& id : trace.softgoal_ids) cols.push_back("ds_pre_" + id);
  cols.push_back("dS_pre");
  cols.push_back("readapted");
  cols.push_back("iterations");
  for (const auto& id : trace.task_ids) cols.push_back("cfg_post_" + id);
  for (const auto& id : trace.softgoal_ids) cols.push_back("sd_actual_post_" + id);
  for (const auto& id : trace.softgoal_ids) cols.push_back("ds_post_" + id);
  cols.push_back("dS_post");
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';

  for (const auto& r : trace.records) {
    std::vector<std::string> row{std::to_string(r.t)};
    auto add = [&](const ValueMap& m, const std::vector<std::string>& ids) {
      for (const auto& id : ids) row.push_back(fmt_real(m.at(id)));
    };
    add(r.context, trace.context_ids);
    add(r.desired_sd, trace.softgoal_ids);
    add(r.configs_pre, trace.task_ids);
    add(r.actual_sd_pre, trace.softgoal_ids);
    add(r.deviation_pre.individual, trace.softgoal_ids);
    row.push_back(fmt_real(r.deviation_pre.total));
    row.push_back(r.readapted ? "1" : "0");
    row.push_back(std::to_string(r.iterations));
    add(r.configs_post, trace.task_ids);
    add(r.actual_sd_post, trace.softgoal_ids);
    add(r.deviation_post.individual, trace.softgoal_ids);
    row.push_back(fmt_real(r.deviation_post.total));
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

void write_summary(const Trace& trace, const SummaryStats& s, std::ostream& os) {
  os << "steps=" << s.steps << '\n';
  os << "seed=" << trace.seed << '\n';
  os << "scenario_digest=" << trace.scenario_digest << '\n';
  os << "xi=" << fmt_real(s.xi) << '\n';
  os << "individual_acceptable_pre=" << fmt_real(s.individual_acceptable_pre) << '\n';
  os << "individual_acceptable_post=" << fmt_real(s.individual_acceptable_post) << '\n';
  os << "total_acceptable_pre=" << fmt_real(s.total_acceptable_pre) << '\n';
  os << "total_acceptable_post=" << fmt_real(s.total_acceptable_post) << '\n';
  os << "mean_abs_deviation_pre=" << fmt_real(s.mean_abs_deviation_pre) << '\n';
  os << "mean_abs_deviation_post=" << fmt_real(s.mean_abs_deviation_post) << '\n';
  os << "readaptation_rate=" << fmt_real(s.readaptation_rate) << '\n';
  os << "mean_iterations=" << fmt_real(s.mean_iterations) << '\n';
  for (const auto& id : trace.softgoal_ids) {
    auto get = [&](const std::map<std::string, double>& m) { return m.count(id) ? m.at(id) : 0.0; };
    os << "mean_sd_desired_" << id << '=' << fmt_real(get(s.mean_desired_sd)) << '\n';
    os << "mean_sd_actual_pre_" << id << '=' << fmt_real(get(s.mean_actual_sd_pre)) << '\n';
    os << "mean_sd_actual_post_" << id << '=' << fmt_real(get(s.mean_actual_sd_post)) << '\n';
  }
}

namespace {

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  fn(out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

void export_csv(const Trace& trace, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& os) { write_csv(trace, os); });
}

void export_summary(const Trace& trace, const SummaryStats& stats, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& os) { write_summary(trace, stats, os); });
}

}  // namespace fuzzyadapt
