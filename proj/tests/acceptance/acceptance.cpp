// One PASS/FAIL line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "adaptctl.hpp"
#include "fuzzyadapt/format.hpp"
#include "fuzzyadapt/inference.hpp"
#include "fuzzyadapt/rules.hpp"
#include "fuzzyadapt/scenario.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace fuzzyadapt;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Scenario& sc() { return testing::bundled(); }

Outcome worked_fuzzification() {
  struct Case {
    const char* var;
    double x;
    double expect[3];
  };
  const Case cases[] = {{"BandwidthRate", 400, {0, 0.4, 0.5}},
                        {"HighTimeEfficiency", 0.8, {0, 0.4, 0.5}},
                        {"DataSize", 350, {0, 0.5, 0.25}}};
  std::string detail;
  bool ok = true;
  for (const auto& c : cases) {
    const auto fv = fuzzify(*sc().model.registry.find_variable(c.var), c.x);
    for (std::size_t i = 0; i < 3; ++i) ok &= near(fv.degrees[i].degree, c.expect[i], 1e-9);
    detail += std::string(detail.empty() ? "" : "; ") + c.var + " " + fmt_real(c.x) + " -> (" + fmt_real(fv.degrees[0].degree) + ", " +
              fmt_real(fv.degrees[1].degree) + ", " + fmt_real(fv.degrees[2].degree) + ")";
  }
  return {ok, detail};
}

Outcome structural_mapping() {
  const auto* g = sc().model.registry.group("t12");
  if (!g) return {false, "no LocatingOption group"};
  const auto a = indicator_to_choice(*g, -7.5), b = indicator_to_choice(*g, 15);
  const bool ok = a.name == "Network" && near(a.duration, 7.5, 1e-9) && near(a.degree, 0.75, 1e-9) &&
                  b.name == "GPS" && near(b.duration, 15, 1e-9) && near(b.degree, 0.5, 1e-9);
  return {ok, "-7.5 -> (" + a.name + ", " + fmt_real(a.duration) + " s, " + fmt_real(a.degree) + "); 15 -> (" + b.name +
                  ", " + fmt_real(b.duration) + " s, " + fmt_real(b.degree) + ")"};
}

Outcome defuzzification_closed_form() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const double y1 = u(rng) * 0.5, y2 = 0.5 + u(rng) * 0.5;
    double m3 = u(rng), m2 = u(rng);
    if (i % 10 == 0) m3 = 0;  // single active term
    if (m3 + m2 <= 0) m2 = 0.5;
    const LinguisticVariable var("Y", {0, 1},
                                 {{"a", MembershipFunction::triangular(0, y1, 1)},
                                  {"b", MembershipFunction::triangular(0, y2, 1)}});
    AggregatedOutput agg{"Y", {}};
    if (m3 > 0) agg.strengths["a"] = m3;
    agg.strengths["b"] = m2;
    const double expect = (m3 * y1 + m2 * y2) / (m3 + m2);
    worst = std::max(worst, std::abs(defuzzify(agg, var) - expect));
  }
  return {worst <= 1e-12, "1000 cases, max error " + fmt_real(worst)};
}

Outcome rule_space() {
  const auto space = count_rule_space({3, 3, 3}, {3});
  const auto& reg = sc().model.registry;
  const auto skeletons = enumerate_rules({reg.find_variable("BandwidthRate"), reg.find_variable("NetworkDelay"),
                                          reg.find_variable("DumpEnergy")},
                                         {reg.find_variable("HighTimeEfficiency")});
  const std::size_t authored = sc().model.upd.rules.size();
  return {space == 324 && skeletons.size() == 81 && authored == 81,
          "space " + std::to_string(space) + ", skeletons " + std::to_string(skeletons.size()) +
              ", bundled UPD rules " + std::to_string(authored)};
}

Outcome sample_rules() {
  int parsed = 0, errors = 0;
  for (const auto& s : testing::sample_rules()) {
    try {
      const std::string line = s.line;
      const Rule r = parse_rule(line, sc().model.registry);
      if (format_rule(r) != line.substr(line.find(". ") + 2) || parse_rule_syntax(format_rule(r)) != r) ++errors;
      errors += static_cast<int>(validate_rule_base(RuleBase{s.kind, {r}}, sc().model.registry).error_count());
      ++parsed;
    } catch (const Error&) {
      ++errors;
    }
  }
  return {parsed == 12 && errors == 0, std::to_string(parsed) + "/12 parsed, " + std::to_string(errors) + " errors"};
}

Outcome optimizer_oracle() {
  ReadaptationSettings s;
  s.xi = 1e-6;  // unreachable unless the optimum is exact, so the search runs to convergence
  double worst_gap = 0, worst_time = 0;
  int failures = 0;
  for (int i = 0; i < 20; ++i) {
    const auto in = testing::random_instance(1000 + i);
    const ControlModel m = testing::two_task_model(in.table, in.w1);
    const Controller c(m);
    const auto t0 = Clock::now();
    const auto r = c.readapt(in.start, in.desired, s);
    const double dt = seconds_since(t0);
    const double best = testing::grid_best(c, in.desired);
    const double gap = best - r.deviation.total;
    worst_gap = std::max(worst_gap, gap);
    worst_time = std::max(worst_time, dt);
    if (gap > 0.01 || dt >= 1.0) ++failures;
  }
  return {failures == 0, "20 instances, worst shortfall vs grid " + fmt_real(worst_gap) + ", slowest " +
                             fmt_real(worst_time) + " s"};
}

Outcome loop_improvement(const Trace& trace, const SummaryStats& st) {
  int bad = 0;
  for (const auto& r : trace.records)
    if (r.readapted && r.deviation_post.total < r.deviation_pre.total) ++bad;
  const bool ok = bad == 0 && st.individual_acceptable_post >= st.individual_acceptable_pre;
  return {ok, "acceptable individual deviations " + fmt_real(st.individual_acceptable_pre) + " -> " +
                  fmt_real(st.individual_acceptable_post) + " (soft target >= 0.85: " +
                  (st.individual_acceptable_post >= 0.85 ? "met" : "missed") + "), " + std::to_string(bad) +
                  " worsened steps"};
}

Outcome qualitative_trends(const Trace& trace) {
  // Depletion sets in once the noise-free dump energy falls below half its range.
  TrajectorySpec quiet = sc().trajectories;
  for (auto& s : quiet.signals) s.sigma = 0;
  const auto base = generate_trajectory(quiet, sc().model.registry).at("ac3");
  std::size_t onset = base.size();
  for (std::size_t t = 0; t < base.size(); ++t)
    if (base[t] < 500) {
      onset = t;
      break;
    }
  int gps_after = 0;
  for (std::size_t t = onset; t < trace.records.size(); ++t)
    if (trace.records[t].configs_post.at("t12") >= 0) ++gps_after;

  // Energy efficiency overtakes time efficiency: lower early, higher over the final quarter.
  const std::size_t n = trace.records.size(), q = n / 4;
  double early = 0;
  for (std::size_t t = 0; t < q; ++t)
    early += trace.records[t].desired_sd.at("sg2") - trace.records[t].desired_sd.at("sg1");
  int late_violations = 0;
  for (std::size_t t = n - q; t < n; ++t)
    if (trace.records[t].desired_sd.at("sg2") <= trace.records[t].desired_sd.at("sg1")) ++late_violations;
  const bool ok = onset < n && gps_after == 0 && early < 0 && late_violations == 0;
  return {ok, "depletion from step " + std::to_string(onset) + ", non-network steps after it " +
                  std::to_string(gps_after) + "; mean early sd2-sd1 " + fmt_real(early / q) +
                  ", final-quarter steps with sd2 <= sd1 " + std::to_string(late_violations)};
}

Outcome determinism() {
  const auto dir = testing::scratch("acceptance_determinism");
  std::ostringstream out, err;
  for (const char* sub : {"a", "b"}) {
    const int code = adaptctl::run({"--scenario", testing::scenario_path().string(), "simulate", "--steps", "200",
                                    "--seed", "42", "--out", (dir / sub).string()},
                                   out, err);
    if (code != 0) return {false, "simulate exited " + std::to_string(code) + ": " + err.str()};
  }
  const bool same = slurp(dir / "a" / "trace.csv") == slurp(dir / "b" / "trace.csv") &&
                    slurp(dir / "a" / "summary.txt") == slurp(dir / "b" / "summary.txt") &&
                    !slurp(dir / "a" / "trace.csv").empty();
  return {same, same ? "trace.csv and summary.txt byte-identical" : "outputs differ"};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  };

  report(1, "worked fuzzification values", worked_fuzzification);
  report(2, "structural task mapping", structural_mapping);
  report(3, "center-average defuzzification", defuzzification_closed_form);
  report(4, "rule-space size", rule_space);
  report(5, "sample rules", sample_rules);
  report(6, "optimizer against grid search", optimizer_oracle);

  const Controller controller(sc().model);
  ReadaptationSettings settings = sc().settings;
  settings.xi = 0.1;
  const auto t0 = Clock::now();
  const Trace trace = run(controller, sc().trajectories, settings, sc().digest);
  const double elapsed = seconds_since(t0);
  const SummaryStats stats = summarize(trace, settings.xi);

  report(7, "readaptation improves the loop", [&] { return loop_improvement(trace, stats); });
  report(8, "resource depletion trends", [&] { return qualitative_trends(trace); });
  report(9, "simulation determinism", determinism);
  report(10, "full-run time budget", [&] {
    return Outcome{elapsed < 10.0 && trace.records.size() == 200,
                   std::to_string(trace.records.size()) + " steps in " + fmt_real(elapsed) + " s"};
  });
  return failures;
}
