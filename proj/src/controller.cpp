#include "fuzzyadapt/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "fuzzyadapt/error.hpp"
#include "fuzzyadapt/format.hpp"

namespace fuzzyadapt {
namespace {

// Weight of a softgoal's shortfall below -xi in the individual-mode objective.
constexpr double kShortfallPenalty = 10.0;
constexpr std::size_t kMaxProbes = 1024;

}  // namespace

ValueMap ControlModel::weights() const {
  ValueMap w;
  for (const auto& sg : registry.softgoals()) w[sg.id] = sg.weight;
  return w;
}

ValidationReport validate_rules_against_edges(const ControlModel& model) {
  ValidationReport report;
  const auto& reg = model.registry;
  auto rule_base = [&](RelationKind k) -> const RuleBase& {
    return k == RelationKind::Upd ? model.upd : k == RelationKind::Ena ? model.ena : model.cor;
  };

  // Output variable -> allowed antecedent variables, per kind.
  std::map<std::pair<RelationKind, std::string>, std::set<std::string>> allowed;
  for (const auto& e : model.edges) {
    if (!reg.kind_of(e.target)) continue;
    auto& set = allowed[{e.kind, reg.variable_of(e.target).name()}];
    for (const auto& s : e.sources)
      if (reg.kind_of(s)) set.insert(reg.variable_of(s).name());
  }

  auto canonical = [&](const std::string& var) {
    auto id = reg.id_of_variable(var);
    return id ? reg.variable_of(*id).name() : var;
  };

  for (RelationKind kind : {RelationKind::Upd, RelationKind::Ena, RelationKind::Cor}) {
    const RuleBase& rb = rule_base(kind);
    std::set<std::string> concluded;
    for (std::size_t i = 0; i < rb.rules.size(); ++i) {
      const Rule& r = rb.rules[i];
      const std::string where = to_string(kind) + " rule " + std::to_string(i + 1);
      for (const auto& c : r.consequents) {
        const std::string out = canonical(c.variable);
        concluded.insert(out);
        auto it = allowed.find({kind, out});
        if (it == allowed.end()) {
          report.error("rule-edge", where + ": no " + to_string(kind) + " edge targets '" + out + "'");
          continue;
        }
        for (const auto& a : r.antecedent.clauses)
          if (!it->second.count(canonical(a.variable)))
            report.error("rule-edge", where + ": '" + a.variable + "' is not a source of the " + to_string(kind) +
                                          " edge into '" + out + "'");
      }
    }
    for (const auto& e : model.edges) {
      if (e.kind != kind || !reg.kind_of(e.target)) continue;
      if (!concluded.count(reg.variable_of(e.target).name()))
        report.error("rule-edge", to_string(kind) + " edge into '" + e.target + "' has no rules");
    }
  }
  return report;
}

void check_settings(const ReadaptationSettings& s) {
  if (!(s.xi > 0.0) || !std::isfinite(s.xi)) throw ValidationError("readaptation threshold xi must be > 0");
  if (s.max_iterations < 1) throw ValidationError("readaptation max_iterations must be >= 1");
  if (!(s.initial_scale > 0.0 && s.initial_scale <= 1.0))
    throw ValidationError("readaptation initial_scale must lie in (0, 1]");
  if (!(s.tolerance > 0.0)) throw ValidationError("readaptation tolerance must be > 0");
  if (s.restarts < 0) throw ValidationError("readaptation restarts must be >= 0");
  if (s.probe_levels != 0 && s.probe_levels < 2) throw ValidationError("readaptation probe_levels must be 0 or >= 2");
}

DeviationReport deviation(const ValueMap& desired, const ValueMap& actual, const ValueMap& weights, double xi,
                          TriggerMode mode) {
  if (!(xi > 0.0)) throw ValidationError("deviation threshold xi must be > 0");
  if (desired.size() != actual.size() || desired.size() != weights.size())
    throw ValidationError("deviation: desired, actual and weights must cover the same softgoals");
  DeviationReport report;
  report.xi = xi;
  report.mode = mode;
  for (const auto& [sg, d] : desired) {
    auto a = actual.find(sg);
    auto w = weights.find(sg);
    if (a == actual.end() || w == weights.end())
      throw ValidationError("deviation: softgoal '" + sg + "' missing from actual or weights");
    const double ds = a->second - d;
    report.individual[sg] = ds;
    report.total += ds * w->second;
    const bool ok = ds >= -xi;
    report.acceptable[sg] = ok;
    report.all_individual_acceptable = report.all_individual_acceptable && ok;
  }
  report.total_acceptable = report.total >= -xi;
  return report;
}

// ---------------------------------------------------------------------------

Controller::Controller(const ControlModel& model) : model_(model) {
  const auto& reg = model_.registry;
  for (const auto& e : model_.edges) {
    EdgeRules er;
    er.target = e.target;
    er.target_variable = reg.variable_of(e.target).name();
    er.sources = e.sources;
    const RuleBase& rb = e.kind == RelationKind::Upd ? model_.upd : e.kind == RelationKind::Ena ? model_.ena : model_.cor;
    er.rules = restrict_to_output(rb, er.target_variable);
    // Rules may name variables through aliases; canonicalise so inference keys line up.
    for (auto& r : er.rules.rules) {
      for (auto& c : r.antecedent.clauses)
        if (auto id = reg.id_of_variable(c.variable)) c.variable = reg.variable_of(*id).name();
      for (auto& c : r.consequents) c.variable = er.target_variable;
    }
    switch (e.kind) {
      case RelationKind::Upd: upd_.push_back(std::move(er)); break;
      case RelationKind::Ena: ena_.push_back(std::move(er)); break;
      case RelationKind::Cor:
        for (const auto& s : e.sources)
          if (std::find(task_order_.begin(), task_order_.end(), s) == task_order_.end()) task_order_.push_back(s);
        cor_.push_back(std::move(er));
        break;
    }
  }
  // Keep registry order for the search vector.
  std::vector<std::string> ordered;
  for (const auto& id : reg.task_ids())
    if (std::find(task_order_.begin(), task_order_.end(), id) != task_order_.end()) ordered.push_back(id);
  task_order_ = std::move(ordered);
}

ValueMap Controller::run_edges(const std::vector<EdgeRules>& edges, const ValueMap& inputs,
                               NoRuleFiredPolicy fallback, const ValueMap* previous) const {
  const auto& reg = model_.registry;
  ValueMap out;
  for (const auto& e : edges) {
    CrispValues crisp;
    for (const auto& s : e.sources) {
      auto it = inputs.find(s);
      if (it == inputs.end()) throw MissingInput(s);
      crisp[reg.variable_of(s).name()] = it->second;
    }
    CrispValues held;
    InferenceOptions options{fallback, nullptr};
    if (previous) {
      if (auto p = previous->find(e.target); p != previous->end()) held[e.target_variable] = p->second;
      options.previous = &held;
    }
    const CrispValues result = infer(e.rules, crisp, reg, options);
    out[e.target] = result.at(e.target_variable);
  }
  return out;
}

FeedforwardResult Controller::feedforward_step(const ValueMap& context, const TimeStepRecord* previous) const {
  FeedforwardResult ff;
  ff.desired_sd = run_edges(upd_, context, model_.fallback, previous ? &previous->desired_sd : nullptr);
  ff.configs = run_edges(ena_, context, model_.fallback, previous ? &previous->configs_pre : nullptr);
  // Tasks without an ENA edge sit at the middle of their search range.
  for (const auto& id : model_.registry.task_ids())
    if (!ff.configs.count(id)) ff.configs[id] = model_.registry.search_range(id).mid();
  return ff;
}

ValueMap Controller::actual_satisfaction(const ValueMap& configs, NoRuleFiredPolicy fallback,
                                         const ValueMap* previous) const {
  ValueMap out = run_edges(cor_, configs, fallback, previous);
  for (auto& [sg, v] : out) v = std::clamp(v, 0.0, 1.0);
  return out;
}

ReadaptResult Controller::readapt(const ValueMap& configs, const ValueMap& desired_sd,
                                  const ReadaptationSettings& settings) const {
  check_settings(settings);
  const auto& reg = model_.registry;
  const ValueMap weights = model_.weights();

  ReadaptResult result;
  result.configs = configs;
  result.actual_sd = actual_satisfaction(configs, NoRuleFiredPolicy::Error);
  result.deviation = deviation(desired_sd, result.actual_sd, weights, settings.xi, settings.mode);
  if (result.deviation.acceptable_overall() || task_order_.empty()) return result;

  std::vector<double> lower, upper, x0;
  for (const auto& id : task_order_) {
    const UniverseInterval range = reg.search_range(id);
    lower.push_back(range.lo());
    upper.push_back(range.hi());
    x0.push_back(range.clamp(configs.at(id)));
  }

  auto configs_at = [&](std::span<const double> x) {
    ValueMap c = configs;
    for (std::size_t i = 0; i < task_order_.size(); ++i) c[task_order_[i]] = x[i];
    return c;
  };
  auto deviation_at = [&](std::span<const double> x) {
    return deviation(desired_sd, actual_satisfaction(configs_at(x), NoRuleFiredPolicy::Error), weights, settings.xi,
                     settings.mode);
  };

  // Minimise -dS; points where inference has nothing to say are infeasible. In individual mode
  // each softgoal's shortfall below -xi is penalised as well, and points that would lower dS
  // below its starting value are infeasible, so the result never worsens dS.
  const double start_total = result.deviation.total;
  auto score = [&](const DeviationReport& d) {
    double v = -d.total;
    if (settings.mode == TriggerMode::Individual)
      for (const auto& [sg, ds] : d.individual) v += kShortfallPenalty * std::max(0.0, -settings.xi - ds);
    return v;
  };
  Objective objective = [&](std::span<const double> x) {
    try {
      const DeviationReport d = deviation_at(x);
      if (settings.mode == TriggerMode::Individual && d.total < start_total)
        return std::numeric_limits<double>::infinity();
      return score(d);
    } catch (const NoRuleFired&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  NelderMeadOptions opt;
  opt.initial_scale = settings.initial_scale;
  opt.tolerance = settings.tolerance;
  opt.max_iterations = settings.max_iterations;
  opt.restarts = settings.restarts;
  if (settings.mode == TriggerMode::Total) {
    opt.target = settings.xi;  // -dS <= xi  <=>  dS >= -xi
  } else {
    opt.accept = [&](std::span<const double> x, double) {
      try {
        return deviation_at(x).all_individual_acceptable;
      } catch (const NoRuleFired&) {
        return false;
      }
    };
  }

  NelderMeadResult nm = nelder_mead_minimize(objective, x0, lower, upper, opt);
  result.iterations = nm.iterations;
  result.evaluations = nm.evaluations;

  // Fuzzy surfaces have plateaus the simplex cannot leave. If the search stalled short of the
  // target, probe a lattice over the box and restart from the best probe that beats it.
  const int budget = settings.max_iterations - nm.iterations;
  if (nm.reason != StopReason::Target && settings.probe_levels >= 2 && budget > 0) {
    const std::size_t n = x0.size();
    const auto levels = static_cast<std::size_t>(settings.probe_levels);
    std::size_t count = 1;
    for (std::size_t i = 0; i < n && count <= kMaxProbes; ++i) count *= levels;
    if (count <= kMaxProbes) {
      std::vector<double> best_x, x(n);
      double best = nm.value;
      for (std::size_t k = 0; k < count; ++k) {
        for (std::size_t i = 0, rest = k; i < n; ++i, rest /= levels)
          x[i] = lower[i] + (upper[i] - lower[i]) * static_cast<double>(rest % levels) / (levels - 1);
        const double v = objective(x);
        ++result.evaluations;
        if (v < best) {
          best = v;
          best_x = x;
        }
      }
      if (!best_x.empty()) {
        opt.max_iterations = budget;
        const NelderMeadResult again = nelder_mead_minimize(objective, best_x, lower, upper, opt);
        result.iterations += again.iterations;
        result.evaluations += again.evaluations;
        if (again.value < nm.value) nm = again;
      }
    }
  }

  if (nm.value <= score(result.deviation)) {
    const ValueMap c = configs_at(nm.x);
    const ValueMap a = actual_satisfaction(c, NoRuleFiredPolicy::Error);
    const DeviationReport d = deviation(desired_sd, a, weights, settings.xi, settings.mode);
    if (d.total >= start_total) {
      result.configs = c;
      result.actual_sd = a;
      result.deviation = d;
    }
  }
  return result;
}

TimeStepRecord Controller::step(const ValueMap& context, const ReadaptationSettings& settings, int t,
                                const TimeStepRecord* previous) const {
  check_settings(settings);
  TimeStepRecord rec;
  rec.t = t;
  rec.context = context;

  const FeedforwardResult ff = feedforward_step(context, previous);
  rec.desired_sd = ff.desired_sd;
  rec.configs_pre = ff.configs;
  rec.actual_sd_pre = actual_satisfaction(rec.configs_pre, model_.fallback, previous ? &previous->actual_sd_post : nullptr);
  const ValueMap weights = model_.weights();
  rec.deviation_pre = deviation(rec.desired_sd, rec.actual_sd_pre, weights, settings.xi, settings.mode);

  rec.configs_post = rec.configs_pre;
  rec.actual_sd_post = rec.actual_sd_pre;
  rec.deviation_post = rec.deviation_pre;
  if (rec.deviation_pre.acceptable_overall()) return rec;

  ReadaptResult ra;
  try {
    ra = readapt(rec.configs_pre, rec.desired_sd, settings);
  } catch (const NoRuleFired&) {
    return rec;  // the feedforward configuration sits where COR inference is silent; keep it
  }
  if (ra.deviation.total < rec.deviation_pre.total) return rec;
  rec.readapted = true;
  rec.iterations = ra.iterations;
  rec.configs_post = ra.configs;
  rec.actual_sd_post = ra.actual_sd;
  rec.deviation_post = ra.deviation;
  return rec;
}

}  // namespace fuzzyadapt
