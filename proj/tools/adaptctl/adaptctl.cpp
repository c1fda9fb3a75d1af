#include "adaptctl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fuzzyadapt/error.hpp"
#include "fuzzyadapt/format.hpp"
#include "fuzzyadapt/scenario.hpp"
#include "fuzzyadapt/sim.hpp"
#include "svg.hpp"

namespace adaptctl {

using namespace fuzzyadapt;
namespace fs = std::filesystem;

namespace {

struct Options {
  std::string scenario;

  std::string var;
  double value = 0.0;

  std::string context;

  int steps = 0;
  std::uint64_t seed = 0;
  std::string seeds;
  std::string out_dir = "out";
  double xi = 0.0;

  std::string kind;
  std::string target;
  std::vector<std::uint64_t> inputs;
  std::vector<std::uint64_t> outputs;
};

// Loading errors are split: broken files are exit 2, invalid content exit 1.
Scenario load(const Options& o) {
  if (o.scenario.empty()) throw CLI::ValidationError("--scenario", "no scenario: pass --scenario or set ADAPTCTL_SCENARIO");
  return load_scenario(o.scenario);
}

std::string unit_suffix(const LinguisticVariable& v) {
  return v.universe().unit().empty() ? std::string{} : " " + v.universe().unit();
}

// ---------------------------------------------------------------------------

int cmd_validate(const Options& o, std::ostream& out) {
  const Scenario sc = load(o);
  const ValidationReport report = validate_scenario(sc);
  out << report;
  const auto& m = sc.model;
  out << "scenario " << sc.name << ": " << m.registry.contexts().size() << " contexts, "
      << m.registry.softgoals().size() << " softgoals, " << m.registry.task_ids().size() << " tasks, "
      << m.edges.size() << " edges, " << m.upd.rules.size() << " UPD / " << m.ena.rules.size() << " ENA / "
      << m.cor.rules.size() << " COR rules\n";
  out << report.error_count() << " errors, " << report.warning_count() << " warnings\n";
  return report.ok() ? kOk : kDomainError;
}

int cmd_fuzzify(const Options& o, std::ostream& out, std::ostream& err) {
  const Scenario sc = load(o);
  const LinguisticVariable* var = sc.model.registry.find_variable(o.var);
  if (!var) {
    err << "error: unknown variable '" << o.var << "'\n";
    return kDomainError;
  }
  const FuzzifiedValue fv = fuzzify(*var, o.value);
  if (fv.clamped)
    err << "warning: " << fmt_real(o.value) << " clamped to " << fmt_real(fv.crisp) << " for " << var->name() << '\n';
  for (std::size_t i = 0; i < fv.degrees.size(); ++i)
    out << (i ? ", " : "") << fv.degrees[i].term << ' ' << fmt_degree(fv.degrees[i].degree);
  out << '\n';
  return kOk;
}

// "ac1=450,DumpEnergy=900" -> values keyed by context id.
ValueMap parse_context(const std::string& text, const Registry& reg) {
  ValueMap ctx;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--context", "expected name=value, got '" + item + "'");
    std::string key = item.substr(0, eq);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    const std::string raw = item.substr(eq + 1);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(raw, &used);
      if (raw.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(raw);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--context", "'" + raw + "' is not a number");
    }
    std::string id = key;
    if (reg.kind_of(key) != ElementKind::Context) {
      const auto owner = reg.id_of_variable(key);
      if (!owner || reg.kind_of(*owner) != ElementKind::Context)
        throw ValidationError("unknown context '" + key + "'");
      id = *owner;
    }
    ctx[id] = v;
  }
  for (const auto& c : reg.contexts())
    if (!ctx.count(c.id)) throw MissingInput(c.variable.name());
  return ctx;
}

void print_configs(std::ostream& out, const Registry& reg, const ValueMap& configs) {
  for (const auto& id : reg.task_ids()) {
    const auto& var = reg.variable_of(id);
    const double v = configs.at(id);
    out << "  " << id << ' ' << var.name() << ' ' << fmt_real(v) << unit_suffix(var);
    if (const auto* g = reg.group(id)) {
      const AlternativeChoice c = indicator_to_choice(*g, v);
      out << " -> " << c.name << " for " << fmt_real(c.duration) << unit_suffix(var) << " (degree "
          << fmt_degree(c.degree) << ')';
    }
    out << '\n';
  }
}

void print_sd(std::ostream& out, const Registry& reg, const ValueMap& sd) {
  for (const auto& s : reg.softgoals())
    out << "  " << s.id << ' ' << s.variable.name() << ' ' << fmt_real(sd.at(s.id)) << '\n';
}

void print_deviation(std::ostream& out, const Registry& reg, const DeviationReport& d) {
  for (const auto& s : reg.softgoals())
    out << "  " << s.id << " ds=" << fmt_real(d.individual.at(s.id))
        << (d.acceptable.at(s.id) ? " acceptable" : " unacceptable") << '\n';
  out << "  dS=" << fmt_real(d.total) << (d.total_acceptable ? " acceptable" : " unacceptable") << " (xi "
      << fmt_real(d.xi) << ")\n";
}

int cmd_infer(const Options& o, std::ostream& out) {
  const Scenario sc = load(o);
  const auto& reg = sc.model.registry;
  const ValueMap ctx = parse_context(o.context, reg);
  ReadaptationSettings settings = sc.settings;
  if (o.xi > 0.0) settings.xi = o.xi;
  check_settings(settings);
  const Controller controller(sc.model);
  const TimeStepRecord r = controller.step(ctx, settings);

  out << "context\n";
  for (const auto& c : reg.contexts())
    out << "  " << c.id << ' ' << c.variable.name() << ' ' << fmt_real(r.context.at(c.id)) << unit_suffix(c.variable)
        << '\n';
  out << "desired satisfaction\n";
  print_sd(out, reg, r.desired_sd);
  out << "configuration (feedforward)\n";
  print_configs(out, reg, r.configs_pre);
  out << "actual satisfaction (feedforward)\n";
  print_sd(out, reg, r.actual_sd_pre);
  out << "deviation (feedforward)\n";
  print_deviation(out, reg, r.deviation_pre);
  if (!r.readapted) {
    out << "readaptation: not needed\n";
    return kOk;
  }
  out << "readaptation: " << r.iterations << " iterations\n";
  out << "configuration (readapted)\n";
  print_configs(out, reg, r.configs_post);
  out << "actual satisfaction (readapted)\n";
  print_sd(out, reg, r.actual_sd_post);
  out << "deviation (readapted)\n";
  print_deviation(out, reg, r.deviation_post);
  return kOk;
}

// ---------------------------------------------------------------------------

std::vector<Series> trace_series(const Trace& trace, const Registry& reg) {
  std::vector<Series> out;
  auto collect = [&](const std::string& title, const std::string& label, auto get) {
    Series s{title, label, {}};
    s.values.reserve(trace.records.size());
    for (const auto& r : trace.records) s.values.push_back(get(r));
    out.push_back(std::move(s));
  };
  for (const auto& id : trace.context_ids) {
    const auto& v = reg.variable_of(id);
    collect("ac_" + id, v.name() + " (" + v.universe().unit() + ")", [&](const TimeStepRecord& r) { return r.context.at(id); });
  }
  for (const auto& id : trace.softgoal_ids) {
    const std::string name = reg.variable_of(id).name();
    collect("sd_desired_" + id, "desired " + name + " (degree)", [&](const TimeStepRecord& r) { return r.desired_sd.at(id); });
    collect("sd_actual_pre_" + id, "actual " + name + " (degree)",
            [&](const TimeStepRecord& r) { return r.actual_sd_pre.at(id); });
    collect("sd_actual_post_" + id, "actual " + name + " (degree)",
            [&](const TimeStepRecord& r) { return r.actual_sd_post.at(id); });
    collect("ds_pre_" + id, "deviation " + name + " (degree)",
            [&](const TimeStepRecord& r) { return r.deviation_pre.individual.at(id); });
    collect("ds_post_" + id, "deviation " + name + " (degree)",
            [&](const TimeStepRecord& r) { return r.deviation_post.individual.at(id); });
  }
  for (const auto& id : trace.task_ids) {
    const auto& v = reg.variable_of(id);
    const std::string label = v.name() + " (" + v.universe().unit() + ")";
    collect("cfg_pre_" + id, label, [&](const TimeStepRecord& r) { return r.configs_pre.at(id); });
    collect("cfg_post_" + id, label, [&](const TimeStepRecord& r) { return r.configs_post.at(id); });
  }
  collect("dS_pre", "weighted deviation (degree)", [](const TimeStepRecord& r) { return r.deviation_pre.total; });
  collect("dS_post", "weighted deviation (degree)", [](const TimeStepRecord& r) { return r.deviation_post.total; });
  return out;
}

void export_run(const Trace& trace, const SummaryStats& stats, const Registry& reg, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "plots", ec);
  if (ec) throw IoError("cannot create '" + (dir / "plots").string() + "': " + ec.message());
  export_csv(trace, dir / "trace.csv");
  export_summary(trace, stats, dir / "summary.txt");
  for (const auto& s : trace_series(trace, reg)) write_svg(s, dir / "plots" / (s.title + ".svg"));
}

// "3..7" -> {3, ..., 7}
std::vector<std::uint64_t> parse_seed_range(const std::string& text) {
  const auto dots = text.find("..");
  auto num = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw CLI::ValidationError("--seeds", "expected a..b with unsigned integers, got '" + text + "'");
    return std::stoull(s);
  };
  if (dots == std::string::npos) return {num(text)};
  const std::uint64_t a = num(text.substr(0, dots)), b = num(text.substr(dots + 2));
  if (b < a || b - a >= 10000) throw CLI::ValidationError("--seeds", "bad seed range '" + text + "'");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
  return seeds;
}

int cmd_simulate(const Options& o, const CLI::App& sub, std::ostream& out) {
  const Scenario sc = load(o);
  ReadaptationSettings settings = sc.settings;
  if (sub.count("--xi")) settings.xi = o.xi;
  check_settings(settings);
  TrajectorySpec spec = sc.trajectories;
  if (sub.count("--steps")) spec.steps = o.steps;
  if (sub.count("--seed")) spec.seed = o.seed;
  const ValidationReport report = validate_scenario(sc);
  if (!report.ok()) {
    out << report;
    throw ValidationError("scenario has " + std::to_string(report.error_count()) + " validation errors");
  }

  const Controller controller(sc.model);
  const fs::path dir(o.out_dir);
  auto one = [&](std::uint64_t seed, const fs::path& where) {
    TrajectorySpec s = spec;
    s.seed = seed;
    const Trace trace = run(controller, s, settings, sc.digest);
    const SummaryStats stats = summarize(trace, settings.xi);
    export_run(trace, stats, sc.model.registry, where);
    std::ostringstream text;
    write_summary(trace, stats, text);
    return text.str();
  };

  if (o.seeds.empty()) {
    out << one(spec.seed, dir);
    return kOk;
  }
  const auto seeds = parse_seed_range(o.seeds);
  std::vector<std::future<std::string>> jobs;
  for (auto seed : seeds)
    jobs.push_back(std::async(std::launch::async, one, seed, dir / ("seed_" + std::to_string(seed))));
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (i) out << '\n';
    out << "[seed " << seeds[i] << "]\n" << jobs[i].get();
  }
  return kOk;
}

// ---------------------------------------------------------------------------

std::vector<const RelationEdge*> selected_edges(const Options& o, const ControlModel& m) {
  std::optional<RelationKind> kind;
  if (!o.kind.empty()) {
    kind = parse_relation_kind(o.kind);
    if (!kind) throw CLI::ValidationError("--kind", "expected UPD, ENA or COR");
  }
  std::vector<const RelationEdge*> out;
  for (const auto& e : m.edges)
    if ((!kind || e.kind == *kind) && (o.target.empty() || e.target == o.target)) out.push_back(&e);
  if (out.empty()) throw ValidationError("no relation edge matches the selection");
  return out;
}

const RuleBase& base_of(const ControlModel& m, RelationKind k) {
  return k == RelationKind::Upd ? m.upd : k == RelationKind::Ena ? m.ena : m.cor;
}

std::string join_counts(const std::vector<std::uint64_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

int cmd_rules_count(const Options& o, std::ostream& out) {
  auto skeletons = [](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::uint64_t n = 1;
    for (auto k : a) n *= k;
    for (auto k : b) n *= k;
    return n;
  };
  if (!o.inputs.empty() || !o.outputs.empty()) {
    const std::uint64_t space = count_rule_space(o.inputs, o.outputs);
    out << "inputs " << join_counts(o.inputs) << " outputs " << join_counts(o.outputs) << ": rule space " << space
        << ", and-only skeletons " << skeletons(o.inputs, o.outputs) << '\n';
    return kOk;
  }
  const Scenario sc = load(o);
  const auto& m = sc.model;
  std::map<RelationKind, std::uint64_t> space_total, skeleton_total, authored_total;
  for (const RelationEdge* e : selected_edges(o, m)) {
    std::vector<std::uint64_t> in, outc;
    for (const auto& s : e->sources) in.push_back(m.registry.variable_of(s).term_count());
    const auto& target_var = m.registry.variable_of(e->target);
    outc.push_back(target_var.term_count());
    std::size_t authored = 0;
    for (const auto& r : base_of(m, e->kind).rules)
      for (const auto& c : r.consequents)
        if (m.registry.id_of_variable(c.variable) == e->target) ++authored;
    const std::uint64_t space = count_rule_space(in, outc), sk = skeletons(in, outc);
    out << to_string(e->kind) << ' ' << e->target << ' ' << target_var.name() << ": inputs " << join_counts(in)
        << " outputs " << join_counts(outc) << " rule space " << space << ", and-only skeletons " << sk
        << ", authored " << authored << '\n';
    space_total[e->kind] += space;
    skeleton_total[e->kind] += sk;
    authored_total[e->kind] += authored;
  }
  for (const auto& [k, v] : space_total)
    out << to_string(k) << " total: rule space " << v << ", and-only skeletons " << skeleton_total[k] << ", authored "
        << authored_total[k] << '\n';
  return kOk;
}

int cmd_rules_enumerate(const Options& o, std::ostream& out) {
  const Scenario sc = load(o);
  const auto& m = sc.model;
  int n = 0;
  for (const RelationEdge* e : selected_edges(o, m)) {
    std::vector<const LinguisticVariable*> in;
    for (const auto& s : e->sources) in.push_back(&m.registry.variable_of(s));
    out << "# " << to_string(e->kind) << ' ' << e->target << '\n';
    for (const Rule& r : enumerate_rules(in, {&m.registry.variable_of(e->target)}))
      out << ++n << ". " << format_rule(r) << '\n';
  }
  return kOk;
}

int cmd_rules_check(const Options& o, std::ostream& out) {
  const Scenario sc = load(o);
  std::size_t conflicts = 0;
  for (const RuleBase* rb : {&sc.model.upd, &sc.model.ena, &sc.model.cor}) {
    const ConflictReport r = detect_conflicts(*rb);
    const std::string k = to_string(rb->kind);
    for (const auto& c : r.conflicts)
      out << k << " conflict: rules " << c.first + 1 << " and " << c.second + 1 << '\n';
    for (const auto& d : r.duplicates)
      out << k << " duplicate: rules " << d.first + 1 << " and " << d.second + 1 << '\n';
    out << k << ": " << rb->rules.size() << " rules, " << r.conflicts.size() << " conflicts, " << r.duplicates.size()
        << " duplicates\n";
    conflicts += r.conflicts.size();
  }
  return conflicts == 0 ? kOk : kDomainError;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fuzzy feedforward-feedback adaptation simulator", "adaptctl"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("-s,--scenario", o.scenario, "scenario JSON file")->envname("ADAPTCTL_SCENARIO");

  auto* validate = app.add_subcommand("validate", "run every validator over the scenario");

  auto* fz = app.add_subcommand("fuzzify", "membership degrees of one crisp value");
  fz->add_option("--var", o.var, "variable name")->required();
  fz->add_option("--value", o.value, "crisp value")->required();

  auto* inf = app.add_subcommand("infer", "one full adaptation step");
  inf->add_option("--context", o.context, "context readings, e.g. ac1=450,ac2=10,ac3=900,ac4=300")->required();
  inf->add_option("--xi", o.xi, "deviation threshold")->check(CLI::PositiveNumber);

  auto* sim = app.add_subcommand("simulate", "run the scenario trajectories through the loop");
  sim->add_option("--steps", o.steps, "time steps (default from scenario)")->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.seed, "noise seed (default from scenario)");
  sim->add_option("--seeds", o.seeds, "seed range a..b, run in parallel, one subdirectory per seed");
  sim->add_option("--out", o.out_dir, "output directory")->capture_default_str();
  sim->add_option("--xi", o.xi, "deviation threshold (default from scenario)")->check(CLI::PositiveNumber);

  auto* rules = app.add_subcommand("rules", "rule-space size, skeletons and conflicts");
  rules->require_subcommand(1);
  auto add_selection = [&](CLI::App* c) {
    c->add_option("--kind", o.kind, "UPD, ENA or COR");
    c->add_option("--target", o.target, "edge target id");
  };
  auto* count = rules->add_subcommand("count", "rule-space formula and AND-only skeleton count per edge");
  add_selection(count);
  count->add_option("--inputs", o.inputs, "input term counts (no scenario needed)")->delimiter(',');
  count->add_option("--outputs", o.outputs, "output term counts")->delimiter(',');
  auto* enumerate = rules->add_subcommand("enumerate", "AND-only rule skeletons in DSL form");
  add_selection(enumerate);
  auto* check = rules->add_subcommand("check", "conflicting and duplicate rules");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageOrIo;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (fz->parsed()) return cmd_fuzzify(o, out, err);
    if (inf->parsed()) return cmd_infer(o, out);
    if (sim->parsed()) return cmd_simulate(o, *sim, out);
    if (count->parsed()) return cmd_rules_count(o, out);
    if (enumerate->parsed()) return cmd_rules_enumerate(o, out);
    if (check->parsed()) return cmd_rules_check(o, out);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageOrIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIo;
  } catch (const ScenarioFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIo;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageOrIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageOrIo;
}

}  // namespace adaptctl
