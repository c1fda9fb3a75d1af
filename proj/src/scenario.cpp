#include "fuzzyadapt/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fuzzyadapt/error.hpp"

namespace fuzzyadapt {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Typed field access with the JSON path in the error message.
const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ScenarioFormatError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ScenarioFormatError(where + ": expected a number");
  return j.get<double>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw ScenarioFormatError(where + ": expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ScenarioFormatError(where + ": expected an array");
  return j;
}

std::vector<std::string> strings(const json& j, const std::string& where) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < array(j, where).size(); ++i)
    out.push_back(text(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

UniverseInterval interval(const json& j, const std::string& where, const std::string& unit = {}) {
  if (!j.is_array() || j.size() != 2) throw ScenarioFormatError(where + ": expected [lo, hi]");
  return UniverseInterval(number(j[0], where + "[0]"), number(j[1], where + "[1]"), unit);
}

MembershipFunction membership(const json& j, const UniverseInterval& universe, std::size_t index, std::size_t count,
                              const std::string& where) {
  const std::string type = text(field(j, "type", where), where + ".type");
  std::vector<double> p;
  if (j.contains("params"))
    for (std::size_t i = 0; i < array(j["params"], where + ".params").size(); ++i)
      p.push_back(number(j["params"][i], where + ".params[" + std::to_string(i) + "]"));
  auto need = [&](std::size_t n) {
    if (p.size() != n)
      throw ScenarioFormatError(where + ": " + type + " MF takes " + std::to_string(n) + " params");
  };
  if (type == "triangular") {
    need(3);
    return MembershipFunction::triangular(p[0], p[1], p[2]);
  }
  if (type == "trapezoidal") {
    need(4);
    return MembershipFunction::trapezoidal(p[0], p[1], p[2], p[3]);
  }
  if (type == "bell") {
    if (!j.contains("params")) {
      const double slope = j.contains("slope") ? number(j["slope"], where + ".slope") : 2.0;
      return MembershipFunction(fit_bell(universe, index, count, slope));
    }
    need(3);
    return MembershipFunction::bell(p[0], p[1], p[2]);
  }
  throw ScenarioFormatError(where + ": unknown MF type '" + type + "'");
}

LinguisticVariable variable(const json& j, const std::string& where) {
  const std::string name = text(field(j, "name", where), where + ".name");
  const std::string unit = j.contains("unit") ? text(j["unit"], where + ".unit") : std::string{};
  const UniverseInterval universe = interval(field(j, "universe", where), where + ".universe", unit);
  const json& terms = array(field(j, "terms", where), where + ".terms");
  std::vector<LinguisticTerm> out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const std::string tw = where + ".terms[" + std::to_string(i) + "]";
    out.push_back({text(field(terms[i], "name", tw), tw + ".name"),
                   membership(field(terms[i], "mf", tw), universe, i, terms.size(), tw + ".mf")});
  }
  return LinguisticVariable(name, universe, std::move(out));
}

template <typename Fn>
void each(const json& parent, const char* key, const std::string& where, Fn&& fn) {
  if (!parent.contains(key)) return;
  const std::string w = where + "." + key;
  const json& arr = array(parent[key], w);
  for (std::size_t i = 0; i < arr.size(); ++i) fn(arr[i], w + "[" + std::to_string(i) + "]");
}

std::vector<std::string> aliases(const json& j, const std::string& where) {
  return j.contains("aliases") ? strings(j["aliases"], where + ".aliases") : std::vector<std::string>{};
}

Registry registry_from(const json& vars, const json& weights_json) {
  Registry reg;
  std::vector<std::pair<std::string, std::string>> alias_list;
  const std::string w = "variables";

  each(vars, "contexts", w, [&](const json& j, const std::string& at) {
    reg.add(AtomicContext{text(field(j, "id", at), at + ".id"), variable(j, at)});
    for (auto& a : aliases(j, at)) alias_list.emplace_back(a, text(j["name"], at));
  });

  std::vector<json> softgoals;
  each(vars, "softgoals", w, [&](const json& j, const std::string&) { softgoals.push_back(j); });
  const bool weighted = weights_json.is_object() && !weights_json.empty();
  for (std::size_t i = 0; i < softgoals.size(); ++i) {
    const json& j = softgoals[i];
    const std::string at = w + ".softgoals[" + std::to_string(i) + "]";
    const std::string id = text(field(j, "id", at), at + ".id");
    double weight = 1.0 / static_cast<double>(softgoals.size());
    if (weighted) weight = number(field(weights_json, id.c_str(), "weights"), "weights." + id);
    reg.add(Softgoal{id, variable(j, at), weight});
    for (auto& a : aliases(j, at)) alias_list.emplace_back(a, text(j["name"], at));
  }

  each(vars, "tasks", w, [&](const json& j, const std::string& at) {
    LinguisticVariable var = variable(j, at);
    UniverseInterval range = j.contains("adjustable") ? interval(j["adjustable"], at + ".adjustable", var.universe().unit())
                                                      : var.universe();
    reg.add(ParametricTask{text(field(j, "id", at), at + ".id"), std::move(var), std::move(range)});
    for (auto& a : aliases(j, at)) alias_list.emplace_back(a, text(j["name"], at));
  });

  each(vars, "alternative_groups", w, [&](const json& j, const std::string& at) {
    AlternativeTaskGroup g{text(field(j, "id", at), at + ".id"), text(field(j, "goal", at), at + ".goal"),
                           variable(j, at), {}};
    each(j, "alternatives", at, [&](const json& a, const std::string& aw) {
      const UniverseInterval window = interval(field(a, "window", aw), aw + ".window");
      // Default anchor: the window boundary nearest zero.
      double anchor = std::abs(window.lo()) <= std::abs(window.hi()) ? window.lo() : window.hi();
      if (a.contains("anchor")) anchor = number(a["anchor"], aw + ".anchor");
      g.alternatives.push_back({text(field(a, "name", aw), aw + ".name"), window, anchor,
                                a.contains("task") ? text(a["task"], aw + ".task") : std::string{}});
    });
    reg.add(std::move(g));
    for (auto& a : aliases(j, at)) alias_list.emplace_back(a, text(j["name"], at));
  });

  for (const auto& [alias, name] : alias_list) reg.add_alias(alias, name);
  return reg;
}

GoalGraph graph_from(const json& j) {
  GoalGraph g;
  each(j, "nodes", "graph", [&](const json& n, const std::string& at) {
    const std::string kind = text(field(n, "kind", at), at + ".kind");
    NodeKind k;
    if (kind == "goal") k = NodeKind::Goal;
    else if (kind == "task") k = NodeKind::Task;
    else if (kind == "softgoal") k = NodeKind::Softgoal;
    else throw ScenarioFormatError(at + ".kind: expected goal, task or softgoal");
    g.nodes.push_back({text(field(n, "id", at), at + ".id"), k,
                       n.contains("label") ? text(n["label"], at + ".label") : std::string{}});
  });
  each(j, "decompositions", "graph", [&](const json& d, const std::string& at) {
    const std::string type = text(field(d, "type", at), at + ".type");
    if (type != "AND" && type != "OR") throw ScenarioFormatError(at + ".type: expected AND or OR");
    g.decompositions.push_back({text(field(d, "parent", at), at + ".parent"),
                                strings(field(d, "children", at), at + ".children"),
                                type == "AND" ? DecompositionType::And : DecompositionType::Or});
  });
  each(j, "contributions", "graph", [&](const json& c, const std::string& at) {
    const std::string sign = c.contains("sign") ? text(c["sign"], at + ".sign") : "positive";
    if (sign != "positive" && sign != "negative") throw ScenarioFormatError(at + ".sign: expected positive or negative");
    g.contributions.push_back(
        {text(field(c, "task", at), at + ".task"), text(field(c, "softgoal", at), at + ".softgoal"), sign == "positive"});
  });
  return g;
}

ReadaptationSettings settings_from(const json& j) {
  ReadaptationSettings s;
  if (!j.is_object()) return s;
  const std::string at = "readaptation";
  if (j.contains("mode")) {
    const std::string mode = text(j["mode"], at + ".mode");
    if (mode == "total") s.mode = TriggerMode::Total;
    else if (mode == "individual") s.mode = TriggerMode::Individual;
    else throw ScenarioFormatError(at + ".mode: expected total or individual");
  }
  if (j.contains("xi")) s.xi = number(j["xi"], at + ".xi");
  if (j.contains("max_iterations")) s.max_iterations = static_cast<int>(number(j["max_iterations"], at));
  if (j.contains("initial_scale")) s.initial_scale = number(j["initial_scale"], at + ".initial_scale");
  if (j.contains("tolerance")) s.tolerance = number(j["tolerance"], at + ".tolerance");
  if (j.contains("restarts")) s.restarts = static_cast<int>(number(j["restarts"], at + ".restarts"));
  if (j.contains("probe_levels")) s.probe_levels = static_cast<int>(number(j["probe_levels"], at + ".probe_levels"));
  return s;
}

TrajectorySpec trajectories_from(const json& j) {
  TrajectorySpec spec;
  if (!j.is_object()) return spec;
  if (j.contains("steps")) spec.steps = static_cast<int>(number(j["steps"], "trajectories.steps"));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ScenarioFormatError("trajectories.seed: expected an unsigned integer");
    spec.seed = j["seed"].get<std::uint64_t>();
  }
  each(j, "signals", "trajectories", [&](const json& s, const std::string& at) {
    ContextSignal sig;
    sig.context_id = text(field(s, "context", at), at + ".context");
    sig.sigma = s.contains("sigma") ? number(s["sigma"], at + ".sigma") : 0.0;
    each(s, "anchors", at, [&](const json& a, const std::string& aw) {
      if (!a.is_array() || a.size() != 2) throw ScenarioFormatError(aw + ": expected [t, value]");
      sig.anchors.emplace_back(number(a[0], aw + "[0]"), number(a[1], aw + "[1]"));
    });
    spec.signals.push_back(std::move(sig));
  });
  return spec;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scenario parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ScenarioFormatError(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ScenarioFormatError("scenario must be a JSON object");

  Scenario sc;
  sc.name = doc.contains("name") ? text(doc["name"], "name") : std::string("scenario");
  const json weights = doc.contains("weights") ? doc["weights"] : json::object();
  sc.model.registry = registry_from(field(doc, "variables", "scenario"), weights);
  if (doc.contains("graph")) sc.model.graph = graph_from(doc["graph"]);

  each(doc, "edges", "scenario", [&](const json& e, const std::string& at) {
    auto kind = parse_relation_kind(text(field(e, "kind", at), at + ".kind"));
    if (!kind) throw ScenarioFormatError(at + ".kind: expected UPD, ENA or COR");
    sc.model.edges.push_back({*kind, strings(field(e, "sources", at), at + ".sources"),
                              text(field(e, "target", at), at + ".target")});
  });

  if (doc.contains("inference") && doc["inference"].contains("no_rule_fired")) {
    const std::string policy = text(doc["inference"]["no_rule_fired"], "inference.no_rule_fired");
    if (policy == "error") sc.model.fallback = NoRuleFiredPolicy::Error;
    else if (policy == "hold") sc.model.fallback = NoRuleFiredPolicy::HoldPrevious;
    else if (policy == "midpoint") sc.model.fallback = NoRuleFiredPolicy::Midpoint;
    else throw ScenarioFormatError("inference.no_rule_fired: expected error, hold or midpoint");
  }

  sc.settings = settings_from(doc.contains("readaptation") ? doc["readaptation"] : json());
  sc.trajectories = trajectories_from(doc.contains("trajectories") ? doc["trajectories"] : json());

  std::string digest_input = json_text;
  const json& rules = field(doc, "rules", "scenario");
  if (rules.contains("on_conflict")) {
    const std::string policy = text(rules["on_conflict"], "rules.on_conflict");
    if (policy != "error" && policy != "warning") throw ScenarioFormatError("rules.on_conflict: expected error or warning");
    sc.conflicts_are_errors = policy == "error";
  }
  for (auto [key, kind] : {std::pair{"upd", RelationKind::Upd}, std::pair{"ena", RelationKind::Ena},
                           std::pair{"cor", RelationKind::Cor}}) {
    const std::filesystem::path file = base_dir / text(field(rules, key, "rules"), std::string("rules.") + key);
    const std::string body = read_file(file);
    digest_input += body;
    RuleBase rb;
    try {
      rb = parse_rule_text(body, kind, sc.model.registry);
    } catch (const ParseError& e) {
      throw ParseError(file.filename().string() + ": " + e.what(), e.line(), e.column());
    }
    (kind == RelationKind::Upd ? sc.model.upd : kind == RelationKind::Ena ? sc.model.ena : sc.model.cor) = std::move(rb);
  }
  sc.digest = fnv1a_hex(digest_input);
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  Scenario sc = parse_scenario(read_file(path), path.parent_path());
  sc.path = path;
  return sc;
}

ValidationReport validate_scenario(const Scenario& sc) {
  ValidationReport report;
  const auto& m = sc.model;
  report.merge(validate_registry(m.registry));
  report.merge(validate_graph(m.graph));
  try {
    report.merge(validate_topology(m.graph, m.edges, m.registry));
  } catch (const ValidationError& e) {
    report.error("edge-unresolved", e.what());
    return report;
  }
  for (const RuleBase* rb : {&m.upd, &m.ena, &m.cor}) {
    report.merge(validate_rule_base(*rb, m.registry));
    const ConflictReport conflicts = detect_conflicts(*rb);
    for (const auto& c : conflicts.conflicts) {
      const std::string msg = to_string(rb->kind) + " rules " + std::to_string(c.first + 1) + " and " +
                              std::to_string(c.second + 1) + " share an antecedent but conclude different terms";
      if (sc.conflicts_are_errors)
        report.error("rule-conflict", msg);
      else
        report.warning("rule-conflict", msg);
    }
    for (const auto& d : conflicts.duplicates)
      report.warning("rule-duplicate", to_string(rb->kind) + " rules " + std::to_string(d.first + 1) + " and " +
                                           std::to_string(d.second + 1) + " are identical");
  }
  report.merge(validate_rules_against_edges(m));
  try {
    check_settings(sc.settings);
  } catch (const ValidationError& e) {
    report.error("settings", e.what());
  }
  try {
    validate_trajectory_spec(sc.trajectories, m.registry);
  } catch (const ValidationError& e) {
    report.error("trajectory", e.what());
  }
  return report;
}

}  // namespace fuzzyadapt
