#include "fuzzyadapt/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

#include "fuzzyadapt/error.hpp"
#include "fuzzyadapt/format.hpp"

namespace fuzzyadapt {

std::string to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Context: return "context";
    case ElementKind::Softgoal: return "softgoal";
    case ElementKind::ParametricTask: return "parametric task";
    case ElementKind::AlternativeGroup: return "alternative group";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Registry

void Registry::claim(const std::string& id, const std::string& variable_name, ElementKind kind, std::size_t index) {
  if (id.empty()) throw ValidationError("element id must be nonempty");
  if (by_id_.count(id)) throw ValidationError("duplicate element id '" + id + "'");
  if (id_by_variable_.count(variable_name))
    throw ValidationError("variable name '" + variable_name + "' is used by more than one element");
  by_id_.emplace(id, std::make_pair(kind, index));
  id_by_variable_.emplace(variable_name, id);
}

void Registry::add(AtomicContext context) {
  claim(context.id, context.variable.name(), ElementKind::Context, contexts_.size());
  contexts_.push_back(std::move(context));
}

void Registry::add(Softgoal softgoal) {
  claim(softgoal.id, softgoal.variable.name(), ElementKind::Softgoal, softgoals_.size());
  softgoals_.push_back(std::move(softgoal));
}

void Registry::add(ParametricTask task) {
  claim(task.id, task.variable.name(), ElementKind::ParametricTask, tasks_.size());
  tasks_.push_back(std::move(task));
}

void Registry::add(AlternativeTaskGroup group) {
  claim(group.id, group.indicator.name(), ElementKind::AlternativeGroup, groups_.size());
  groups_.push_back(std::move(group));
}

void Registry::add_alias(const std::string& alias, const std::string& variable_name) {
  auto it = id_by_variable_.find(variable_name);
  if (it == id_by_variable_.end()) throw ValidationError("alias target '" + variable_name + "' is not a variable");
  if (id_by_variable_.count(alias)) throw ValidationError("alias '" + alias + "' is already a variable name");
  id_by_variable_.emplace(alias, it->second);
}

std::vector<std::string> Registry::task_ids() const {
  std::vector<std::string> ids;
  for (const auto& t : tasks_) ids.push_back(t.id);
  for (const auto& g : groups_) ids.push_back(g.id);
  return ids;
}

std::optional<ElementKind> Registry::kind_of(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) return std::nullopt;
  return it->second.first;
}

bool Registry::is_task(const std::string& id) const {
  auto k = kind_of(id);
  return k == ElementKind::ParametricTask || k == ElementKind::AlternativeGroup;
}

const LinguisticVariable& Registry::variable_of(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end()) throw ValidationError("unknown element id '" + id + "'");
  const auto [kind, index] = it->second;
  switch (kind) {
    case ElementKind::Context: return contexts_[index].variable;
    case ElementKind::Softgoal: return softgoals_[index].variable;
    case ElementKind::ParametricTask: return tasks_[index].variable;
    case ElementKind::AlternativeGroup: return groups_[index].indicator;
  }
  throw ValidationError("unknown element id '" + id + "'");
}

const LinguisticVariable* Registry::find_variable(const std::string& name) const {
  auto id = id_of_variable(name);
  return id ? &variable_of(*id) : nullptr;
}

std::optional<std::string> Registry::id_of_variable(const std::string& name) const {
  auto it = id_by_variable_.find(name);
  if (it == id_by_variable_.end()) return std::nullopt;
  return it->second;
}

const Softgoal& Registry::softgoal(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end() || it->second.first != ElementKind::Softgoal)
    throw ValidationError("unknown softgoal id '" + id + "'");
  return softgoals_[it->second.second];
}

const ParametricTask* Registry::parametric_task(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end() || it->second.first != ElementKind::ParametricTask) return nullptr;
  return &tasks_[it->second.second];
}

const AlternativeTaskGroup* Registry::group(const std::string& id) const {
  auto it = by_id_.find(id);
  if (it == by_id_.end() || it->second.first != ElementKind::AlternativeGroup) return nullptr;
  return &groups_[it->second.second];
}

UniverseInterval Registry::search_range(const std::string& task_id) const {
  if (const auto* t = parametric_task(task_id)) return t->adjustable_range;
  if (const auto* g = group(task_id)) return g->indicator.universe();
  throw ValidationError("unknown task id '" + task_id + "'");
}

// ---------------------------------------------------------------------------
// Element validation

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Edge lengths of a piecewise-linear shape, left to right.
std::optional<std::vector<double>> edges_of(const MembershipShape& s) {
  if (const auto* t = std::get_if<Triangular>(&s)) return std::vector<double>{t->b - t->a, t->c - t->b};
  if (const auto* t = std::get_if<Trapezoidal>(&s)) return std::vector<double>{t->b - t->a, t->c - t->b, t->d - t->c};
  return std::nullopt;
}

}  // namespace

bool congruent(const MembershipFunction& lhs, const MembershipFunction& rhs, double tol) {
  if (lhs.shape().index() != rhs.shape().index()) return false;
  if (const auto* l = std::get_if<GeneralizedBell>(&lhs.shape())) {
    const auto& r = std::get<GeneralizedBell>(rhs.shape());
    return near(l->width, r.width, tol) && near(l->slope, r.slope, tol);
  }
  auto le = *edges_of(lhs.shape());
  auto re = *edges_of(rhs.shape());
  auto same = [&](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!near(a[i], b[i], tol)) return false;
    return true;
  };
  if (same(le, re)) return true;
  std::reverse(re.begin(), re.end());
  return same(le, re);
}

ValidationReport validate_registry(const Registry& registry) {
  ValidationReport report;
  for (const auto& c : registry.contexts()) report.merge(validate_variable(c.variable));

  for (const auto& sg : registry.softgoals()) {
    report.merge(validate_variable(sg.variable));
    const auto& u = sg.variable.universe();
    if (u.lo() != 0.0 || u.hi() != 1.0)
      report.error("softgoal-universe", "softgoal '" + sg.id + "' must use the satisfaction universe [0, 1]");
    if (!(sg.weight >= 0.0) || !std::isfinite(sg.weight))
      report.error("softgoal-weight", "softgoal '" + sg.id + "' has invalid weight " + fmt_real(sg.weight));
  }

  for (const auto& t : registry.parametric_tasks()) {
    report.merge(validate_variable(t.variable));
    if (!t.variable.universe().contains(t.adjustable_range))
      report.error("adjustable-range", "task '" + t.id + "' adjustable range [" + fmt_real(t.adjustable_range.lo()) +
                                           ", " + fmt_real(t.adjustable_range.hi()) + "] leaves its universe");
  }

  for (const auto& g : registry.groups()) {
    report.merge(validate_variable(g.indicator));
    if (g.alternatives.empty()) report.error("alternatives", "group '" + g.id + "' has no alternatives");
    std::set<std::string> names;
    const MembershipFunction* first_mf = nullptr;
    for (const auto& alt : g.alternatives) {
      if (!names.insert(alt.name).second)
        report.error("alternative-duplicate", "group '" + g.id + "' repeats alternative '" + alt.name + "'");
      if (!g.indicator.universe().contains(alt.window))
        report.error("alternative-window", "window of '" + alt.name + "' leaves the indicator universe");
      if (alt.anchor != alt.window.lo() && alt.anchor != alt.window.hi())
        report.error("alternative-anchor", "anchor of '" + alt.name + "' is not a window boundary");
      auto idx = g.indicator.term_index(alt.name);
      if (!idx) {
        report.error("alternative-term", "alternative '" + alt.name + "' has no indicator term in group '" + g.id + "'");
        continue;
      }
      const auto& mf = g.indicator.terms()[*idx].mf;
      if (!first_mf)
        first_mf = &mf;
      else if (!congruent(*first_mf, mf))
        report.error("alternative-congruence", "alternative MFs of group '" + g.id + "' are not congruent");
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Structural choice

AlternativeChoice indicator_to_choice(const AlternativeTaskGroup& group, double ind) {
  if (std::isnan(ind)) throw ValidationError("indicator of group '" + group.id + "' is NaN");
  const double x = group.indicator.universe().clamp(ind);
  for (std::size_t i = 0; i < group.alternatives.size(); ++i) {
    const auto& alt = group.alternatives[i];
    if (!alt.window.contains(x)) continue;
    AlternativeChoice choice;
    choice.index = i;
    choice.name = alt.name;
    choice.duration = std::abs(x - alt.anchor);
    auto term = group.indicator.term_index(alt.name);
    choice.degree = term ? group.indicator.terms()[*term].mf(x) : 0.0;
    return choice;
  }
  throw ValidationError("indicator " + fmt_real(x) + " of group '" + group.id + "' lies in no alternative window");
}

// ---------------------------------------------------------------------------
// Goal graph

const GoalNode* GoalGraph::node(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

bool GoalGraph::contributes(const std::string& task, const std::string& softgoal) const {
  return std::any_of(contributions.begin(), contributions.end(),
                     [&](const Contribution& c) { return c.task == task && c.softgoal == softgoal; });
}

bool GoalGraph::is_leaf(const std::string& id) const {
  return std::none_of(decompositions.begin(), decompositions.end(),
                      [&](const Decomposition& d) { return d.parent == id; });
}

namespace {

// Post-order over the decomposition DAG; throws on a back edge.
std::vector<std::string> topological_order(const GoalGraph& graph) {
  std::map<std::string, std::vector<std::string>> children;
  for (const auto& d : graph.decompositions)
    for (const auto& c : d.children) children[d.parent].push_back(c);

  enum class Mark { None, Active, Done };
  std::map<std::string, Mark> mark;
  std::vector<std::string> order;
  std::function<void(const std::string&)> visit = [&](const std::string& id) {
    auto& m = mark[id];
    if (m == Mark::Done) return;
    if (m == Mark::Active) throw ValidationError("goal decomposition cycle through '" + id + "'");
    m = Mark::Active;
    for (const auto& c : children[id]) visit(c);
    mark[id] = Mark::Done;
    order.push_back(id);
  };
  for (const auto& n : graph.nodes) visit(n.id);
  for (const auto& d : graph.decompositions) visit(d.parent);
  return order;
}

}  // namespace

ValidationReport validate_graph(const GoalGraph& graph) {
  ValidationReport report;
  std::set<std::string> ids;
  for (const auto& n : graph.nodes)
    if (!ids.insert(n.id).second) report.error("graph-duplicate", "goal graph repeats node '" + n.id + "'");

  for (const auto& d : graph.decompositions) {
    if (!graph.node(d.parent)) report.error("graph-unknown", "decomposition parent '" + d.parent + "' is not a node");
    if (d.children.empty()) report.error("graph-decomposition", "decomposition of '" + d.parent + "' has no children");
    for (const auto& c : d.children)
      if (!graph.node(c)) report.error("graph-unknown", "decomposition child '" + c + "' is not a node");
  }
  try {
    topological_order(graph);
  } catch (const ValidationError& e) {
    report.error("graph-cycle", e.what());
  }
  for (const auto& c : graph.contributions) {
    const auto* t = graph.node(c.task);
    const auto* s = graph.node(c.softgoal);
    if (!t || t->kind != NodeKind::Task)
      report.error("graph-contribution", "contribution source '" + c.task + "' is not a task");
    if (!s || s->kind != NodeKind::Softgoal)
      report.error("graph-contribution", "contribution target '" + c.softgoal + "' is not a softgoal");
  }
  return report;
}

std::map<std::string, bool> goal_satisfaction(const GoalGraph& graph, const std::set<std::string>& achieved) {
  for (const auto& id : achieved) {
    if (!graph.node(id)) throw ValidationError("achieved element '" + id + "' is not in the goal graph");
    if (!graph.is_leaf(id)) throw ValidationError("achieved element '" + id + "' is not a leaf");
  }
  std::map<std::string, bool> satisfied;
  for (const auto& id : topological_order(graph)) {
    bool value = achieved.count(id) > 0;
    for (const auto& d : graph.decompositions) {
      if (d.parent != id) continue;
      auto child_ok = [&](const std::string& c) { return satisfied[c]; };
      value = d.type == DecompositionType::And ? std::all_of(d.children.begin(), d.children.end(), child_ok)
                                               : std::any_of(d.children.begin(), d.children.end(), child_ok);
    }
    satisfied[id] = value;
  }
  return satisfied;
}

// ---------------------------------------------------------------------------
// Relation topology

std::string to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::Upd: return "UPD";
    case RelationKind::Ena: return "ENA";
    case RelationKind::Cor: return "COR";
  }
  return "?";
}

std::optional<RelationKind> parse_relation_kind(const std::string& text) {
  std::string upper;
  for (char c : text) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (upper == "UPD") return RelationKind::Upd;
  if (upper == "ENA") return RelationKind::Ena;
  if (upper == "COR") return RelationKind::Cor;
  return std::nullopt;
}

namespace {

std::string describe(const RelationEdge& e) {
  std::string s = to_string(e.kind) + " {";
  for (std::size_t i = 0; i < e.sources.size(); ++i) s += (i ? ", " : "") + e.sources[i];
  return s + "} -> " + e.target;
}

}  // namespace

ValidationReport validate_topology(const GoalGraph& graph, const std::vector<RelationEdge>& edges,
                                   const Registry& registry) {
  ValidationReport report;
  auto resolve = [&](const std::string& id) {
    auto kind = registry.kind_of(id);
    if (!kind) throw ValidationError("relation edge references unknown id '" + id + "'");
    return *kind;
  };

  std::set<std::string> upd_targets;
  std::set<std::string> ena_targets;
  for (const auto& e : edges) {
    const ElementKind target = resolve(e.target);
    std::vector<ElementKind> sources;
    for (const auto& s : e.sources) sources.push_back(resolve(s));

    if (e.sources.empty()) report.error("edge-kind", describe(e) + ": edge has no sources");

    const bool task_target = target == ElementKind::ParametricTask || target == ElementKind::AlternativeGroup;
    auto all_sources = [&](auto pred) { return std::all_of(sources.begin(), sources.end(), pred); };
    auto is_context = [](ElementKind k) { return k == ElementKind::Context; };
    auto is_task = [](ElementKind k) { return k == ElementKind::ParametricTask || k == ElementKind::AlternativeGroup; };

    switch (e.kind) {
      case RelationKind::Upd:
        if (!all_sources(is_context) || target != ElementKind::Softgoal)
          report.error("edge-kind", describe(e) + ": UPD must link atomic contexts to a softgoal");
        upd_targets.insert(e.target);
        break;
      case RelationKind::Ena:
        if (!all_sources(is_context) || !task_target)
          report.error("edge-kind", describe(e) + ": ENA must link atomic contexts to a task");
        ena_targets.insert(e.target);
        break;
      case RelationKind::Cor:
        if (!all_sources(is_task) || target != ElementKind::Softgoal) {
          report.error("edge-kind", describe(e) + ": COR must link tasks to a softgoal");
          break;
        }
        for (const auto& s : e.sources) {
          bool linked = graph.contributes(s, e.target);
          if (const auto* g = registry.group(s))
            for (const auto& alt : g->alternatives) linked = linked || graph.contributes(alt.task_id, e.target);
          if (!linked)
            report.error("edge-contribution",
                         describe(e) + ": no goal-graph contribution from '" + s + "' to '" + e.target + "'");
        }
        break;
    }
  }

  for (const auto& sg : registry.softgoals())
    if (!upd_targets.count(sg.id)) report.warning("missing-upd", "softgoal '" + sg.id + "' has no incoming UPD edge");
  for (const auto& id : registry.task_ids())
    if (!ena_targets.count(id)) report.warning("missing-ena", "task '" + id + "' has no incoming ENA edge");
  return report;
}

}  // namespace fuzzyadapt
