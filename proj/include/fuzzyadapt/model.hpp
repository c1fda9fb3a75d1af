#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fuzzyadapt/linguistic.hpp"
#include "fuzzyadapt/report.hpp"

namespace fuzzyadapt {

// ---------------------------------------------------------------------------
// Requirements and context elements
// ---------------------------------------------------------------------------

/// A directly monitored environmental quantity.
struct AtomicContext {
  std::string id;
  LinguisticVariable variable;
};

/// A non-functional requirement whose satisfaction degree lives on [0, 1].
struct Softgoal {
  std::string id;
  LinguisticVariable variable;
  double weight = 0.0;
};

/// A task with a tunable parameter; readaptation may move it inside adjustable_range.
struct ParametricTask {
  std::string id;
  LinguisticVariable variable;
  UniverseInterval adjustable_range;
};

struct Alternative {
  std::string name;  // also the indicator term name
  UniverseInterval window;
  double anchor = 0.0;   // window boundary from which invoking time is measured
  std::string task_id;   // goal-graph task realised by this alternative (may be empty)
};

/// OR-alternatives for one goal, encoded as a crisp indicator over adjacent windows.
struct AlternativeTaskGroup {
  std::string id;
  std::string goal_name;
  LinguisticVariable indicator;
  std::vector<Alternative> alternatives;
};

enum class ElementKind { Context, Softgoal, ParametricTask, AlternativeGroup };

std::string to_string(ElementKind kind);

/// Owns every context, softgoal and task, and resolves them by element id or by variable name.
class Registry {
 public:
  void add(AtomicContext context);
  void add(Softgoal softgoal);
  void add(ParametricTask task);
  void add(AlternativeTaskGroup group);
  /// Alternative spelling for a variable name (e.g. "DataSize" for "ReceivedDataSize").
  void add_alias(const std::string& alias, const std::string& variable_name);

  const std::vector<AtomicContext>& contexts() const noexcept { return contexts_; }
  const std::vector<Softgoal>& softgoals() const noexcept { return softgoals_; }
  const std::vector<ParametricTask>& parametric_tasks() const noexcept { return tasks_; }
  const std::vector<AlternativeTaskGroup>& groups() const noexcept { return groups_; }

  /// Parametric task ids followed by alternative group ids, in insertion order.
  std::vector<std::string> task_ids() const;

  std::optional<ElementKind> kind_of(const std::string& id) const;
  bool is_task(const std::string& id) const;

  /// Variable of any element; throws ValidationError naming the id when unknown.
  const LinguisticVariable& variable_of(const std::string& id) const;

  /// Looks up by variable name or alias; nullptr when unknown.
  const LinguisticVariable* find_variable(const std::string& name) const;
  /// Element id owning a variable name (or alias).
  std::optional<std::string> id_of_variable(const std::string& name) const;

  const Softgoal& softgoal(const std::string& id) const;
  const ParametricTask* parametric_task(const std::string& id) const;
  const AlternativeTaskGroup* group(const std::string& id) const;

  /// Range a task's configuration may take during readaptation.
  UniverseInterval search_range(const std::string& task_id) const;

 private:
  void claim(const std::string& id, const std::string& variable_name, ElementKind kind, std::size_t index);

  std::vector<AtomicContext> contexts_;
  std::vector<Softgoal> softgoals_;
  std::vector<ParametricTask> tasks_;
  std::vector<AlternativeTaskGroup> groups_;
  std::map<std::string, std::pair<ElementKind, std::size_t>> by_id_;
  std::map<std::string, std::string> id_by_variable_;
};

/// Checks element-level invariants: softgoal universe [0,1], non-negative weights,
/// adjustable ranges, alternative windows/anchors/congruence, per-variable checks.
ValidationReport validate_registry(const Registry& registry);

/// Alternative MFs are congruent when identical up to translation or reflection.
bool congruent(const MembershipFunction& lhs, const MembershipFunction& rhs, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Structural choice
// ---------------------------------------------------------------------------

struct AlternativeChoice {
  std::size_t index = 0;
  std::string name;
  double duration = 0.0;  // |ind - anchor|
  double degree = 0.0;    // membership of ind in the chosen alternative
};

/// Maps an indicator to the alternative whose window contains it; boundary ties go to the lower index.
AlternativeChoice indicator_to_choice(const AlternativeTaskGroup& group, double ind);

// ---------------------------------------------------------------------------
// Goal graph
// ---------------------------------------------------------------------------

enum class NodeKind { Goal, Task, Softgoal };
enum class DecompositionType { And, Or };

struct GoalNode {
  std::string id;
  NodeKind kind;
  std::string label;
};

struct Decomposition {
  std::string parent;
  std::vector<std::string> children;
  DecompositionType type;
};

struct Contribution {
  std::string task;
  std::string softgoal;
  bool positive = true;
};

struct GoalGraph {
  std::vector<GoalNode> nodes;
  std::vector<Decomposition> decompositions;
  std::vector<Contribution> contributions;

  const GoalNode* node(const std::string& id) const;
  bool contributes(const std::string& task, const std::string& softgoal) const;
  bool is_leaf(const std::string& id) const;
};

/// Unknown nodes, decomposition cycles, and contributions that do not link a task to a softgoal.
ValidationReport validate_graph(const GoalGraph& graph);

/// Bottom-up AND/OR propagation. Returns a flag for every node of the graph.
/// Throws ValidationError on a cycle or when `achieved` names a non-leaf.
std::map<std::string, bool> goal_satisfaction(const GoalGraph& graph, const std::set<std::string>& achieved);

// ---------------------------------------------------------------------------
// Relation topology
// ---------------------------------------------------------------------------

enum class RelationKind { Upd, Ena, Cor };

std::string to_string(RelationKind kind);
std::optional<RelationKind> parse_relation_kind(const std::string& text);

struct RelationEdge {
  RelationKind kind;
  std::vector<std::string> sources;
  std::string target;
};

/// Kind constraints (UPD: contexts -> softgoal, ENA: contexts -> task, COR: tasks -> softgoal),
/// COR edges lacking a goal-graph contribution, and softgoals/tasks missing UPD/ENA inputs.
/// Throws ValidationError when an edge names an id the registry does not know.
ValidationReport validate_topology(const GoalGraph& graph, const std::vector<RelationEdge>& edges,
                                   const Registry& registry);

}  // namespace fuzzyadapt
