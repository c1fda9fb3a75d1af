#include <random>

#include "doctest.h"
#include "fuzzyadapt/error.hpp"
#include "fuzzyadapt/model.hpp"
#include "support.hpp"

using namespace fuzzyadapt;
using doctest::Approx;

namespace {

const AlternativeTaskGroup& locating() { return *testing::bundled().model.registry.group("t12"); }

GoalGraph small_graph() {
  GoalGraph g;
  g.nodes = {{"root", NodeKind::Goal, ""}, {"g1", NodeKind::Goal, ""}, {"g2", NodeKind::Goal, ""},
             {"t1", NodeKind::Task, ""},   {"t2", NodeKind::Task, ""},  {"t3", NodeKind::Task, ""},
             {"t4", NodeKind::Task, ""},   {"sg", NodeKind::Softgoal, ""}};
  g.decompositions = {{"root", {"g1", "g2"}, DecompositionType::And},
                      {"g1", {"t1", "t2"}, DecompositionType::Or},
                      {"g2", {"t3", "t4"}, DecompositionType::And}};
  g.contributions = {{"t1", "sg", true}};
  return g;
}

}  // namespace

TEST_CASE("indicator to choice: worked values") {
  const auto net = indicator_to_choice(locating(), -7.5);
  CHECK(net.name == "Network");
  CHECK(net.duration == Approx(7.5).epsilon(1e-12));
  CHECK(net.degree == Approx(0.75).epsilon(1e-12));

  const auto gps = indicator_to_choice(locating(), 15);
  CHECK(gps.name == "GPS");
  CHECK(gps.duration == Approx(15).epsilon(1e-12));
  CHECK(gps.degree == Approx(0.5).epsilon(1e-12));

  const auto tie = indicator_to_choice(locating(), 0);
  CHECK(tie.name == "Network");
  CHECK(tie.duration == 0);
  CHECK(tie.degree == 0);
}

TEST_CASE("indicator to choice: properties") {
  const auto& g = locating();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-30, 30);
  for (int i = 0; i < 1000; ++i) {
    const double ind = u(rng);
    const auto c = indicator_to_choice(g, ind);
    const auto& w = g.alternatives[c.index].window;
    CHECK(c.duration >= 0);
    CHECK(c.duration <= w.width());
    if (ind < 0) CHECK(c.name == "Network");
    if (ind > 0) CHECK(c.name == "GPS");
  }
  CHECK_THROWS_AS(indicator_to_choice(g, std::nan("")), ValidationError);
}

TEST_CASE("goal satisfaction") {
  const auto g = small_graph();
  SUBCASE("OR parent satisfied by one child") {
    const auto s = goal_satisfaction(g, {"t1"});
    CHECK(s.at("g1"));
    CHECK_FALSE(s.at("g2"));
    CHECK_FALSE(s.at("root"));
  }
  SUBCASE("AND parent needs every child") {
    CHECK_FALSE(goal_satisfaction(g, {"t3"}).at("g2"));
    CHECK(goal_satisfaction(g, {"t3", "t4"}).at("g2"));
    CHECK(goal_satisfaction(g, {"t2", "t3", "t4"}).at("root"));
  }
  SUBCASE("empty set") {
    for (const auto& [id, ok] : goal_satisfaction(g, {}))
      if (g.node(id)->kind == NodeKind::Goal) CHECK_FALSE(ok);
  }
  SUBCASE("non-leaf in achieved") { CHECK_THROWS_AS(goal_satisfaction(g, {"g1"}), ValidationError); }
  SUBCASE("cycle") {
    auto c = g;
    c.decompositions.push_back({"t1", {"root"}, DecompositionType::And});
    CHECK_THROWS_AS(goal_satisfaction(c, {"t2"}), ValidationError);
    CHECK(validate_graph(c).has("graph-cycle"));
  }
}

TEST_CASE("property: goal satisfaction is monotone") {
  const auto g = small_graph();
  const std::vector<std::string> leaves{"t1", "t2", "t3", "t4"};
  for (unsigned mask = 0; mask < 16; ++mask)
    for (unsigned extra = 0; extra < 16; ++extra) {
      std::set<std::string> a, b;
      for (unsigned i = 0; i < 4; ++i) {
        if (mask & (1u << i)) a.insert(leaves[i]);
        if ((mask | extra) & (1u << i)) b.insert(leaves[i]);
      }
      const auto sa = goal_satisfaction(g, a), sb = goal_satisfaction(g, b);
      for (const auto& [id, ok] : sa)
        if (ok) CHECK(sb.at(id));
    }
}

TEST_CASE("validate_graph") {
  auto g = small_graph();
  CHECK(validate_graph(g).ok());
  g.contributions.push_back({"sg", "t1", true});
  CHECK(validate_graph(g).has("graph-contribution"));
}

TEST_CASE("topology of the bundled scenario") {
  const auto& m = testing::bundled().model;
  const auto r = validate_topology(m.graph, m.edges, m.registry);
  CHECK(r.error_count() == 0);

  SUBCASE("individual edges") {
    const RelationEdge upd{RelationKind::Upd, {"ac1", "ac2", "ac3"}, "sg1"};
    const RelationEdge ena{RelationKind::Ena, {"ac2", "ac3", "ac4"}, "t3"};
    CHECK(validate_topology(m.graph, {upd, ena}, m.registry).error_count() == 0);
  }
  SUBCASE("softgoal as COR source") {
    const RelationEdge bad{RelationKind::Cor, {"sg2", "t3"}, "sg1"};
    CHECK(validate_topology(m.graph, {bad}, m.registry).has("edge-kind"));
  }
  SUBCASE("context as COR source") {
    const RelationEdge bad{RelationKind::Cor, {"ac1"}, "sg1"};
    CHECK(validate_topology(m.graph, {bad}, m.registry).has("edge-kind"));
  }
  SUBCASE("COR edge without a contribution") {
    auto g = m.graph;
    std::erase_if(g.contributions, [](const Contribution& c) { return c.softgoal == "sg3"; });
    CHECK(validate_topology(g, m.edges, m.registry).has("edge-contribution"));
  }
  SUBCASE("missing UPD and ENA inputs are warnings") {
    const auto w = validate_topology(m.graph, {}, m.registry);
    CHECK(w.ok());
    CHECK(w.has("missing-upd"));
    CHECK(w.has("missing-ena"));
  }
  SUBCASE("unresolved id") {
    const RelationEdge bad{RelationKind::Upd, {"ac9"}, "sg1"};
    CHECK_THROWS_WITH_AS(validate_topology(m.graph, {bad}, m.registry), doctest::Contains("ac9"), ValidationError);
  }
}

TEST_CASE("registry lookups") {
  const auto& reg = testing::bundled().model.registry;
  CHECK(reg.kind_of("ac1") == ElementKind::Context);
  CHECK(reg.kind_of("sg2") == ElementKind::Softgoal);
  CHECK(reg.kind_of("t3") == ElementKind::ParametricTask);
  CHECK(reg.kind_of("t12") == ElementKind::AlternativeGroup);
  CHECK_FALSE(reg.kind_of("zz").has_value());
  CHECK(reg.id_of_variable("DataSize") == "t3");
  CHECK(reg.id_of_variable("ReceivedDataSize") == "t3");
  CHECK(reg.find_variable("DataSize") == reg.find_variable("ReceivedDataSize"));
  CHECK(reg.task_ids() == std::vector<std::string>{"t3", "t4", "t12"});
  CHECK_THROWS_AS(reg.variable_of("nope"), ValidationError);
  CHECK(reg.search_range("t12").lo() == -20);
  CHECK(reg.search_range("t4").hi() == 40);
  for (const auto& sg : reg.softgoals()) CHECK(sg.weight == Approx(1.0 / 3.0));
}

TEST_CASE("registry validation") {
  Registry reg;
  reg.add(Softgoal{"sg", testing::three_terms("S", 0, 2), 1.0});
  CHECK(validate_registry(reg).has("softgoal-universe"));
  CHECK_THROWS_AS(reg.add(Softgoal{"sg", testing::three_terms("S2", 0, 1), 1.0}), ValidationError);

  Registry r2;
  r2.add(ParametricTask{"t", testing::three_terms("T", 0, 10), UniverseInterval(5, 20)});
  CHECK(validate_registry(r2).has("adjustable-range"));
}

TEST_CASE("alternative groups") {
  const auto& g = locating();
  CHECK(congruent(g.indicator.terms()[0].mf, g.indicator.terms()[1].mf));
  CHECK(congruent(MembershipFunction::triangular(0, 1, 3), MembershipFunction::triangular(5, 7, 8)));  // reflected
  CHECK_FALSE(congruent(MembershipFunction::triangular(0, 1, 3), MembershipFunction::triangular(0, 1, 2)));

  Registry reg;
  AlternativeTaskGroup bad{"grp",
                           "g",
                           LinguisticVariable("Ind", {-20, 20},
                                              {{"A", MembershipFunction::triangular(-20, -10, 0)},
                                               {"B", MembershipFunction::triangular(0, 5, 20)}}),
                           {{"A", {-20, 0}, 0, ""}, {"B", {0, 20}, 10, ""}, {"A", {-20, 0}, 0, ""}}};
  reg.add(bad);
  const auto r = validate_registry(reg);
  CHECK(r.has("alternative-congruence"));
  CHECK(r.has("alternative-anchor"));
  CHECK(r.has("alternative-duplicate"));
}
