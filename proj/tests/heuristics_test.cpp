#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "sgplan/heuristics.hpp"

using namespace sgplan;

namespace {

SceneGraph fig6() {
  return load_scene(std::string(SGPLAN_TEST_DATA_DIR) + "/fig6_scene.json");
}

// Straight-line scene: n nodes, unit edges, one object at each end.
SceneGraph path_scene(int n) {
  SceneGraph g;
  for (int i = 0; i < n; ++i)
    g.nodes.push_back({static_cast<NodeId>(i), {static_cast<double>(i), 0, 0}, 0});
  for (int i = 0; i + 1 < n; ++i)
    g.edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1), 1.0});
  g.attributes.push_back({1, "left", AttrKind::Object, "", {0}, {0, 0, 0}, {}, {}});
  g.attributes.push_back(
      {2, "right", AttrKind::Object, "", {static_cast<NodeId>(n - 1)},
       {static_cast<double>(n - 1), 0, 0}, {}, {}});
  g.finalize();
  return g;
}

}  // namespace

TEST_CASE("label costs: diagonal, symmetry, brute-force agreement") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("F p11", g.alphabet()));
  HeuristicTable t = HeuristicTable::build(g, dfa);

  // Reference: exhaustive double-min over node pairs.
  std::vector<std::vector<double>> d(g.nodes.size());
  for (size_t s = 0; s < g.nodes.size(); ++s) d[s] = g.dijkstra_from(s);

  for (int l1 = 0; l1 < t.num_labels(); ++l1) {
    CHECK(t.label_cost(l1, l1) == 0);
    for (int l2 = 0; l2 < t.num_labels(); ++l2) {
      CHECK(t.label_cost(l1, l2) == t.label_cost(l2, l1));
      double brute = kInfDist;
      for (size_t s1 = 0; s1 < g.nodes.size(); ++s1) {
        if (t.label_id_of_node(s1) != l1) continue;
        for (size_t s2 = 0; s2 < g.nodes.size(); ++s2)
          if (t.label_id_of_node(s2) == l2) brute = std::min(brute, d[s1][s2]);
      }
      CHECK(t.label_cost(l1, l2) == brute);
    }
  }

  // Lower-bound property over every node pair.
  for (size_t s1 = 0; s1 < g.nodes.size(); ++s1)
    for (size_t s2 = 0; s2 < g.nodes.size(); ++s2)
      CHECK(t.label_cost(t.label_id_of_node(s1), t.label_id_of_node(s2)) <= d[s1][s2]);
}

TEST_CASE("label costs on a two-label path graph") {
  SceneGraph g = path_scene(6);
  Dfa dfa = compile(parse_prefix("F p2", g.alphabet()));
  HeuristicTable t = HeuristicTable::build(g, dfa);

  int left = t.label_id_of_node(g.node_index(0));
  int right = t.label_id_of_node(g.node_index(5));
  CHECK(t.label_cost(left, right) == 5.0);
}

TEST_CASE("g table: boundary condition and Bellman fixed point") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("& F & p2 F & p3 F p11 ! p9", g.alphabet()));
  HeuristicTable t = HeuristicTable::build(g, dfa);

  for (int l = 0; l < t.num_labels(); ++l)
    for (int q = 0; q < dfa.num_states(); ++q) {
      if (dfa.is_accepting(q)) {
        CHECK(t.g_value(l, q) == 0);
        CHECK(t.next_label(l, q) == -1);
        continue;
      }
      // Residual of Eq. 3 must be zero after convergence.
      double best = kInfDist;
      for (int l2 = 0; l2 < t.num_labels(); ++l2) {
        int q2 = dfa.step(q, t.label(l2));
        if (t.label_cost(l, l2) == kInfDist || t.g_value(l2, q2) == kInfDist) continue;
        best = std::min(best, t.label_cost(l, l2) + t.g_value(l2, q2));
      }
      CHECK(t.g_value(l, q) == best);
      if (best < kInfDist) {
        int nl = t.next_label(l, q);
        REQUIRE(nl >= 0);
        CHECK(t.label_cost(l, nl) + t.g_value(nl, dfa.step(q, t.label(nl))) == best);
      }
    }
}

TEST_CASE("g for F p equals the label cost to p") {
  SceneGraph g = path_scene(6);
  Dfa dfa = compile(parse_prefix("F p2", g.alphabet()));
  HeuristicTable t = HeuristicTable::build(g, dfa);
  int plain = t.label_id_of_node(g.node_index(2));  // middle of the corridor
  int right = t.label_id_of_node(g.node_index(5));
  CHECK(t.g_value(plain, dfa.initial) == t.label_cost(plain, right));
}

TEST_CASE("h_LTL: accepting states, nearest-region reduction, consistency") {
  SceneGraph g = fig6();

  SUBCASE("F p with unique node labels: field equals distance to the p-region") {
    // One attribute per node, so c_l degenerates to the exact node metric.
    SceneGraph line;
    for (int i = 0; i < 7; ++i) {
      line.nodes.push_back({static_cast<NodeId>(i), {static_cast<double>(i), 0, 0}, 0});
      line.attributes.push_back({i + 1, "cell", AttrKind::Object, "",
                                 {static_cast<NodeId>(i)},
                                 {static_cast<double>(i), 0, 0}, {}, {}});
    }
    for (int i = 0; i + 1 < 7; ++i)
      line.edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(i + 1), 1.0});
    line.finalize();
    Dfa dfa = compile(parse_prefix("F p7", line.alphabet()));
    HeuristicTable t = HeuristicTable::build(line, dfa);
    for (size_t ni = 0; ni < line.nodes.size(); ++ni)
      CHECK(t.h_ltl(ni, dfa.initial) == static_cast<double>(6 - ni));
  }

  SUBCASE("F p on fig6: field lower-bounds the distance to the p-region") {
    Dfa dfa = compile(parse_prefix("F p11", g.alphabet()));
    HeuristicTable t = HeuristicTable::build(g, dfa);
    for (size_t ni = 0; ni < g.nodes.size(); ++ni) {
      auto [d, hit] = g.shortest_dist(g.nodes[ni].id, g.attribute(11).region);
      CHECK(t.h_ltl(ni, dfa.initial) <= d);
      if (d > 0) CHECK(t.h_ltl(ni, dfa.initial) > 0);
    }
  }

  for (const char* formula :
       {"F p11", "& F & p2 F & p3 F p11 ! p9", "& F p2 F p12", "U ! p9 p3"}) {
    CAPTURE(formula);
    Dfa dfa = compile(parse_prefix(formula, g.alphabet()));
    HeuristicTable t = HeuristicTable::build(g, dfa);
    PlanningDomain dom = build_domain(g, dfa, 0);

    for (int q = 0; q < dfa.num_states(); ++q) {
      if (dfa.is_accepting(q)) {
        for (size_t ni = 0; ni < g.nodes.size(); ++ni) CHECK(t.h_ltl(ni, q) == 0);
        continue;
      }
      // Consistency over every anchor transition (edges and level actions).
      for (size_t ni = 0; ni < g.nodes.size(); ++ni) {
        ProductState x{g.nodes[ni].id, q};
        const double hx = t.h_ltl(ni, q);
        for (const Successor& s : dom.successors(0, x)) {
          const double hy = t.h_ltl(g.node_index(s.state.node), s.state.q);
          if (hy == kInfDist) continue;
          CHECK(hx <= s.cost + hy);
        }
        if (dom.is_goal(x)) CHECK(hx <= t.h_ltl(ni, dom.next_q(ni, q)) + 0);
      }
    }
  }
}

TEST_CASE("h_LLM: arithmetic, fallbacks") {
  SceneGraph g = fig6();

  LlmGuidance guide;
  CHECK(h_llm(guide, g, {13, 0}) == 0);  // MissingPlan falls back to zero

  // living room (4) -> kitchen (3): centers 3 apart; kitchen -> oven (11): 1.
  guide.plans[{4, 0}] = {{"move", 4, 3}, {"reach", 3, 11}};
  CHECK(h_llm(guide, g, {13, 0}) == 4.0);
  CHECK(h_llm(guide, g, {13, 1}) == 0);  // different q, no plan

  guide.plans[{4, 1}] = {};
  CHECK(h_llm(guide, g, {13, 1}) == 0);  // empty plan

  guide.plans[{4, 2}] = {{"move", 4, 77}};
  CHECK(h_llm(guide, g, {13, 2}) == 0);  // unknown attribute rejects the plan
}

TEST_CASE("remaining_mission rendering") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("& F & p2 F & p3 F p11 ! p9", g.alphabet()));

  int q = dfa.step(dfa.initial, {"p2"});  // bedroom visited
  CHECK(remaining_mission(dfa, q, g) == "visit the kitchen 3 and reach the oven 11");
  CHECK(remaining_mission(dfa, q, g).find("tv") == std::string::npos);
  CHECK(remaining_mission(dfa, q, g).find("9") == std::string::npos);

  int acc = dfa.step(q, {"p3", "p11"});
  REQUIRE(dfa.is_accepting(acc));
  CHECK(remaining_mission(dfa, acc, g).empty());

  int sink = dfa.step(dfa.initial, {"p9"});
  CHECK(remaining_mission(dfa, sink, g) == "mission infeasible from current state");
}

TEST_CASE("cache roundtrips preserve every value") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("& F & p2 F & p3 F p11 ! p9", g.alphabet()));
  HeuristicTable t = HeuristicTable::build(g, dfa);

  HeuristicTable u = heuristic_cache_from_text(heuristic_cache_to_text(t));
  REQUIRE(u.num_labels() == t.num_labels());
  REQUIRE(u.num_states() == t.num_states());
  for (int l = 0; l < t.num_labels(); ++l)
    for (int q = 0; q < t.num_states(); ++q) {
      CHECK(u.g_value(l, q) == t.g_value(l, q));
      CHECK(u.next_label(l, q) == t.next_label(l, q));
    }
  for (size_t ni = 0; ni < g.nodes.size(); ++ni)
    for (int q = 0; q < t.num_states(); ++q) CHECK(u.h_ltl(ni, q) == t.h_ltl(ni, q));

  CHECK_THROWS_AS(heuristic_cache_from_text("{}"), CacheError);
  CHECK_THROWS_AS(heuristic_cache_from_text("nope"), CacheError);

  LlmGuidance guide = mock_guidance(t, g, dfa);
  LlmGuidance h = guidance_from_text(guidance_to_text(guide));
  CHECK(h.plans == guide.plans);
  CHECK_THROWS_AS(guidance_from_text("{}"), CacheError);
}

TEST_CASE("mock guidance follows the least-cost label chain") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("& F & p2 F & p3 F p11 ! p9", g.alphabet()));
  HeuristicTable t = HeuristicTable::build(g, dfa);
  LlmGuidance guide = mock_guidance(t, g, dfa);

  // From the living room at the initial state the chain must route through
  // the mission attributes, and the heuristic must be informative there.
  auto it = guide.plans.find({4, dfa.initial});
  REQUIRE(it != guide.plans.end());
  CHECK_FALSE(it->second.empty());
  CHECK(h_llm(guide, g, {13, dfa.initial}) > 0);

  // Every referenced attribute exists.
  for (const auto& [key, calls] : guide.plans)
    for (const auto& c : calls) {
      CHECK(g.find_attribute(c.from_attr) != nullptr);
      CHECK(g.find_attribute(c.to_attr) != nullptr);
    }
}
