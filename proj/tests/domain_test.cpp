#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "sgplan/domain.hpp"

using namespace sgplan;

namespace {

SceneGraph fig6() {
  return load_scene(std::string(SGPLAN_TEST_DATA_DIR) + "/fig6_scene.json");
}

bool has_succ(const std::vector<Successor>& ss, NodeId node) {
  return std::any_of(ss.begin(), ss.end(),
                     [&](const Successor& s) { return s.state.node == node; });
}

}  // namespace

TEST_CASE("build_domain: four levels on an object/room/floor scene") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("& F & p2 F & p3 F p11 ! p9", g.alphabet()));
  PlanningDomain dom = build_domain(g, dfa, 1);

  REQUIRE(dom.num_levels() == 4);
  CHECK(dom.level(0).node_indices.size() == g.nodes.size());
  CHECK(dom.level(1).kind == AttrKind::Object);
  CHECK(dom.level(2).kind == AttrKind::Room);
  CHECK(dom.level(3).kind == AttrKind::Floor);
  CHECK(dom.start().node == 1);
  CHECK(dom.start().q == dfa.initial);
  CHECK_FALSE(dom.is_goal(dom.start()));
  CHECK(dom.in_level(2, 1));       // every node lies in a room
  CHECK_FALSE(dom.in_level(1, 1)); // node 1 carries no object

  CHECK_THROWS_AS(build_domain(g, dfa, 999), UnknownNodeError);
}

TEST_CASE("trivially satisfied mission: start already in goal region") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("true", g.alphabet()));
  PlanningDomain dom = build_domain(g, dfa, 0);
  CHECK(dom.is_goal(dom.start()));
}

TEST_CASE("anchor successors = graph edges + injected level actions") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("F p11", g.alphabet()));
  PlanningDomain dom = build_domain(g, dfa, 13);

  ProductState x{13, dfa.initial};  // walkway cell inside the tv region
  auto anchor = dom.successors(0, x);

  // Direct enumeration: per-edge moves ...
  std::vector<Successor> expected;
  const int qj = dom.next_q(g.node_index(13), x.q);
  for (const auto& [ni, c] : g.neighbors(g.node_index(13)))
    expected.push_back({{g.nodes[ni].id, qj}, c});
  // ... plus each level's actions at this node.
  for (int k = 1; k < dom.num_levels(); ++k)
    for (const Successor& s : dom.successors(k, x)) expected.push_back(s);

  REQUIRE(anchor.size() == expected.size());
  for (const Successor& e : expected) {
    bool found = std::any_of(anchor.begin(), anchor.end(), [&](const Successor& s) {
      return s.state == e.state && s.cost == e.cost;
    });
    CHECK(found);
  }
  CHECK(anchor.size() == g.neighbors(g.node_index(13)).size() + 4 + 2);
}

TEST_CASE("object-level action: couch to tv costs the occupancy shortest path") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("F p9", g.alphabet()));
  PlanningDomain dom = build_domain(g, dfa, 4);

  auto acts = dom.successors(1, {4, dfa.initial});  // node 4 sits on the couch
  // One action per other object (all interiors disjoint here).
  CHECK(acts.size() == 4);
  auto tv = std::find_if(acts.begin(), acts.end(), [&](const Successor& s) {
    return g.label_set(s.state.node).count("p9") == 1;
  });
  REQUIRE(tv != acts.end());
  auto [d, hit] = g.shortest_dist(4, g.region_boundary(g.attribute(9)));
  CHECK(tv->cost == d);
  CHECK(tv->state.node == hit);
  CHECK(dom.is_goal(tv->state));  // stepping off the tv node consumes p9
}

TEST_CASE("level actions respect the automaton along the underlying path") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("& F & p2 F & p3 F p11 ! p9", g.alphabet()));
  PlanningDomain dom = build_domain(g, dfa, 1);

  for (int k = 0; k < dom.num_levels(); ++k) {
    for (size_t ni : dom.level(k).node_indices) {
      for (int q = 0; q < dfa.num_states(); ++q) {
        ProductState x{g.nodes[ni].id, q};
        for (const Successor& s : dom.successors(k, x)) {
          auto path = dom.anchor_path(x.node, s.state.node);
          CHECK(dom.replay_q(path, q) == s.state.q);
          // Cost soundness + subset property: the action costs exactly its
          // anchor-level shortest path.
          CHECK(s.cost == dom.anchor_dist(x.node, s.state.node));
          CHECK(s.cost > 0);
        }
      }
    }
  }
}

TEST_CASE("unreachable rooms are omitted from successors") {
  SceneGraph g = fig6();
  // Brick up the kitchen door.
  g.edges.erase(std::remove_if(g.edges.begin(), g.edges.end(),
                               [](const SceneEdge& e) {
                                 return (e.u == 14 && e.v == 15) || (e.u == 15 && e.v == 14);
                               }),
                g.edges.end());
  g.finalize();
  Dfa dfa = compile(parse_prefix("F p3", g.alphabet()));
  PlanningDomain dom = build_domain(g, dfa, 1);

  auto rooms = dom.successors(2, {1, dfa.initial});
  CHECK(has_succ(rooms, 12));  // living room door cell is its nearest boundary
  for (const Successor& s : rooms) CHECK(g.label_set(s.state.node).count("p3") == 0);
}

TEST_CASE("anchor_path endpoints and cost") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("F p3", g.alphabet()));
  PlanningDomain dom = build_domain(g, dfa, 0);

  auto path = dom.anchor_path(0, 26);
  REQUIRE(path.size() >= 2);
  CHECK(path.front() == 0);
  CHECK(path.back() == 26);
  double walked = 0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    double step = kInfDist;
    for (const auto& [nb, c] : g.neighbors(g.node_index(path[i])))
      if (g.nodes[nb].id == path[i + 1]) step = std::min(step, c);
    REQUIRE(step < kInfDist);
    walked += step;
  }
  CHECK(walked == dom.anchor_dist(0, 26));
  // Deterministic across calls (memoized field).
  CHECK(dom.anchor_path(0, 26) == path);
}

TEST_CASE("level action graph dump") {
  SceneGraph g = fig6();
  Dfa dfa = compile(parse_prefix("F p3", g.alphabet()));
  PlanningDomain dom = build_domain(g, dfa, 0);
  std::string txt = dom.level_edges_text(2);
  CHECK(txt.find("level: 2") != std::string::npos);
  CHECK(txt.find("-->") != std::string::npos);
}
