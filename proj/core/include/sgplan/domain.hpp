#pragma once

#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "sgplan/automaton.hpp"
#include "sgplan/scene_graph.hpp"

namespace sgplan {

/// Product of an occupancy node and an automaton state.
struct ProductState {
  NodeId node = 0;
  int q = 0;

  bool operator==(const ProductState& o) const { return node == o.node && q == o.q; }
};

struct ProductStateHash {
  size_t operator()(const ProductState& x) const {
    return std::hash<uint64_t>()((static_cast<uint64_t>(x.node) << 20) ^
                                 static_cast<uint64_t>(x.q));
  }
};

struct Successor {
  ProductState state;
  double cost = 0;
};

/// One planning level. Level 0 is the anchor (all of V, per-edge moves plus
/// every injected level action); levels 1..K correspond to the scene's
/// attribute levels.
struct LevelSpec {
  int k = 0;
  AttrKind kind = AttrKind::Object;    // meaningless for the anchor
  std::string custom_kind;
  std::vector<int> attr_indices;       // indices into scene attributes (empty for anchor)
  std::vector<size_t> node_indices;    // V_k as scene node indices
};

/// Hierarchical planning domain over SceneGraph x Dfa. Immutable after
/// construction; successor generation is reentrant (the shortest-path memo is
/// mutex-guarded).
class PlanningDomain {
 public:
  PlanningDomain(const SceneGraph& g, Dfa dfa, NodeId start_node);

  const SceneGraph& scene() const { return *scene_; }
  const Dfa& dfa() const { return dfa_; }
  const ProductState& start() const { return start_; }

  int num_levels() const { return static_cast<int>(levels_.size()); }
  const LevelSpec& level(int k) const { return levels_[static_cast<size_t>(k)]; }
  bool in_level(int k, NodeId s) const;

  /// Successors of x at level k. Anchor (k=0): per-edge moves plus every
  /// level action available at x.node. k>0: one action per disjoint-interior
  /// attribute of that level, targeting its nearest boundary node.
  std::vector<Successor> successors(int k, const ProductState& x) const;

  bool is_goal(const ProductState& x) const;

  /// T(q, l(s)) lookup, precomputed for every (node, q).
  int next_q(size_t node_idx, int q) const {
    return next_q_[node_idx * static_cast<size_t>(dfa_.num_states()) + static_cast<size_t>(q)];
  }

  /// Underlying anchor-level shortest path between two nodes, endpoints
  /// included. Used to expand level actions and to replay labels.
  std::vector<NodeId> anchor_path(NodeId from, NodeId to) const;
  double anchor_dist(NodeId from, NodeId to) const;

  /// Automaton state after departing every node of `path` except the last.
  int replay_q(const std::vector<NodeId>& path, int q_start) const;

  /// Plain-text edge list of one level's action graph (node ids and costs),
  /// same shape as the automaton export.
  std::string level_edges_text(int k) const;

 private:
  struct DistField {
    std::vector<double> dist;
    std::vector<size_t> parents;
  };
  const DistField& field_from(size_t src_idx) const;

  const SceneGraph* scene_;
  Dfa dfa_;
  ProductState start_;
  std::vector<LevelSpec> levels_;
  std::vector<int> next_q_;                          // |V| x |Q|
  std::vector<std::vector<char>> node_in_level_;     // [k][node_idx]
  // Per level k>0: boundary node indices per attribute and the pairwise
  // interior-disjointness relation.
  std::vector<std::vector<std::vector<size_t>>> boundaries_;   // [k][attr pos]
  std::vector<std::vector<std::vector<char>>> disjoint_;       // [k][a pos][b pos]

  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<size_t, DistField> dist_memo_;
};

PlanningDomain build_domain(const SceneGraph& g, const Dfa& dfa, NodeId start_node);

}  // namespace sgplan
