#pragma once

#include <map>
#include <string>
#include <vector>

#include "sgplan/domain.hpp"

namespace sgplan {

class CacheError : public std::runtime_error {
 public:
  explicit CacheError(const std::string& what) : std::runtime_error(what) {}
};

/// Precomputed label costs c_l, automaton potentials g / next labels, and the
/// per-automaton-state h_LTL distance fields. Read-only after build().
class HeuristicTable {
 public:
  HeuristicTable() = default;

  static HeuristicTable build(const SceneGraph& g, const Dfa& dfa);

  int num_labels() const { return static_cast<int>(labels_.size()); }
  int num_states() const { return num_states_; }
  const LabelSet& label(int lid) const { return labels_[static_cast<size_t>(lid)]; }
  /// Label id of a realized label, -1 otherwise.
  int label_id(const LabelSet& l) const;
  int label_id_of_node(size_t node_idx) const { return node_label_[node_idx]; }

  /// c_l lower bound between two realized labels (meters, may be +inf).
  double label_cost(int l1, int l2) const {
    return cl_[static_cast<size_t>(l1) * labels_.size() + static_cast<size_t>(l2)];
  }
  /// Automaton potential g(l, q) (meters, may be +inf).
  double g_value(int lid, int q) const {
    return g_[static_cast<size_t>(lid) * static_cast<size_t>(num_states_) +
              static_cast<size_t>(q)];
  }
  /// Minimizing next label id, or -1 for the true-label (q accepting or dead).
  int next_label(int lid, int q) const {
    return nl_[static_cast<size_t>(lid) * static_cast<size_t>(num_states_) +
               static_cast<size_t>(q)];
  }

  /// O(1) h_LTL lookup (meters; +inf means no accepting continuation).
  double h_ltl(size_t node_idx, int q) const {
    return h_[static_cast<size_t>(q) * num_nodes_ + node_idx];
  }
  double h_ltl(const SceneGraph& g, const ProductState& x) const {
    return h_ltl(g.node_index(x.node), x.q);
  }

  size_t num_nodes() const { return num_nodes_; }

 private:
  std::vector<LabelSet> labels_;
  std::vector<int> node_label_;   // node idx -> label id
  std::vector<double> cl_;        // L x L
  std::vector<double> g_;         // L x Q
  std::vector<int> nl_;           // L x Q
  std::vector<double> h_;         // Q x V
  int num_states_ = 0;
  size_t num_nodes_ = 0;

  friend std::string heuristic_cache_to_text(const HeuristicTable&);
  friend HeuristicTable heuristic_cache_from_text(const std::string&);
};

/// Versioned serialization so benchmark reruns skip precomputation.
std::string heuristic_cache_to_text(const HeuristicTable& t);
HeuristicTable heuristic_cache_from_text(const std::string& text);
void save_heuristic_cache(const HeuristicTable& t, const std::string& path);
HeuristicTable load_heuristic_cache(const std::string& path);

/// LLM guidance plans keyed by (context attribute id, automaton state).
struct LlmGuidance {
  struct Call {
    std::string motion;  // "move", "reach", ...
    int from_attr = 0;
    int to_attr = 0;

    bool operator==(const Call& o) const {
      return motion == o.motion && from_attr == o.from_attr && to_attr == o.to_attr;
    }
  };
  std::map<std::pair<int, int>, std::vector<Call>> plans;
};

std::string guidance_to_text(const LlmGuidance& g);
LlmGuidance guidance_from_text(const std::string& text);
void save_guidance(const LlmGuidance& g, const std::string& path);
LlmGuidance load_guidance(const std::string& path);

/// Context attribute for a node: its room, else its floor, else -1.
int context_attribute(const SceneGraph& g, NodeId node);

/// Sum of Euclidean center distances over the guidance plan for (context
/// attribute of x.node, x.q); 0 when no plan exists (MissingPlan fallback).
double h_llm(const LlmGuidance& guidance, const SceneGraph& g, const ProductState& x);

/// Human-readable rest-of-mission text derived from the automaton's shortest
/// accepting label path from q.
std::string remaining_mission(const Dfa& dfa, int q, const SceneGraph& g);

/// Offline stand-in for live LLM guidance: plans derived from the heuristic
/// table's own least-cost label chain (next_label), one per (room-or-floor
/// attribute, non-accepting q).
LlmGuidance mock_guidance(const HeuristicTable& t, const SceneGraph& g, const Dfa& dfa);

}  // namespace sgplan
