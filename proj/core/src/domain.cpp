#include "sgplan/domain.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sgplan {

PlanningDomain::PlanningDomain(const SceneGraph& g, Dfa dfa, NodeId start_node)
    : scene_(&g), dfa_(std::move(dfa)) {
  start_ = {start_node, dfa_.initial};
  (void)g.node_index(start_node);  // UnknownNodeError if absent

  // next_q table.
  const size_t nq = static_cast<size_t>(dfa_.num_states());
  next_q_.resize(g.nodes.size() * nq);
  for (size_t ni = 0; ni < g.nodes.size(); ++ni) {
    const LabelSet l = g.label_set(g.nodes[ni].id);
    for (size_t q = 0; q < nq; ++q)
      next_q_[ni * nq + q] = dfa_.step(static_cast<int>(q), l);
  }

  // Anchor level.
  LevelSpec anchor;
  anchor.k = 0;
  for (size_t i = 0; i < g.nodes.size(); ++i) anchor.node_indices.push_back(i);
  levels_.push_back(std::move(anchor));
  node_in_level_.push_back(std::vector<char>(g.nodes.size(), 1));
  boundaries_.push_back({});
  disjoint_.push_back({});

  // Attribute levels, in the scene's order (objects, rooms, floors, customs).
  for (const AttributeLevel& al : g.levels()) {
    LevelSpec lvl;
    lvl.k = static_cast<int>(levels_.size());
    lvl.kind = al.kind;
    lvl.custom_kind = al.custom_kind;
    lvl.attr_indices = al.attr_indices;

    std::vector<char> member(g.nodes.size(), 0);
    std::vector<std::vector<size_t>> bounds;
    std::vector<std::set<size_t>> interiors;
    for (int ai : al.attr_indices) {
      const Attribute& a = g.attributes[static_cast<size_t>(ai)];
      for (NodeId s : a.region) member[g.node_index(s)] = 1;
      std::vector<size_t> b;
      for (NodeId s : g.region_boundary(a)) b.push_back(g.node_index(s));
      std::sort(b.begin(), b.end());
      bounds.push_back(std::move(b));
      std::set<size_t> in;
      for (NodeId s : g.region_interior(a)) in.insert(g.node_index(s));
      interiors.push_back(std::move(in));
    }
    for (size_t i = 0; i < g.nodes.size(); ++i)
      if (member[i]) lvl.node_indices.push_back(i);

    std::vector<std::vector<char>> dis(interiors.size(),
                                       std::vector<char>(interiors.size(), 0));
    for (size_t a = 0; a < interiors.size(); ++a)
      for (size_t b = 0; b < interiors.size(); ++b) {
        if (a == b) continue;
        bool overlap = false;
        for (size_t s : interiors[a])
          if (interiors[b].count(s)) {
            overlap = true;
            break;
          }
        dis[a][b] = overlap ? 0 : 1;
      }

    levels_.push_back(std::move(lvl));
    node_in_level_.push_back(std::move(member));
    boundaries_.push_back(std::move(bounds));
    disjoint_.push_back(std::move(dis));
  }
}

bool PlanningDomain::in_level(int k, NodeId s) const {
  return node_in_level_[static_cast<size_t>(k)][scene_->node_index(s)] != 0;
}

const PlanningDomain::DistField& PlanningDomain::field_from(size_t src_idx) const {
  std::lock_guard<std::mutex> lock(memo_mutex_);
  auto it = dist_memo_.find(src_idx);
  if (it != dist_memo_.end()) return it->second;
  DistField f;
  f.dist = scene_->dijkstra_from(src_idx, &f.parents);
  return dist_memo_.emplace(src_idx, std::move(f)).first->second;
}

std::vector<NodeId> PlanningDomain::anchor_path(NodeId from, NodeId to) const {
  const size_t src = scene_->node_index(from);
  const size_t dst = scene_->node_index(to);
  const DistField& f = field_from(src);
  if (f.dist[dst] == kInfDist)
    throw SceneError("no path between nodes " + std::to_string(from) + " and " +
                     std::to_string(to));
  std::vector<NodeId> path;
  for (size_t cur = dst; cur != src; cur = f.parents[cur])
    path.push_back(scene_->nodes[cur].id);
  path.push_back(from);
  std::reverse(path.begin(), path.end());
  return path;
}

double PlanningDomain::anchor_dist(NodeId from, NodeId to) const {
  return field_from(scene_->node_index(from)).dist[scene_->node_index(to)];
}

int PlanningDomain::replay_q(const std::vector<NodeId>& path, int q_start) const {
  int q = q_start;
  for (size_t i = 0; i + 1 < path.size(); ++i)
    q = next_q(scene_->node_index(path[i]), q);
  return q;
}

std::vector<Successor> PlanningDomain::successors(int k, const ProductState& x) const {
  const size_t si = scene_->node_index(x.node);
  std::vector<Successor> out;

  if (k == 0) {
    const int qj = next_q(si, x.q);
    for (const auto& [ni, cost] : scene_->neighbors(si))
      out.push_back({{scene_->nodes[ni].id, qj}, cost});
    for (int lk = 1; lk < num_levels(); ++lk) {
      if (!node_in_level_[static_cast<size_t>(lk)][si]) continue;
      auto acts = successors(lk, x);
      out.insert(out.end(), acts.begin(), acts.end());
    }
    return out;
  }

  const LevelSpec& lvl = levels_[static_cast<size_t>(k)];
  if (!node_in_level_[static_cast<size_t>(k)][si]) return out;

  // Attribute positions (within this level) containing x.node.
  std::vector<size_t> here;
  for (size_t pos = 0; pos < lvl.attr_indices.size(); ++pos) {
    const Attribute& a = scene_->attributes[static_cast<size_t>(lvl.attr_indices[pos])];
    if (std::find(a.region.begin(), a.region.end(), x.node) != a.region.end())
      here.push_back(pos);
  }

  const DistField& f = field_from(si);
  const auto& dis = disjoint_[static_cast<size_t>(k)];
  for (size_t b = 0; b < lvl.attr_indices.size(); ++b) {
    bool ok = !here.empty();
    for (size_t a : here)
      if (a == b || !dis[a][b]) {
        ok = false;
        break;
      }
    if (!ok) continue;
    // Nearest boundary node of the target attribute; ties toward smaller id
    // (boundary lists are sorted by node index == insertion order of ids).
    size_t best = SIZE_MAX;
    double best_d = kInfDist;
    for (size_t t : boundaries_[static_cast<size_t>(k)][b]) {
      if (f.dist[t] < best_d ||
          (f.dist[t] == best_d && best != SIZE_MAX &&
           scene_->nodes[t].id < scene_->nodes[best].id)) {
        best_d = f.dist[t];
        best = t;
      }
    }
    if (best == SIZE_MAX || best_d == kInfDist || best == si) continue;
    // The automaton consumes the labels of every node departed along the
    // underlying shortest path, so the action's q matches what the expanded
    // anchor path would produce.
    const NodeId target = scene_->nodes[best].id;
    const int qj = replay_q(anchor_path(x.node, target), x.q);
    out.push_back({{target, qj}, best_d});
  }
  return out;
}

bool PlanningDomain::is_goal(const ProductState& x) const {
  // The final node's label is consumed by one trailing self-transition.
  return dfa_.is_accepting(next_q(scene_->node_index(x.node), x.q));
}

std::string PlanningDomain::level_edges_text(int k) const {
  std::ostringstream out;
  out << "level: " << k << "\n";
  const LevelSpec& lvl = levels_[static_cast<size_t>(k)];
  for (size_t ni : lvl.node_indices) {
    ProductState x{scene_->nodes[ni].id, dfa_.initial};
    for (const Successor& s : successors(k, x))
      out << x.node << " --" << s.cost << "--> " << s.state.node << "\n";
  }
  return out.str();
}

PlanningDomain build_domain(const SceneGraph& g, const Dfa& dfa, NodeId start_node) {
  return PlanningDomain(g, dfa, start_node);
}

}  // namespace sgplan
