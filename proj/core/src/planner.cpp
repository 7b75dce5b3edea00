#include "sgplan/planner.hpp"

#include <algorithm>
#include <chrono>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace sgplan {

namespace {

struct StateInfo {
  double g = kInfDist;
  double v = kInfDist;        // g at last expansion; v == g means consistent
  uint32_t vmask = 0;         // levels whose successors were relaxed at v
  ProductState parent{};
  bool has_parent = false;
  int via_level = 0;          // level of the action that set this g
  uint32_t closed_iter = 0;   // iteration stamp for closed_mask
  uint32_t closed_mask = 0;   // per-queue closed bits (bit 0 = anchor)

  bool closed(uint32_t iteration, size_t qi) const {
    return closed_iter == iteration && (closed_mask & (1u << qi)) != 0;
  }
  void close(uint32_t iteration, size_t qi) {
    if (closed_iter != iteration) {
      closed_iter = iteration;
      closed_mask = 0;
    }
    closed_mask |= 1u << qi;
  }
};

struct QueueEntry {
  double key;
  double g;
  ProductState x;
};

// Smaller key first; ties to higher g (deeper states), then smaller node id,
// then smaller q — fully deterministic.
struct EntryWorse {
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.key != b.key) return a.key > b.key;
    if (a.g != b.g) return a.g < b.g;
    if (a.x.node != b.x.node) return a.x.node > b.x.node;
    return a.x.q > b.x.q;
  }
};

using Open = std::priority_queue<QueueEntry, std::vector<QueueEntry>, EntryWorse>;

class Search {
 public:
  Search(const PlanningDomain& dom, const HeuristicTable& table,
         const LlmGuidance* guidance, const SearchConfig& cfg,
         const PlanCallback& on_improve, const ExpandHook& on_expand)
      : dom_(dom), table_(table), guidance_(guidance), cfg_(cfg),
        on_improve_(on_improve), on_expand_(on_expand) {
    if (cfg.w1 < 1 || cfg.w2 < 1 || cfg.decay <= 0 || cfg.decay > 1)
      throw std::invalid_argument("SearchConfig requires w1, w2 >= 1 and decay in (0, 1]");
    if (cfg.decay == 1 && (cfg.w1 > 1 || cfg.w2 > 1))
      throw std::invalid_argument("decay = 1 requires w1 = w2 = 1 (weights must reach 1)");
  }

  PlanResult run();

 private:
  double h_anchor(const ProductState& x) const {
    return table_.h_ltl(dom_.scene().node_index(x.node), x.q);
  }
  double h_queue(size_t i, const ProductState& x) const {
    const QueueSpec& sp = cfg_.queues[i];
    if (sp.heuristic == HeurKind::LLM)
      return guidance_ ? h_llm(*guidance_, dom_.scene(), x) : 0.0;
    return h_anchor(x);
  }

  StateInfo& info(const ProductState& x) { return states_[x]; }

  void push_open(const ProductState& x, double g);
  void relax(const ProductState& from, const Successor& s, int level);
  void expand(int queue_index, const ProductState& x);
  // Pops until the top entry is current; returns nullopt when exhausted.
  std::optional<QueueEntry> peek(size_t qi);
  void drop(size_t qi) { open_[qi].pop(); }

  bool run_iteration();  // true if a bounded solution terminated the iteration
  PlanResult snapshot(PlanStatus status) const;
  std::vector<ProductState> abstract_path(const ProductState& goal) const;

  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - t0_).count();
  }

  using Clock = std::chrono::steady_clock;
  const PlanningDomain& dom_;
  const HeuristicTable& table_;
  const LlmGuidance* guidance_;
  SearchConfig cfg_;
  const PlanCallback& on_improve_;
  const ExpandHook& on_expand_;

  std::unordered_map<ProductState, StateInfo, ProductStateHash> states_;
  std::vector<Open> open_;  // [0] anchor, then cfg_.queues
  double w1_ = 1, w2_ = 1;
  size_t rr_ = 0;  // round-robin cursor over inadmissible queues
  uint32_t iteration_ = 0;
  bool timed_out_ = false;
  std::optional<ProductState> best_goal_;
  double best_goal_g_ = kInfDist;
  std::vector<long> expansions_;
  long total_expansions_ = 0;
  std::vector<IterationLog> logs_;
  Clock::time_point t0_;
};

void Search::push_open(const ProductState& x, double g) {
  const double h = h_anchor(x);
  if (h == kInfDist) return;  // provably no accepting continuation
  StateInfo& si = info(x);
  if (!si.closed(iteration_, 0))
    open_[0].push({g + w1_ * h, g, x});
  for (size_t i = 0; i < cfg_.queues.size(); ++i) {
    if (si.closed(iteration_, i + 1)) continue;
    const int k = cfg_.queues[i].level;
    if (k > 0 && !dom_.in_level(k, x.node)) continue;
    open_[i + 1].push({g + w1_ * h_queue(i, x), g, x});
  }
}

void Search::relax(const ProductState& from, const Successor& s, int level) {
  const double ng = info(from).g + s.cost;
  StateInfo& si = info(s.state);
  if (ng < si.g) {
    si.g = ng;
    si.parent = from;
    si.has_parent = true;
    si.via_level = level;
    push_open(s.state, ng);
    if (dom_.is_goal(s.state) && ng < best_goal_g_) {
      best_goal_g_ = ng;
      best_goal_ = s.state;
    }
  }
}

void Search::expand(int queue_index, const ProductState& x) {
  const int level = queue_index == 0 ? 0 : cfg_.queues[static_cast<size_t>(queue_index - 1)].level;
  StateInfo& si = info(x);
  // States whose successors at this level were already relaxed at the current
  // g contribute nothing; popping them only advances the queue minimum and
  // costs no expansion. An anchor expansion (level 0) subsumes every level,
  // since anchor successors include all level actions.
  if (si.v == si.g && (si.vmask & (1u | (1u << level)))) return;
  if (si.v != si.g) {
    si.v = si.g;
    si.vmask = 0;
  }
  si.vmask |= 1u << level;
  if (on_expand_) on_expand_(queue_index, x);
  ++expansions_[static_cast<size_t>(queue_index)];
  ++total_expansions_;
  for (const Successor& s : dom_.successors(level, x)) relax(x, s, level);
}

std::optional<QueueEntry> Search::peek(size_t qi) {
  while (!open_[qi].empty()) {
    const QueueEntry& top = open_[qi].top();
    auto it = states_.find(top.x);
    const StateInfo& si = it->second;
    const bool stale = top.g > si.g || si.closed(iteration_, qi);
    if (!stale) return top;
    open_[qi].pop();
  }
  return std::nullopt;
}

bool Search::run_iteration() {
  ++iteration_;
  expansions_.assign(open_.size(), 0);

  // Rebuild queues: every known state with finite g re-enters OPEN (the
  // OPEN ∪ INCONS reset of anytime repair), closed stamps are fresh.
  for (auto& q : open_) q = Open();
  std::vector<ProductState> known;
  known.reserve(states_.size());
  for (const auto& [x, si] : states_)
    if (si.g < kInfDist) known.push_back(x);
  // Deterministic insertion order.
  std::sort(known.begin(), known.end(), [](const ProductState& a, const ProductState& b) {
    return a.node != b.node ? a.node < b.node : a.q < b.q;
  });
  for (const ProductState& x : known) push_open(x, states_.at(x).g);

  int check_timer = 0;
  while (true) {
    if (++check_timer >= 64) {
      check_timer = 0;
      if (elapsed() > cfg_.time_budget) {
        timed_out_ = true;
        return best_goal_.has_value();
      }
    }
    auto anchor_top = peek(0);
    if (!anchor_top) {
      // Anchor exhausted: every reachable state carries its optimal g, so the
      // incumbent (if any) is optimal.
      return best_goal_.has_value();
    }
    const double anchor_min = anchor_top->key;
    if (best_goal_g_ <= w2_ * anchor_min) return true;  // within this round's bound
    // The suspension factor is what licenses inadmissible expansions: once
    // w2 = 1 the iteration can only end through the anchor bound itself, so
    // other queues would spend expansions without ever tightening it.
    const size_t m = w2_ == 1 ? 0 : cfg_.queues.size();
    bool expanded = false;
    for (size_t t = 0; t < m && !expanded; ++t) {
      const size_t i = 1 + (rr_ + t) % m;  // round-robin across queues
      auto top = peek(i);
      // States the incumbent already dominates (by the admissible anchor
      // bound) cannot lead anywhere better; discard instead of expanding.
      while (top && best_goal_g_ <= top->g + h_anchor(top->x)) {
        drop(i);
        top = peek(i);
      }
      if (!top || top->key > w2_ * anchor_min) continue;
      if (best_goal_g_ <= top->key) return true;  // bounded by this queue's key
      drop(i);
      info(top->x).close(iteration_, i);
      expand(static_cast<int>(i), top->x);
      rr_ = (rr_ + t + 1) % m;
      expanded = true;
    }
    if (!expanded) {
      if (best_goal_g_ <= anchor_min) return true;
      drop(0);
      info(anchor_top->x).close(iteration_, 0);
      expand(0, anchor_top->x);
    }
  }
}

std::vector<ProductState> Search::abstract_path(const ProductState& goal) const {
  std::vector<ProductState> rev{goal};
  ProductState cur = goal;
  while (true) {
    const StateInfo& si = states_.at(cur);
    if (!si.has_parent) break;
    cur = si.parent;
    rev.push_back(cur);
  }
  std::reverse(rev.begin(), rev.end());
  return rev;
}

PlanResult Search::snapshot(PlanStatus status) const {
  PlanResult r;
  r.status = status;
  r.iterations = logs_;
  r.total_expansions = total_expansions_;
  if (best_goal_) {
    r.cost = best_goal_g_;
    r.path = expand_solution(dom_, abstract_path(*best_goal_));
    for (NodeId s : r.path) r.word.push_back(dom_.scene().label_set(s));
  }
  return r;
}

PlanResult Search::run() {
  t0_ = Clock::now();
  open_.resize(cfg_.queues.size() + 1);
  w1_ = cfg_.w1;
  w2_ = cfg_.w2;

  const ProductState start = dom_.start();
  StateInfo& si = info(start);
  si.g = 0;
  if (dom_.is_goal(start)) {
    best_goal_ = start;
    best_goal_g_ = 0;
  }

  if (h_anchor(start) == kInfDist && !best_goal_) {
    PlanResult r = snapshot(PlanStatus::Infeasible);
    r.diagnosis = dom_.dfa().can_accept[static_cast<size_t>(dom_.dfa().initial)]
                      ? "accepting labels unreachable in the scene"
                      : "no accepting automaton path";
    return r;
  }

  double last_emitted = kInfDist;
  while (true) {
    const bool solved = run_iteration();
    IterationLog log;
    log.wall_time = elapsed();
    log.cost = best_goal_g_;
    log.w1 = w1_;
    log.w2 = w2_;
    log.expansions = expansions_;
    logs_.push_back(log);

    if (!solved && !timed_out_) {
      // Anchor open exhausted without a goal.
      if (best_goal_) {
        PlanResult r = snapshot(PlanStatus::Optimal);
        r.optimal = true;
        return r;
      }
      PlanResult r = snapshot(PlanStatus::Infeasible);
      r.diagnosis = dom_.dfa().can_accept[static_cast<size_t>(dom_.dfa().initial)]
                        ? "accepting labels unreachable in the scene"
                        : "no accepting automaton path";
      return r;
    }
    if (best_goal_g_ < last_emitted && on_improve_) {
      last_emitted = best_goal_g_;
      PlanResult partial = snapshot(PlanStatus::TimedOut);
      partial.optimal = false;
      on_improve_(partial);
    }
    if (timed_out_) {
      PlanResult r = snapshot(best_goal_ ? PlanStatus::TimedOut : PlanStatus::Infeasible);
      if (!best_goal_) r.diagnosis = "time budget exhausted before a first solution";
      return r;
    }
    if (w1_ == 1 && w2_ == 1) {
      PlanResult r = snapshot(PlanStatus::Optimal);
      r.optimal = true;
      return r;
    }
    w1_ = std::max(1.0, w1_ * cfg_.decay);
    w2_ = std::max(1.0, w2_ * cfg_.decay);
  }
}

}  // namespace

PlanResult plan(const PlanningDomain& dom, const HeuristicTable& table,
                const LlmGuidance* guidance, const SearchConfig& cfg,
                const PlanCallback& on_improve, const ExpandHook& on_expand) {
  return Search(dom, table, guidance, cfg, on_improve, on_expand).run();
}

std::vector<NodeId> expand_solution(const PlanningDomain& dom,
                                    const std::vector<ProductState>& abstract_path) {
  std::vector<NodeId> out;
  if (abstract_path.empty()) return out;
  out.push_back(abstract_path.front().node);
  for (size_t i = 1; i < abstract_path.size(); ++i) {
    const NodeId a = abstract_path[i - 1].node, b = abstract_path[i].node;
    // Direct edges stay as-is; level actions inline their underlying path.
    bool direct = false;
    const size_t ai = dom.scene().node_index(a);
    for (const auto& [nb, c] : dom.scene().neighbors(ai)) {
      (void)c;
      if (dom.scene().nodes[nb].id == b) {
        direct = true;
        break;
      }
    }
    if (direct && dom.anchor_dist(a, b) == kInfDist) direct = false;  // unreachable: impossible
    std::vector<NodeId> seg = direct ? std::vector<NodeId>{a, b} : dom.anchor_path(a, b);
    out.insert(out.end(), seg.begin() + 1, seg.end());
  }
  return out;
}

Certification certify_optimal(const PlanResult& result, const PlanningDomain& dom,
                              size_t node_cap) {
  const SceneGraph& g = dom.scene();
  const size_t n = g.nodes.size();
  const size_t nq = static_cast<size_t>(dom.dfa().num_states());
  Certification cert;
  if (n * nq > node_cap) return cert;  // Incomparable

  // Plain Dijkstra on the product of scene edges and automaton steps.
  std::vector<double> dist(n * nq, kInfDist);
  using Item = std::pair<double, size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  const size_t start = g.node_index(dom.start().node) * nq +
                       static_cast<size_t>(dom.start().q);
  dist[start] = 0;
  open.push({0, start});
  double oracle = kInfDist;
  while (!open.empty()) {
    auto [d, id] = open.top();
    open.pop();
    if (d > dist[id]) continue;
    const size_t ni = id / nq;
    const int q = static_cast<int>(id % nq);
    if (dom.is_goal({g.nodes[ni].id, q})) {
      oracle = d;
      break;
    }
    const int qj = dom.next_q(ni, q);
    for (const auto& [nb, c] : g.neighbors(ni)) {
      const size_t nid = nb * nq + static_cast<size_t>(qj);
      if (d + c < dist[nid]) {
        dist[nid] = d + c;
        open.push({d + c, nid});
      }
    }
  }

  cert.oracle_cost = oracle;
  if (oracle == kInfDist && result.status == PlanStatus::Infeasible) {
    cert.verdict = CertifyVerdict::BothInfeasible;
  } else if (result.cost == oracle) {
    cert.verdict = CertifyVerdict::Match;
  } else {
    cert.verdict = CertifyVerdict::CostGap;
    cert.delta = result.cost - oracle;
  }
  return cert;
}

std::string plan_to_text(const PlanResult& r, const SceneGraph& g) {
  std::ostringstream out;
  switch (r.status) {
    case PlanStatus::Optimal: out << "status: optimal\n"; break;
    case PlanStatus::TimedOut: out << "status: timed-out\n"; break;
    case PlanStatus::Infeasible: out << "status: infeasible (" << r.diagnosis << ")\n"; break;
  }
  if (r.cost < kInfDist) out << "cost: " << r.cost << "\n";
  out << "expansions: " << r.total_expansions << "\n";
  out << "path:";
  for (NodeId s : r.path) out << " " << s;
  out << "\npolyline:\n";
  for (NodeId s : r.path) {
    const auto& p = g.nodes[g.node_index(s)].xyz;
    out << "  " << p[0] << " " << p[1] << " " << p[2] << "\n";
  }
  out << "iterations:\n";
  for (const IterationLog& it : r.iterations) {
    out << "  t=" << it.wall_time << " cost=" << it.cost << " w1=" << it.w1
        << " w2=" << it.w2 << " expansions=";
    for (size_t i = 0; i < it.expansions.size(); ++i)
      out << (i ? "," : "") << it.expansions[i];
    out << "\n";
  }
  return out.str();
}

}  // namespace sgplan
