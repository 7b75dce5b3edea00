#include "sgplan/heuristics.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

namespace sgplan {

using nlohmann::json;

namespace {

std::string label_key(const LabelSet& l) {
  std::string key;
  for (const auto& p : l) {
    key += p;
    key += ',';
  }
  return key;
}

// Canonical label order: sorted proposition lists compared with prop_less,
// shorter-prefix first. Deterministic next_label tie-breaking depends on it.
bool label_less(const LabelSet& a, const LabelSet& b) {
  auto ia = a.begin(), ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (prop_less(*ia, *ib)) return true;
    if (prop_less(*ib, *ia)) return false;
  }
  return a.size() < b.size();
}

}  // namespace

int HeuristicTable::label_id(const LabelSet& l) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == l) return static_cast<int>(i);
  return -1;
}

HeuristicTable HeuristicTable::build(const SceneGraph& g, const Dfa& dfa) {
  HeuristicTable t;
  t.num_nodes_ = g.nodes.size();
  t.num_states_ = dfa.num_states();

  // Realized label universe, canonically ordered.
  std::map<std::string, LabelSet> seen;
  for (const SceneNode& n : g.nodes) {
    LabelSet l = g.label_set(n.id);
    seen.emplace(label_key(l), std::move(l));
  }
  for (auto& [key, l] : seen) t.labels_.push_back(std::move(l));
  std::sort(t.labels_.begin(), t.labels_.end(), label_less);
  const size_t L = t.labels_.size();
  const size_t Q = static_cast<size_t>(t.num_states_);

  std::map<std::string, int> lid;
  for (size_t i = 0; i < L; ++i) lid[label_key(t.labels_[i])] = static_cast<int>(i);
  t.node_label_.resize(g.nodes.size());
  std::vector<std::vector<size_t>> members(L);
  for (size_t ni = 0; ni < g.nodes.size(); ++ni) {
    int id = lid.at(label_key(g.label_set(g.nodes[ni].id)));
    t.node_label_[ni] = id;
    members[static_cast<size_t>(id)].push_back(ni);
  }

  // c_l: one multi-source Dijkstra per realized label (Eq. 2 under the
  // shortest-path metric).
  t.cl_.assign(L * L, kInfDist);
  for (size_t l1 = 0; l1 < L; ++l1) {
    auto field = g.dijkstra_multi(members[l1], {});
    for (size_t l2 = 0; l2 < L; ++l2) {
      double best = kInfDist;
      for (size_t ni : members[l2]) best = std::min(best, field[ni]);
      t.cl_[l1 * L + l2] = best;
    }
  }

  // g(l, q): Dijkstra over (label, state) pairs backwards from acceptance,
  // relaxing predecessors (l, q) with T(q, l2) == q2 at cost c_l(l, l2).
  t.g_.assign(L * Q, kInfDist);
  t.nl_.assign(L * Q, -1);
  std::vector<std::vector<std::vector<int>>> pred_q(L);  // [l2][q2] -> {q}
  for (size_t l2 = 0; l2 < L; ++l2) {
    pred_q[l2].assign(Q, {});
    for (size_t q = 0; q < Q; ++q)
      pred_q[l2][static_cast<size_t>(dfa.step(static_cast<int>(q), t.labels_[l2]))]
          .push_back(static_cast<int>(q));
  }
  using Item = std::pair<double, size_t>;  // (g, l*Q+q)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  for (size_t l = 0; l < L; ++l)
    for (size_t q = 0; q < Q; ++q)
      if (dfa.is_accepting(static_cast<int>(q))) {
        t.g_[l * Q + q] = 0;
        open.push({0, l * Q + q});
      }
  while (!open.empty()) {
    auto [d, id] = open.top();
    open.pop();
    if (d > t.g_[id]) continue;
    const size_t l2 = id / Q, q2 = id % Q;
    for (size_t l = 0; l < L; ++l) {
      const double step = t.cl_[l * L + l2];
      if (step == kInfDist) continue;
      for (int q : pred_q[l2][q2]) {
        const size_t pid = l * Q + static_cast<size_t>(q);
        if (d + step < t.g_[pid]) {
          t.g_[pid] = d + step;
          open.push({d + step, pid});
        }
      }
    }
  }
  // next_label: argmin of the converged Bellman form. Ties prefer a label
  // that advances the automaton (co-located labels give zero-cost minimizers
  // that would otherwise cycle), then the canonically smaller label. Stays -1
  // (the true-label) for accepting or dead states.
  for (size_t l = 0; l < L; ++l)
    for (size_t q = 0; q < Q; ++q) {
      if (dfa.is_accepting(static_cast<int>(q)) || t.g_[l * Q + q] == kInfDist) continue;
      int first = -1;
      for (size_t l2 = 0; l2 < L; ++l2) {
        const size_t q2 =
            static_cast<size_t>(dfa.step(static_cast<int>(q), t.labels_[l2]));
        if (l2 == l && q2 == q) continue;  // degenerate zero-cost self-step
        if (t.cl_[l * L + l2] == kInfDist || t.g_[l2 * Q + q2] == kInfDist) continue;
        if (t.cl_[l * L + l2] + t.g_[l2 * Q + q2] == t.g_[l * Q + q]) {
          if (first < 0) first = static_cast<int>(l2);
          if (q2 != q) {
            first = static_cast<int>(l2);
            break;
          }
        }
      }
      t.nl_[l * Q + q] = first;
    }

  // h_LTL field: per q, a multi-source Dijkstra with every node seeded at
  // potential g(l(t), T(q, l(t))) (Eq. 4 as one sweep per state).
  t.h_.assign(Q * g.nodes.size(), 0.0);
  for (size_t q = 0; q < Q; ++q) {
    if (dfa.is_accepting(static_cast<int>(q))) continue;  // h = 0 on F
    std::vector<size_t> sources;
    std::vector<double> pots;
    for (size_t ni = 0; ni < g.nodes.size(); ++ni) {
      const size_t l = static_cast<size_t>(t.node_label_[ni]);
      const size_t q2 = static_cast<size_t>(dfa.step(static_cast<int>(q), t.labels_[l]));
      sources.push_back(ni);
      pots.push_back(t.g_[l * Q + q2]);
    }
    auto field = g.dijkstra_multi(sources, pots);
    std::copy(field.begin(), field.end(), t.h_.begin() + static_cast<long>(q * g.nodes.size()));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Cache serialization

namespace {

json inf_to_json(double v) { return v == kInfDist ? json(nullptr) : json(v); }
double inf_from_json(const json& j) { return j.is_null() ? kInfDist : j.get<double>(); }

}  // namespace

std::string heuristic_cache_to_text(const HeuristicTable& t) {
  json j;
  j["format"] = "sgplan-heuristics";
  j["version"] = 1;
  j["num_nodes"] = t.num_nodes_;
  j["num_states"] = t.num_states_;
  j["labels"] = json::array();
  for (const LabelSet& l : t.labels_) j["labels"].push_back(l);
  j["node_label"] = t.node_label_;
  auto dump = [&](const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(inf_to_json(x));
    return a;
  };
  j["cl"] = dump(t.cl_);
  j["g"] = dump(t.g_);
  j["nl"] = t.nl_;
  j["h"] = dump(t.h_);
  return j.dump() + "\n";
}

HeuristicTable heuristic_cache_from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw CacheError(std::string("heuristic cache parse failure: ") + e.what());
  }
  if (j.value("format", "") != "sgplan-heuristics" || j.value("version", 0) != 1)
    throw CacheError("heuristic cache has an unknown format or version");
  HeuristicTable t;
  try {
    t.num_nodes_ = j.at("num_nodes").get<size_t>();
    t.num_states_ = j.at("num_states").get<int>();
    for (const auto& jl : j.at("labels"))
      t.labels_.push_back(jl.get<LabelSet>());
    t.node_label_ = j.at("node_label").get<std::vector<int>>();
    auto parse = [&](const json& a) {
      std::vector<double> v;
      for (const auto& x : a) v.push_back(inf_from_json(x));
      return v;
    };
    t.cl_ = parse(j.at("cl"));
    t.g_ = parse(j.at("g"));
    t.nl_ = j.at("nl").get<std::vector<int>>();
    t.h_ = parse(j.at("h"));
  } catch (const json::exception& e) {
    throw CacheError(std::string("heuristic cache schema failure: ") + e.what());
  }
  const size_t L = t.labels_.size(), Q = static_cast<size_t>(t.num_states_);
  if (t.node_label_.size() != t.num_nodes_ || t.cl_.size() != L * L ||
      t.g_.size() != L * Q || t.nl_.size() != L * Q || t.h_.size() != Q * t.num_nodes_)
    throw CacheError("heuristic cache is internally inconsistent");
  return t;
}

void save_heuristic_cache(const HeuristicTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CacheError("cannot write heuristic cache: " + path);
  out << heuristic_cache_to_text(t);
}

HeuristicTable load_heuristic_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CacheError("cannot open heuristic cache: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return heuristic_cache_from_text(buf.str());
}

std::string guidance_to_text(const LlmGuidance& g) {
  json j;
  j["format"] = "sgplan-guidance";
  j["version"] = 1;
  j["plans"] = json::array();
  for (const auto& [key, calls] : g.plans) {
    json jp = {{"attr", key.first}, {"q", key.second}, {"calls", json::array()}};
    for (const auto& c : calls)
      jp["calls"].push_back({{"motion", c.motion}, {"from", c.from_attr}, {"to", c.to_attr}});
    j["plans"].push_back(std::move(jp));
  }
  return j.dump(2) + "\n";
}

LlmGuidance guidance_from_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw CacheError(std::string("guidance parse failure: ") + e.what());
  }
  if (j.value("format", "") != "sgplan-guidance" || j.value("version", 0) != 1)
    throw CacheError("guidance file has an unknown format or version");
  LlmGuidance g;
  try {
    for (const auto& jp : j.at("plans")) {
      std::vector<LlmGuidance::Call> calls;
      for (const auto& jc : jp.at("calls"))
        calls.push_back({jc.at("motion").get<std::string>(), jc.at("from").get<int>(),
                         jc.at("to").get<int>()});
      g.plans[{jp.at("attr").get<int>(), jp.at("q").get<int>()}] = std::move(calls);
    }
  } catch (const json::exception& e) {
    throw CacheError(std::string("guidance schema failure: ") + e.what());
  }
  return g;
}

void save_guidance(const LlmGuidance& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CacheError("cannot write guidance file: " + path);
  out << guidance_to_text(g);
}

LlmGuidance load_guidance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CacheError("cannot open guidance file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return guidance_from_text(buf.str());
}

// ---------------------------------------------------------------------------
// LLM heuristic

int context_attribute(const SceneGraph& g, NodeId node) {
  int room = -1, floor = -1;
  for (int ai : g.attributes_at(node)) {
    const Attribute& a = g.attributes[static_cast<size_t>(ai)];
    if (a.kind == AttrKind::Room && (room == -1 || a.id < room)) room = a.id;
    if (a.kind == AttrKind::Floor && (floor == -1 || a.id < floor)) floor = a.id;
  }
  return room != -1 ? room : floor;
}

double h_llm(const LlmGuidance& guidance, const SceneGraph& g, const ProductState& x) {
  const int ctx = context_attribute(g, x.node);
  if (ctx < 0) return 0;
  auto it = guidance.plans.find({ctx, x.q});
  if (it == guidance.plans.end()) return 0;  // MissingPlan: uninformative, not fatal
  double sum = 0;
  for (const auto& call : it->second) {
    const Attribute* a = g.find_attribute(call.from_attr);
    const Attribute* b = g.find_attribute(call.to_attr);
    if (!a || !b) return 0;  // plans referencing unknown attributes are rejected whole
    sum += g.euclidean(a->center, b->center);
  }
  return sum;
}

std::string remaining_mission(const Dfa& dfa, int q, const SceneGraph& g) {
  auto path = shortest_accepting_path(dfa, q);
  if (!path) return "mission infeasible from current state";
  if (path->empty()) return "";
  std::vector<std::string> props;
  for (const AutomatonStep& step : *path)
    for (const std::string& p : step.label)
      if (std::find(props.begin(), props.end(), p) == props.end()) props.push_back(p);
  std::sort(props.begin(), props.end(), prop_less);

  std::ostringstream out;
  bool first = true;
  for (const std::string& p : props) {
    const Attribute* a = g.find_attribute(std::stoi(p.substr(1)));
    if (!a) continue;
    if (!first) out << " and ";
    out << (a->kind == AttrKind::Object ? "reach the " : "visit the ") << a->name << " "
        << a->id;
    first = false;
  }
  return out.str();
}

LlmGuidance mock_guidance(const HeuristicTable& t, const SceneGraph& g, const Dfa& dfa) {
  // Map a label to its most specific attribute (smallest region, then the
  // finer kind, then smaller id).
  auto label_attr = [&](const LabelSet& l) -> int {
    const Attribute* best = nullptr;
    for (const std::string& p : l) {
      const Attribute* a = g.find_attribute(std::stoi(p.substr(1)));
      if (!a) continue;
      if (!best || a->region.size() < best->region.size() ||
          (a->region.size() == best->region.size() && a->kind < best->kind) ||
          (a->region.size() == best->region.size() && a->kind == best->kind &&
           a->id < best->id))
        best = a;
    }
    return best ? best->id : -1;
  };

  LlmGuidance out;
  for (const Attribute& ctx : g.attributes) {
    if (ctx.kind != AttrKind::Room && ctx.kind != AttrKind::Floor) continue;
    // Representative node: the region node nearest the attribute center.
    size_t rep = g.node_index(ctx.region.front());
    double best_d = kInfDist;
    for (NodeId s : ctx.region) {
      double d = g.euclidean(g.nodes[g.node_index(s)].xyz, ctx.center);
      if (d < best_d) {
        best_d = d;
        rep = g.node_index(s);
      }
    }
    for (int q = 0; q < dfa.num_states(); ++q) {
      if (dfa.is_accepting(q)) continue;
      std::vector<LlmGuidance::Call> calls;
      int l = t.label_id_of_node(rep);
      int cur_q = q;
      int from = ctx.id;
      for (int iter = 0; iter < 4 * dfa.num_states() + 8; ++iter) {
        const int ln = t.next_label(l, cur_q);
        if (ln < 0) break;
        const int nq = dfa.step(cur_q, t.label(ln));
        // Only mission progress earns a call; labels crossed in passing are
        // navigation noise, not semantic targets.
        if (nq != cur_q) {
          const int to = label_attr(t.label(ln));
          if (to >= 0 && to != from) {
            calls.push_back({"move", from, to});
            from = to;
          }
        }
        cur_q = nq;
        l = ln;
        if (dfa.is_accepting(cur_q)) break;
      }
      if (!calls.empty()) out.plans[{ctx.id, q}] = std::move(calls);
    }
  }
  return out;
}

}  // namespace sgplan
