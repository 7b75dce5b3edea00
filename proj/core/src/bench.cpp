#include "sgplan/bench.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <thread>

namespace sgplan {

namespace {

// Domain level index for one attribute kind, or -1 when the scene lacks it.
int level_of_kind(const PlanningDomain& dom, AttrKind kind) {
  for (int k = 1; k < dom.num_levels(); ++k)
    if (dom.level(k).kind == kind && dom.level(k).custom_kind.empty()) return k;
  return -1;
}

void add_all_levels(SearchConfig& cfg, const PlanningDomain& dom, HeurKind h) {
  for (int k = 0; k < dom.num_levels(); ++k) cfg.queues.push_back({k, h});
}

}  // namespace

std::vector<std::string> bench_setup_names() {
  return {"ALL", "OCC", "OBJ", "ROOM", "FLR", "NO-LLM", "A*"};
}

bool setup_uses_llm(const std::string& name) {
  return name == "ALL" || name == "OCC" || name == "OBJ" || name == "ROOM" || name == "FLR";
}

SearchConfig setup_config(const std::string& name, const PlanningDomain& dom) {
  SearchConfig cfg;
  if (name == "A*") {
    cfg.w1 = cfg.w2 = 1;
    cfg.decay = 1;
    return cfg;
  }
  add_all_levels(cfg, dom, HeurKind::LTL);
  if (name == "NO-LLM") return cfg;
  if (name == "ALL") {
    add_all_levels(cfg, dom, HeurKind::LLM);
    return cfg;
  }
  int k = -1;
  if (name == "OCC") k = 0;
  else if (name == "OBJ") k = level_of_kind(dom, AttrKind::Object);
  else if (name == "ROOM") k = level_of_kind(dom, AttrKind::Room);
  else if (name == "FLR") k = level_of_kind(dom, AttrKind::Floor);
  else throw std::invalid_argument("unknown setup: " + name);
  if (k < 0) throw std::invalid_argument("setup " + name + ": scene has no such level");
  cfg.queues.push_back({k, HeurKind::LLM});
  return cfg;
}

BenchRow run_bench_row(const BenchTask& task) {
  BenchRow row;
  row.scene_name = task.scene_name;
  row.formula = task.formula;
  row.setup = task.setup;
  row.start = task.start;
  try {
    const SceneGraph& g = *task.scene;
    const Dfa dfa = compile(normalize_formula(parse_prefix(task.formula, g.alphabet())));
    const PlanningDomain dom = build_domain(g, dfa, task.start);
    const HeuristicTable table = HeuristicTable::build(g, dfa);

    SearchConfig cfg = setup_config(task.setup, dom);
    cfg.time_budget = task.time_budget;
    // A weight override only applies to anytime setups: A* stays w1=w2=1.
    if (cfg.w1 > 1 || cfg.w2 > 1) {
      if (task.w1 > 0) cfg.w1 = task.w1;
      if (task.w2 > 0) cfg.w2 = task.w2;
      if (task.decay > 0) cfg.decay = task.decay;
    }

    LlmGuidance mocked;
    const LlmGuidance* guidance = nullptr;
    if (setup_uses_llm(task.setup)) {
      if (task.guidance) {
        guidance = task.guidance;
      } else {
        mocked = mock_guidance(table, g, dfa);
        guidance = &mocked;
      }
    }

    const PlanResult r = plan(dom, table, guidance, cfg);
    row.ok = true;
    row.status = r.status;
    row.final_cost = r.cost;
    row.total_expansions = r.total_expansions;
    row.iterations = static_cast<int>(r.iterations.size());
    for (const IterationLog& it : r.iterations) {
      if (row.expansions_per_queue.size() < it.expansions.size())
        row.expansions_per_queue.resize(it.expansions.size(), 0);
      for (size_t i = 0; i < it.expansions.size(); ++i)
        row.expansions_per_queue[i] += it.expansions[i];
      if (row.first_cost == kInfDist && it.cost < kInfDist) {
        row.first_cost = it.cost;
        row.first_time = it.wall_time;
      }
      row.opt_time = it.wall_time;
    }
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

std::vector<BenchRow> run_bench(const std::vector<BenchTask>& tasks, int jobs) {
  if (jobs < 1) throw std::invalid_argument("run_bench: jobs must be >= 1");
  std::vector<BenchRow> rows(tasks.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1))
      rows[i] = run_bench_row(tasks[i]);
  };
  std::vector<std::thread> pool;
  const size_t n = std::min<size_t>(static_cast<size_t>(jobs), tasks.size());
  for (size_t i = 0; i + 1 < n; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "# sgplan-bench csv v1\n";
  out << "scene,formula,start,setup,ok,status,first_time,first_cost,opt_time,"
         "final_cost,cost_ratio,total_expansions,expansions_per_queue,iterations,error\n";
  auto num = [](double v) { return v == kInfDist ? std::string("inf") : std::to_string(v); };
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  for (const BenchRow& r : rows) {
    const char* status = r.status == PlanStatus::Optimal     ? "optimal"
                         : r.status == PlanStatus::TimedOut  ? "timed-out"
                                                             : "infeasible";
    std::string per_queue;
    for (size_t i = 0; i < r.expansions_per_queue.size(); ++i)
      per_queue += (i ? ";" : "") + std::to_string(r.expansions_per_queue[i]);
    const double ratio =
        r.first_cost < kInfDist && r.final_cost > 0 ? r.first_cost / r.final_cost : 0;
    out << quote(r.scene_name) << ',' << quote(r.formula) << ',' << r.start << ','
        << quote(r.setup) << ',' << (r.ok ? 1 : 0) << ',' << status << ','
        << num(r.first_time) << ',' << num(r.first_cost) << ',' << num(r.opt_time) << ','
        << num(r.final_cost) << ',' << ratio << ',' << r.total_expansions << ','
        << quote(per_queue) << ',' << r.iterations << ',' << quote(r.error) << '\n';
  }
  return out.str();
}

namespace {

// Twelve cells of `room` nearest the corner selected by the signs of
// (cx, cy); corners keep the stage blocks off the door-to-door lines, so
// coarse-level shortcut paths do not cross them by accident.
std::vector<NodeId> corner_block(const SceneGraph& g, const Attribute& room,
                                 double cx, double cy) {
  double lox = kInfDist, hix = -kInfDist, loy = kInfDist, hiy = -kInfDist;
  for (NodeId n : room.region) {
    const auto& p = g.nodes[g.node_index(n)].xyz;
    lox = std::min(lox, p[0]);
    hix = std::max(hix, p[0]);
    loy = std::min(loy, p[1]);
    hiy = std::max(hiy, p[1]);
  }
  const double tx = cx > 0 ? hix : lox, ty = cy > 0 ? hiy : loy;
  std::vector<std::pair<double, NodeId>> byd;
  for (NodeId n : room.region) {
    const auto& p = g.nodes[g.node_index(n)].xyz;
    const double ex = p[0] - tx, ey = p[1] - ty;
    byd.emplace_back(ex * ex + ey * ey, n);
  }
  std::sort(byd.begin(), byd.end());
  if (byd.size() > 12) byd.resize(12);
  std::vector<NodeId> out;
  for (const auto& [d, n] : byd) out.push_back(n);
  return out;
}

}  // namespace

BenchFixture three_floor_fixture() {
  SceneGenSpec sp;
  sp.floors = 3;
  sp.rooms_x = 3;
  sp.rooms_y = 3;
  sp.room_cells = 14;
  sp.objects_per_room = 2;
  sp.staircase_room = 4;
  SceneGraph g = generate_scene(sp, 7);

  // Floor-0 rooms arranged row-major by center coordinates.
  std::vector<const Attribute*> f0;
  for (const auto& a : g.attributes)
    if (a.kind == AttrKind::Room && !a.region.empty() &&
        g.nodes[g.node_index(a.region[0])].floor == 0)
      f0.push_back(&a);
  std::sort(f0.begin(), f0.end(), [](const Attribute* a, const Attribute* b) {
    if (a->center[1] != b->center[1]) return a->center[1] < b->center[1];
    return a->center[0] < b->center[0];
  });
  const auto room_at = [&](int row, int col) { return f0[row * 3 + col]; };

  const auto make_zone = [&](int id, const char* name, int row, int col,
                             double cx, double cy) {
    Attribute z;
    z.id = id;
    z.name = name;
    z.kind = AttrKind::Custom;
    z.custom_kind = "zone";
    z.region = corner_block(g, *room_at(row, col), cx, cy);
    return z;
  };
  // Build everything that reads the room pointers before the push_backs
  // below invalidate them.
  Attribute za = make_zone(901, "loading dock", 0, 1, -1, -1);
  Attribute zb = make_zone(902, "inspection bay", 0, 2, +1, -1);
  Attribute zc = make_zone(903, "dispatch desk", 1, 2, +1, +1);
  const std::array<double, 3> sc = room_at(1, 1)->center;
  g.attributes.push_back(std::move(za));
  g.attributes.push_back(std::move(zb));
  g.attributes.push_back(std::move(zc));
  g.finalize();

  // Start near the center of the middle floor-0 room.
  NodeId start = 0;
  double best = kInfDist;
  for (const auto& n : g.nodes) {
    if (n.floor != 0) continue;
    const double dx = n.xyz[0] - sc[0], dy = n.xyz[1] - sc[1];
    if (dx * dx + dy * dy < best) {
      best = dx * dx + dy * dy;
      start = n.id;
    }
  }

  BenchFixture f;
  f.scene = std::move(g);
  f.scene_name = "three-floor";
  f.mission =
      "go to the loading dock 901, then the inspection bay 902, then reach "
      "the dispatch desk 903";
  f.formula = "F & p901 F & p902 F p903";
  f.start = start;
  f.w1 = 20;
  f.w2 = 20;
  f.decay = 0.45;
  return f;
}

}  // namespace sgplan
