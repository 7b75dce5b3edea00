// Microbenchmarks for the hot paths: formula compilation, heuristic-table
// precomputation, and a full planner run on a mid-size scene.

#include <benchmark/benchmark.h>

#include "sgplan/bench.hpp"

using namespace sgplan;

namespace {

SceneGraph mid_scene() {
  SceneGenSpec sp;
  sp.floors = 2;
  sp.rooms_x = 3;
  sp.rooms_y = 2;
  sp.room_cells = 8;
  sp.objects_per_room = 2;
  return generate_scene(sp, 21);
}

std::string mission_formula(const SceneGraph& g) {
  std::vector<int> objs;
  for (const auto& a : g.attributes)
    if (a.kind == AttrKind::Object) objs.push_back(a.id);
  return "F & p" + std::to_string(objs.at(0)) + " F p" + std::to_string(objs.at(1));
}

void bm_compile(benchmark::State& state) {
  const SceneGraph g = mid_scene();
  const LtlPtr f = parse_prefix(mission_formula(g), g.alphabet());
  for (auto _ : state) benchmark::DoNotOptimize(compile(normalize_formula(f)));
}
BENCHMARK(bm_compile);

void bm_heuristic_table(benchmark::State& state) {
  const SceneGraph g = mid_scene();
  const Dfa dfa =
      compile(normalize_formula(parse_prefix(mission_formula(g), g.alphabet())));
  for (auto _ : state) benchmark::DoNotOptimize(HeuristicTable::build(g, dfa));
}
BENCHMARK(bm_heuristic_table)->Unit(benchmark::kMillisecond);

void bm_plan(benchmark::State& state) {
  const SceneGraph g = mid_scene();
  const Dfa dfa =
      compile(normalize_formula(parse_prefix(mission_formula(g), g.alphabet())));
  const PlanningDomain dom = build_domain(g, dfa, g.nodes.front().id);
  const HeuristicTable table = HeuristicTable::build(g, dfa);
  const std::string setup = state.range(0) ? "ALL" : "NO-LLM";
  const SearchConfig cfg = setup_config(setup, dom);
  LlmGuidance guid;
  if (setup_uses_llm(setup)) guid = mock_guidance(table, g, dfa);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        plan(dom, table, setup_uses_llm(setup) ? &guid : nullptr, cfg));
  }
}
BENCHMARK(bm_plan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void bm_scene_generation(benchmark::State& state) {
  SceneGenSpec sp;
  sp.floors = 3;
  sp.rooms_x = 3;
  sp.rooms_y = 3;
  sp.room_cells = 10;
  sp.objects_per_room = 2;
  for (auto _ : state) benchmark::DoNotOptimize(generate_scene(sp, 9));
}
BENCHMARK(bm_scene_generation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
