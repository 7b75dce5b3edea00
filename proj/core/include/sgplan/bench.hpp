#pragma once

#include "sgplan/planner.hpp"

namespace sgplan {

/// The seven comparison setups. A* searches the anchor level only; NO-LLM
/// adds every level with the LTL heuristic; ALL additionally runs an LLM
/// queue on every level; OCC/OBJ/ROOM/FLR run the LLM queue on exactly that
/// level (on top of NO-LLM).
std::vector<std::string> bench_setup_names();

SearchConfig setup_config(const std::string& name, const PlanningDomain& dom);
/// Whether the setup consumes LLM guidance at all.
bool setup_uses_llm(const std::string& name);

struct BenchTask {
  const SceneGraph* scene = nullptr;
  std::string scene_name;
  std::string formula;   // prefix notation
  NodeId start = 0;
  std::string setup;
  double time_budget = 30.0;
  const LlmGuidance* guidance = nullptr;  // nullptr => mock guidance when needed
  // Optional weight-schedule override; values <= 0 keep the setup defaults.
  double w1 = 0, w2 = 0, decay = 0;
};

struct BenchRow {
  std::string scene_name, formula, setup;
  NodeId start = 0;
  bool ok = false;
  std::string error;
  PlanStatus status = PlanStatus::Infeasible;
  double first_time = 0, first_cost = kInfDist;
  double opt_time = 0, final_cost = kInfDist;
  long total_expansions = 0;
  std::vector<long> expansions_per_queue;  // summed over iterations; [0] anchor
  int iterations = 0;
};

/// One benchmark row: compile, build, precompute, plan. Failures land in the
/// row's error field; the run continues.
BenchRow run_bench_row(const BenchTask& task);

/// Runs rows in parallel (jobs >= 1); result order matches input order.
std::vector<BenchRow> run_bench(const std::vector<BenchTask>& tasks, int jobs = 1);

/// Versioned CSV: a schema comment line, a fixed header, one line per row.
std::string bench_csv(const std::vector<BenchRow>& rows);

/// Deterministic three-floor benchmark fixture: a 3x3-rooms-per-floor scene
/// with three "zone" attributes placed in room corners away from the
/// door-to-door lines, a three-stage sequencing mission over them, and the
/// weight schedule the comparison runs use.
struct BenchFixture {
  SceneGraph scene;
  std::string scene_name;
  std::string mission;   // natural language
  std::string formula;   // prefix notation
  NodeId start = 0;
  double w1 = 0, w2 = 0, decay = 0;
};
BenchFixture three_floor_fixture();

}  // namespace sgplan
