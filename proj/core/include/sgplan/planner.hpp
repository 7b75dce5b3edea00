#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sgplan/heuristics.hpp"

namespace sgplan {

enum class HeurKind { LTL, LLM };

/// One inadmissible search queue: a planning level paired with a heuristic.
/// The anchor queue (level 0, un-inflated h_LTL) always exists implicitly.
struct QueueSpec {
  int level = 0;
  HeurKind heuristic = HeurKind::LTL;
};

struct SearchConfig {
  double w1 = 10.0;   // heuristic inflation for inadmissible queues
  double w2 = 5.0;    // anchor-suspension factor
  double decay = 0.5; // per-iteration multiplicative decay toward 1
  double time_budget = 30.0;  // seconds
  std::vector<QueueSpec> queues;
};

enum class PlanStatus { Optimal, TimedOut, Infeasible };

struct IterationLog {
  double wall_time = 0;  // seconds since plan() start
  double cost = 0;
  double w1 = 1, w2 = 1;
  std::vector<long> expansions;  // per queue; index 0 = anchor
};

struct PlanResult {
  PlanStatus status = PlanStatus::Infeasible;
  std::string diagnosis;          // set for Infeasible
  std::vector<NodeId> path;       // expanded occupancy path s_1..s_T
  double cost = kInfDist;
  Word word;                      // l(s_1)..l(s_T)
  std::vector<IterationLog> iterations;
  bool optimal = false;
  long total_expansions = 0;
};

using PlanCallback = std::function<void(const PlanResult&)>;
using ExpandHook = std::function<void(int queue, const ProductState&)>;

/// Anytime multi-resolution multi-heuristic A*. Emits every improving
/// solution through on_improve (if set) and returns the final result.
PlanResult plan(const PlanningDomain& dom, const HeuristicTable& table,
                const LlmGuidance* guidance, const SearchConfig& cfg,
                const PlanCallback& on_improve = nullptr,
                const ExpandHook& on_expand = nullptr);

/// Expands an abstract product-state path (mixed levels) into the occupancy
/// node sequence, preserving total cost exactly.
std::vector<NodeId> expand_solution(const PlanningDomain& dom,
                                    const std::vector<ProductState>& abstract_path);

enum class CertifyVerdict { Match, CostGap, BothInfeasible, Incomparable };

struct Certification {
  CertifyVerdict verdict = CertifyVerdict::Incomparable;
  double oracle_cost = kInfDist;
  double delta = 0;  // result cost - oracle cost (CostGap)
};

/// Brute-force product-graph Dijkstra over V x Q (scene edges only) compared
/// against the planner's answer. Incomparable above the node cap.
Certification certify_optimal(const PlanResult& result, const PlanningDomain& dom,
                              size_t node_cap = 30000);

/// Serializes a PlanResult to the plan-file text format (node ids, xyz
/// polyline, cost, per-iteration log).
std::string plan_to_text(const PlanResult& r, const SceneGraph& g);

}  // namespace sgplan
