// sgplan command-line front end: scene generation, hierarchy inspection,
// mission translation, planning, and benchmark runs.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "sgplan/bench.hpp"
#include "sgplan/llm_bridge.hpp"

using namespace sgplan;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;            // transport, I/O, unknown node, parse
constexpr int kExitNeedsRephrase = 2;    // translation gave up
constexpr int kExitInfeasible = 3;       // no accepting plan exists

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Transport selection shared by `translate` and `plan --mission`.
struct TransportOpts {
  std::string replay_path;   // replay a recorded transcript
  std::string record_path;   // record the live exchange here
};

void add_transport_opts(CLI::App* cmd, TransportOpts& t) {
  cmd->add_option("--replay", t.replay_path,
                  "replay a recorded transcript instead of calling a live endpoint");
  cmd->add_option("--record", t.record_path,
                  "record the live exchange to this transcript file");
}

struct TransportStack {
  std::unique_ptr<Transport> base;
  std::unique_ptr<RecordTransport> recorder;
  Transport* active = nullptr;
};

TransportStack make_transport(const TransportOpts& opts) {
  TransportStack s;
  if (!opts.replay_path.empty()) {
    s.base = std::make_unique<ReplayTransport>(load_transcript(opts.replay_path));
  } else {
    s.base = std::make_unique<LiveTransport>(live_config_from_env());
  }
  s.active = s.base.get();
  if (!opts.record_path.empty()) {
    s.recorder = std::make_unique<RecordTransport>(*s.base);
    s.active = s.recorder.get();
  }
  return s;
}

void finish_transport(const TransportStack& s, const TransportOpts& opts) {
  if (s.recorder) save_transcript(s.recorder->transcript(), opts.record_path);
}

int cmd_gen(const std::string& out, const SceneGenSpec& spec, uint64_t seed,
            bool fixture) {
  if (fixture) {
    const BenchFixture f = three_floor_fixture();
    save_scene(f.scene, out);
    std::printf("wrote %s (%zu nodes, benchmark fixture; start=%u formula=%s)\n",
                out.c_str(), f.scene.nodes.size(), f.start, f.formula.c_str());
    return kExitOk;
  }
  const SceneGraph g = generate_scene(spec, seed);
  save_scene(g, out);
  std::printf("wrote %s (%zu nodes, %zu attributes)\n", out.c_str(),
              g.nodes.size(), g.attributes.size());
  return kExitOk;
}

int cmd_hierarchy(const std::string& scene_path, const std::string& out) {
  const SceneGraph g = load_scene(scene_path);
  const std::string text = attribute_hierarchy(g);
  if (out.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_file(out, text);
  return kExitOk;
}

int cmd_translate(const std::string& scene_path, const std::string& mission,
                  const TransportOpts& topts, int max_attempts,
                  const std::string& out, const std::string& automaton_out,
                  const std::string& transcript_out) {
  const SceneGraph g = load_scene(scene_path);
  TransportStack transport = make_transport(topts);
  const TranslationSession session =
      translate(mission, g, *transport.active, max_attempts);
  finish_transport(transport, topts);
  if (!transcript_out.empty()) save_transcript(session.transcript, transcript_out);
  if (session.needs_human_rephrase) {
    std::fprintf(stderr, "translation needs a human rephrase: %s\n",
                 session.diagnostic.c_str());
    return kExitNeedsRephrase;
  }
  if (out.empty())
    std::printf("%s\n", session.formula_text.c_str());
  else
    write_file(out, session.formula_text + "\n");
  if (!automaton_out.empty())
    write_file(automaton_out, automaton_to_text(compile(normalize_formula(session.formula))));
  return kExitOk;
}

int cmd_plan(const std::string& scene_path, std::string formula,
             const std::string& mission, const TransportOpts& topts,
             NodeId start, const std::string& setup, double w1, double w2,
             double decay, double budget, const std::string& guidance_path,
             const std::string& out) {
  const SceneGraph g = load_scene(scene_path);
  if (formula.empty()) {
    TransportStack transport = make_transport(topts);
    const TranslationSession session = translate(mission, g, *transport.active);
    finish_transport(transport, topts);
    if (session.needs_human_rephrase) {
      std::fprintf(stderr, "translation needs a human rephrase: %s\n",
                   session.diagnostic.c_str());
      return kExitNeedsRephrase;
    }
    formula = session.formula_text;
  }
  const Dfa dfa = compile(normalize_formula(parse_prefix(formula, g.alphabet())));
  const PlanningDomain dom = build_domain(g, dfa, start);
  const HeuristicTable table = HeuristicTable::build(g, dfa);

  SearchConfig cfg = setup_config(setup, dom);
  if (cfg.w1 > 1 || cfg.w2 > 1) {
    if (w1 > 0) cfg.w1 = w1;
    if (w2 > 0) cfg.w2 = w2;
    if (decay > 0) cfg.decay = decay;
  }
  cfg.time_budget = budget;

  LlmGuidance guidance;
  const LlmGuidance* gptr = nullptr;
  if (setup_uses_llm(setup)) {
    guidance = guidance_path.empty() ? mock_guidance(table, g, dfa)
                                     : load_guidance(guidance_path);
    gptr = &guidance;
  }

  const PlanResult r = plan(dom, table, gptr, cfg);
  if (r.status == PlanStatus::Infeasible) {
    std::fprintf(stderr, "infeasible: %s\n", r.diagnosis.c_str());
    return kExitInfeasible;
  }
  const std::string text = plan_to_text(r, g);
  if (out.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_file(out, text);
  std::fprintf(stderr, "status=%s cost=%g expansions=%ld iterations=%zu\n",
               r.status == PlanStatus::Optimal ? "optimal" : "timed-out", r.cost,
               r.total_expansions, r.iterations.size());
  return kExitOk;
}

int cmd_bench(const std::string& scene_path, const std::string& formula,
              NodeId start, bool use_fixture, std::vector<std::string> setups,
              int jobs, double budget, double w1, double w2, double decay,
              const std::string& csv_out) {
  SceneGraph loaded;
  BenchFixture fixture;
  const SceneGraph* scene = nullptr;
  BenchTask proto;
  if (use_fixture) {
    fixture = three_floor_fixture();
    scene = &fixture.scene;
    proto.scene_name = fixture.scene_name;
    proto.formula = fixture.formula;
    proto.start = fixture.start;
    proto.w1 = fixture.w1;
    proto.w2 = fixture.w2;
    proto.decay = fixture.decay;
  } else {
    loaded = load_scene(scene_path);
    scene = &loaded;
    proto.scene_name = scene_path;
    proto.formula = formula;
    proto.start = start;
  }
  proto.scene = scene;
  proto.time_budget = budget;
  if (w1 > 0) proto.w1 = w1;
  if (w2 > 0) proto.w2 = w2;
  if (decay > 0) proto.decay = decay;

  if (setups.empty()) setups = bench_setup_names();
  std::vector<BenchTask> tasks;
  for (const auto& s : setups) {
    tasks.push_back(proto);
    tasks.back().setup = s;
  }
  const std::vector<BenchRow> rows = run_bench(tasks, jobs);
  const std::string csv = bench_csv(rows);
  if (csv_out.empty())
    std::fputs(csv.c_str(), stdout);
  else
    write_file(csv_out, csv);
  bool any_error = false;
  for (const auto& r : rows) {
    if (!r.ok) {
      any_error = true;
      std::fprintf(stderr, "%s: %s\n", r.setup.c_str(), r.error.c_str());
    } else {
      std::fprintf(stderr, "%-7s cost=%-10g expansions=%-8ld iterations=%d\n",
                   r.setup.c_str(), r.final_cost, r.total_expansions, r.iterations);
    }
  }
  return any_error ? kExitError : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LTL task planning over hierarchical scene graphs"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic scene");
  SceneGenSpec spec;
  uint64_t seed = 1;
  std::string gen_out;
  bool gen_fixture = false;
  gen->add_option("--out", gen_out, "output scene JSON")->required();
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--floors", spec.floors);
  gen->add_option("--rooms-x", spec.rooms_x);
  gen->add_option("--rooms-y", spec.rooms_y);
  gen->add_option("--room-cells", spec.room_cells);
  gen->add_option("--objects-per-room", spec.objects_per_room);
  gen->add_option("--staircase-room", spec.staircase_room);
  gen->add_flag("--fixture", gen_fixture,
                "emit the deterministic three-floor benchmark fixture instead");

  // hierarchy
  auto* hier = app.add_subcommand("hierarchy", "print a scene's attribute hierarchy");
  std::string hier_scene, hier_out;
  hier->add_option("--scene", hier_scene, "scene JSON")->required();
  hier->add_option("--out", hier_out, "write to file instead of stdout");

  // translate
  auto* tr = app.add_subcommand("translate", "translate a mission to a co-safe formula");
  std::string tr_scene, tr_mission, tr_out, tr_automaton, tr_transcript;
  TransportOpts tr_topts;
  int tr_attempts = 3;
  tr->add_option("--scene", tr_scene, "scene JSON")->required();
  tr->add_option("--mission", tr_mission, "natural-language mission")->required();
  tr->add_option("--max-attempts", tr_attempts, "correction-loop budget");
  tr->add_option("--out", tr_out, "write the formula to this file");
  tr->add_option("--automaton-out", tr_automaton, "write the compiled automaton text");
  tr->add_option("--transcript-out", tr_transcript, "save the session transcript");
  add_transport_opts(tr, tr_topts);

  // plan
  auto* pl = app.add_subcommand("plan", "plan a path satisfying a formula or mission");
  std::string pl_scene, pl_formula, pl_mission, pl_setup = "NO-LLM";
  std::string pl_guidance, pl_out;
  TransportOpts pl_topts;
  NodeId pl_start = 0;
  double pl_w1 = 0, pl_w2 = 0, pl_decay = 0, pl_budget = 30;
  pl->add_option("--scene", pl_scene, "scene JSON")->required();
  auto* fopt = pl->add_option("--formula", pl_formula, "prefix-notation formula");
  pl->add_option("--mission", pl_mission, "mission to translate first")->excludes(fopt);
  pl->add_option("--start", pl_start, "start node id")->required();
  pl->add_option("--setup", pl_setup, "A*, NO-LLM, ALL, OCC, OBJ, ROOM or FLR");
  pl->add_option("--w1", pl_w1, "initial heuristic inflation override");
  pl->add_option("--w2", pl_w2, "anchor-suspension factor override");
  pl->add_option("--decay", pl_decay, "per-iteration weight decay override");
  pl->add_option("--budget", pl_budget, "time budget, seconds");
  pl->add_option("--guidance", pl_guidance, "guidance file (default: mock guidance)");
  pl->add_option("--out", pl_out, "write the plan to this file");
  add_transport_opts(pl, pl_topts);

  // bench
  auto* be = app.add_subcommand("bench", "run the setup comparison, emit CSV");
  std::string be_scene, be_formula, be_csv;
  std::vector<std::string> be_setups;
  NodeId be_start = 0;
  bool be_fixture = false;
  int be_jobs = 1;
  double be_w1 = 0, be_w2 = 0, be_decay = 0, be_budget = 60;
  auto* be_scene_opt = be->add_option("--scene", be_scene, "scene JSON");
  be->add_option("--formula", be_formula, "prefix-notation formula");
  be->add_option("--start", be_start, "start node id");
  be->add_flag("--fixture", be_fixture, "use the built-in three-floor fixture")
      ->excludes(be_scene_opt);
  be->add_option("--setups", be_setups, "subset of setups (default: all)");
  be->add_option("--jobs", be_jobs, "parallel rows");
  be->add_option("--budget", be_budget, "per-row time budget, seconds");
  be->add_option("--w1", be_w1);
  be->add_option("--w2", be_w2);
  be->add_option("--decay", be_decay);
  be->add_option("--csv", be_csv, "write CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen_out, spec, seed, gen_fixture);
    if (hier->parsed()) return cmd_hierarchy(hier_scene, hier_out);
    if (tr->parsed())
      return cmd_translate(tr_scene, tr_mission, tr_topts, tr_attempts, tr_out,
                           tr_automaton, tr_transcript);
    if (pl->parsed()) {
      if (pl_formula.empty() && pl_mission.empty())
        throw CLI::RequiredError("--formula or --mission");
      return cmd_plan(pl_scene, pl_formula, pl_mission, pl_topts, pl_start,
                      pl_setup, pl_w1, pl_w2, pl_decay, pl_budget, pl_guidance,
                      pl_out);
    }
    if (be->parsed()) {
      if (!be_fixture && (be_scene.empty() || be_formula.empty()))
        throw CLI::RequiredError("--fixture or --scene/--formula/--start");
      return cmd_bench(be_scene, be_formula, be_start, be_fixture, be_setups,
                       be_jobs, be_budget, be_w1, be_w2, be_decay, be_csv);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }
  return kExitError;
}
