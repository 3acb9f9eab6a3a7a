// skelnav: corpus generation, skeletonization, roadmap planning,
// benchmarking and execution simulation from the command line.

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "commands.hpp"
#include "output.hpp"
#include "skelnav/errors.hpp"
#include "skelnav/map_io.hpp"

namespace skelnav::cli {
namespace {

void add_planner_flags(CLI::App* cmd, PlannerFlags& f, bool with_planner) {
  if (with_planner) {
    cmd->add_option("--planner", f.planner, "skelunet | zhangsuen | ma | astar")
        ->check(CLI::IsMember({"skelunet", "zhangsuen", "ma", "astar"}))
        ->capture_default_str();
  }
  cmd->add_option("--k", f.k, "Nearest neighbours tried per roadmap vertex")->capture_default_str();
  cmd->add_option("--tau", f.tau, "SkelUnet probability threshold")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cmd->add_option("--samples", f.samples, "Medial-axis sample count")->capture_default_str();
  cmd->add_option("--stride", f.stride, "Keep every n-th skeleton pixel as a vertex")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Seed for sampling-based skeletons")->capture_default_str();
  cmd->add_option("--weights", f.weights, "SKLW weight file (skelunet planner)");
}

int run(std::vector<std::string> args);

int rerun(const std::string& manifest_path) {
  const auto text = read_file(manifest_path);
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(manifest_path + ": " + e.what());
  }
  if (!m.contains("argv") || !m["argv"].is_array()) throw FormatError(manifest_path + ": no argv entry");
  auto args = m["argv"].get<std::vector<std::string>>();
  if (m.contains("cwd")) fs::current_path(m["cwd"].get<std::string>());
  log("rerunning: skelnav " + [&] {
    std::string s;
    for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
    return s;
  }());
  return run(std::move(args));
}

int run(std::vector<std::string> args) {
  CLI::App app{"skelnav: skeleton-roadmap path planning toolkit"};
  app.set_version_flag("--version", std::string(SKELNAV_VERSION));
  app.require_subcommand(1);
  Globals g;
  g.argv = args;
  app.add_flag("--porcelain", g.porcelain, "Machine-readable key=value results on standard output");

  GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Generate a corpus of dungeon maps");
  c_gen->add_option("--count", gen.count, "Number of maps")->capture_default_str();
  c_gen->add_option("--out", gen.out, "Output directory")->required();
  c_gen->add_option("--seed", gen.seed, "Corpus master seed")->capture_default_str();
  c_gen->add_option("--width", gen.width)->capture_default_str();
  c_gen->add_option("--height", gen.height)->capture_default_str();
  c_gen->add_option("--rooms-min", gen.rooms_min)->capture_default_str();
  c_gen->add_option("--rooms-max", gen.rooms_max)->capture_default_str();
  c_gen->add_option("--room-size-min", gen.room_size_min)->capture_default_str();
  c_gen->add_option("--room-size-max", gen.room_size_max)->capture_default_str();
  c_gen->add_option("--corridor-width", gen.corridor_width)->capture_default_str();
  c_gen->add_option("--retry-budget", gen.retry_budget)->capture_default_str();

  SkeletonizeArgs sk;
  sk.planner.planner = "zhangsuen";
  auto* c_sk = app.add_subcommand("skeletonize", "Write the skeleton mask of a map (255 = skeleton)");
  c_sk->add_option("--map", sk.map)->required();
  c_sk->add_option("--out", sk.out, "Mask image (.pgm or .png)")->required();
  c_sk->add_option("--method", sk.planner.planner, "zhangsuen | ma | skelunet")
      ->check(CLI::IsMember({"skelunet", "zhangsuen", "ma"}))
      ->capture_default_str();
  add_planner_flags(c_sk, sk.planner, false);

  BuildRoadmapArgs br;
  auto* c_br = app.add_subcommand("build-roadmap", "Offline stage: skeletonize and write the roadmap graph");
  c_br->add_option("--map", br.map)->required();
  c_br->add_option("--out", br.out, "Roadmap text file")->required();
  c_br->add_option("--svg", br.svg, "Optional drawing of the roadmap");
  add_planner_flags(c_br, br.planner, true);

  PlanArgs pl;
  auto* c_pl = app.add_subcommand("plan", "Answer one start/goal query");
  c_pl->add_option("--map", pl.map)->required();
  c_pl->add_option("--start", pl.start, "Start cell X,Y")->required()->delimiter(',')->expected(2);
  c_pl->add_option("--goal", pl.goal, "Goal cell X,Y")->required()->delimiter(',')->expected(2);
  c_pl->add_option("--roadmap", pl.roadmap, "Reuse a roadmap written by build-roadmap");
  c_pl->add_option("--out", pl.out, "Path file");
  c_pl->add_option("--svg", pl.svg, "Path overlay drawing");
  c_pl->add_option("--scope", pl.scope, "Dispersion ray scope in cells")->capture_default_str();
  add_planner_flags(c_pl, pl.planner, true);

  BenchmarkArgs bm;
  auto* c_bm = app.add_subcommand("benchmark", "Compare planners over a map corpus");
  c_bm->add_option("--corpus", bm.corpus, "Directory of .pgm/.png maps")->required();
  c_bm->add_option("--out", bm.out, "Output directory")->required();
  c_bm->add_option("--planner", bm.planners, "Planners to compare (repeat or comma-separate)")
      ->delimiter(',')
      ->check(CLI::IsMember({"skelunet", "zhangsuen", "ma", "astar"}));
  c_bm->add_option("--queries", bm.queries, "Queries per map")->capture_default_str();
  c_bm->add_option("--limit", bm.limit, "Use only the first N maps (0 = all)")->capture_default_str();
  c_bm->add_option("--scope", bm.scope, "Dispersion ray scope in cells")->capture_default_str();
  c_bm->add_option("--jobs", bm.jobs, "Maps evaluated in parallel")->capture_default_str();
  c_bm->add_flag("!--no-svg", bm.svg, "Skip the per-metric box plots");
  add_planner_flags(c_bm, bm.planner, false);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Track a path with the noisy PID robot and audit collisions");
  c_sim->add_option("--map", sim.map)->required();
  c_sim->add_option("--path", sim.path, "Path file written by plan")->required();
  c_sim->add_option("--out", sim.out, "Trajectory CSV");
  c_sim->add_option("--svg", sim.svg, "Planned vs executed drawing");
  c_sim->add_option("--noise", sim.noise, "Position noise sigma in meters")->capture_default_str();
  c_sim->add_option("--dt", sim.dt, "Control period in seconds")->capture_default_str();
  c_sim->add_option("--cell-size", sim.cell_size, "Meters per cell")->capture_default_str();
  c_sim->add_option("--footprint", sim.footprint, "Footprint radius in meters")->capture_default_str();
  c_sim->add_option("--seed", sim.seed)->capture_default_str();

  ObstaclesArgs ob;
  auto* c_ob = app.add_subcommand("obstacles", "Export obstacle polygons");
  c_ob->add_option("--map", ob.map)->required();
  c_ob->add_option("--out", ob.out, "Output file (standard output when omitted)");

  std::string manifest;
  auto* c_re = app.add_subcommand("rerun", "Repeat the run recorded in a manifest");
  c_re->add_option("manifest", manifest)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*c_gen) return cmd_generate(g, gen);
  if (*c_sk) return cmd_skeletonize(g, sk);
  if (*c_br) return cmd_build_roadmap(g, br);
  if (*c_pl) return cmd_plan(g, pl);
  if (*c_bm) return cmd_benchmark(g, bm);
  if (*c_sim) return cmd_simulate(g, sim);
  if (*c_ob) return cmd_obstacles(g, ob);
  if (*c_re) return rerun(manifest);
  return kExitUsage;
}

}  // namespace
}  // namespace skelnav::cli

int main(int argc, char** argv) {
  using namespace skelnav;
  using namespace skelnav::cli;
  try {
    return run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const NoPath& e) {
    log(std::string("no path: ") + e.what());
    return kExitNoPath;
  } catch (const UnconnectableStart& e) {
    log(std::string("unconnectable start: ") + e.what());
    return kExitUnconnectable;
  } catch (const UnconnectableGoal& e) {
    log(std::string("unconnectable goal: ") + e.what());
    return kExitUnconnectable;
  } catch (const EmptyCorpus& e) {
    log(std::string("empty corpus: ") + e.what());
    return kExitIo;
  } catch (const IoError& e) {
    log(std::string("i/o error: ") + e.what());
    return kExitIo;
  } catch (const FormatError& e) {
    log(std::string("bad input: ") + e.what());
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    log(std::string("i/o error: ") + e.what());
    return kExitIo;
  } catch (const Error& e) {
    log(e.what());
    return kExitUsage;
  }
}
