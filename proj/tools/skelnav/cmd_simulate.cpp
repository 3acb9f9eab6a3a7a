#include "commands.hpp"
#include "output.hpp"
#include "skelnav/map_io.hpp"
#include "skelnav/simexec.hpp"
#include "skelnav/svg.hpp"

namespace skelnav::cli {

int cmd_simulate(const Globals& g, const SimulateArgs& a) {
  const auto grid = read_map_file(a.map);
  const auto field = distance_transform(grid);
  const auto bytes = read_file(a.path);
  const auto path = parse_path(std::string(bytes.begin(), bytes.end()));

  RobotParams robot;
  robot.cell_size = a.cell_size;
  robot.footprint_radius = a.footprint;
  TrackOptions opts;
  opts.noise_sigma = a.noise;
  opts.dt = a.dt;
  opts.seed = a.seed;

  const auto traj = track(path, robot, default_gains(), opts);
  const auto risk = audit_collisions(traj, grid, field, robot);
  if (traj.timed_out) log("tracking timed out; the trajectory is partial");

  if (!a.out.empty()) {
    write_text_file(a.out, format_trajectory_csv(traj, risk));
    auto m = make_manifest(g, "simulate");
    m["map"] = a.map.string();
    m["path"] = a.path.string();
    m["noise"] = a.noise;
    m["dt"] = a.dt;
    m["cell_size"] = a.cell_size;
    m["footprint"] = a.footprint;
    m["seed"] = a.seed;
    write_manifest(manifest_beside(a.out), m);
  }
  if (!a.svg.empty()) write_text_file(a.svg, render_execution_svg(grid, path, traj, risk));

  Report(g.porcelain)
      .add("samples", traj.samples.size())
      .add("duration", traj.samples.back().t)
      .add("timed_out", std::string(traj.timed_out ? "yes" : "no"))
      .add("risk_threshold_cells", risk.threshold_cells)
      .add("risk", risk.risk_count)
      .add("collisions", risk.collision_count)
      .add("risk_fraction", risk.risk_fraction)
      .add("collision_fraction", risk.collision_fraction)
      .print();
  return kExitOk;
}

}  // namespace skelnav::cli
