#include <chrono>
#include <iostream>

#include "commands.hpp"
#include "output.hpp"
#include "skelnav/errors.hpp"
#include "skelnav/geometry.hpp"
#include "skelnav/map_io.hpp"
#include "skelnav/navmetrics.hpp"
#include "skelnav/svg.hpp"

namespace skelnav::cli {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Point cell_arg(const std::vector<int>& xy, const OccupancyGrid& grid, const char* what) {
  if (!grid.in_bounds(xy[0], xy[1])) {
    throw OutOfBounds(std::string(what) + " cell " + std::to_string(xy[0]) + "," + std::to_string(xy[1]) +
                      " is outside the map");
  }
  return cell_center(xy[0], xy[1]);
}

}  // namespace

int cmd_skeletonize(const Globals& g, const SkeletonizeArgs& a) {
  const auto planner = resolve_planner(a.planner.planner, a.planner);
  const auto ctx = MapContext::from_grid(read_map_file(a.map));
  const auto mask = skeletonize(planner.kind, ctx, planner.options);

  GrayImage img{mask.width(), mask.height(), {}};
  img.pixels.resize(static_cast<std::size_t>(mask.width()) * static_cast<std::size_t>(mask.height()), 0);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y)) img.pixels[static_cast<std::size_t>(y * mask.width() + x)] = 255;
    }
  }
  write_file(a.out, encode_gray(img, format_for_path(a.out)));

  auto m = make_manifest(g, "skeletonize");
  m["map"] = a.map.string();
  m["method"] = a.planner.planner;
  m["planner_options"] = planner_json(a.planner);
  write_manifest(manifest_beside(a.out), m);

  Report(g.porcelain).add("method", a.planner.planner).add("pixels", mask.count()).add("out", a.out.string()).print();
  return kExitOk;
}

int cmd_build_roadmap(const Globals& g, const BuildRoadmapArgs& a) {
  const auto planner = resolve_planner(a.planner.planner, a.planner);
  if (!is_roadmap_planner(planner.kind)) throw ValueError("grid A* has no roadmap to build");
  const auto ctx = MapContext::from_grid(read_map_file(a.map));

  const auto t0 = std::chrono::steady_clock::now();
  const auto mask = skeletonize(planner.kind, ctx, planner.options);
  const double skel_seconds = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  const auto roadmap =
      build_graph(mask, ctx.grid, ctx.obstacles, BuildOptions{planner.options.k_nearest, planner.options.stride});
  const double graph_seconds = seconds_since(t1);

  write_text_file(a.out, format_roadmap(roadmap));
  if (!a.svg.empty()) {
    MapLayers layers;
    layers.skeleton = &mask;
    layers.roadmap = &roadmap;
    write_text_file(a.svg, render_map_svg(ctx.grid, layers));
  }

  auto m = make_manifest(g, "build-roadmap");
  m["map"] = a.map.string();
  m["planner"] = planner_report_name(planner.kind);
  m["planner_options"] = planner_json(a.planner);
  m["fingerprint"] = roadmap.fingerprint();
  write_manifest(manifest_beside(a.out), m);

  Report(g.porcelain)
      .add("planner", planner_report_name(planner.kind))
      .add("skeleton_pixels", mask.count())
      .add("vertices", roadmap.vertex_count())
      .add("edges", roadmap.edge_count())
      .add("components", component_count(roadmap))
      .add("skeleton_seconds", skel_seconds)
      .add("graph_seconds", graph_seconds)
      .add("out", a.out.string())
      .print();
  return kExitOk;
}

int cmd_plan(const Globals& g, const PlanArgs& a) {
  const auto planner = resolve_planner(a.planner.planner, a.planner);
  const auto ctx = MapContext::from_grid(read_map_file(a.map));
  const Query query{cell_arg(a.start, ctx.grid, "start"), cell_arg(a.goal, ctx.grid, "goal")};

  PreparedPlanner prepared;
  bool reused = false;
  if (!a.roadmap.empty()) {
    if (!is_roadmap_planner(planner.kind)) throw ValueError("--roadmap needs a roadmap planner");
    const auto bytes = read_file(a.roadmap);
    prepared = PreparedPlanner::from_roadmap(planner.kind, parse_roadmap(std::string(bytes.begin(), bytes.end())));
    reused = true;
  } else {
    prepared = PreparedPlanner::prepare(planner.kind, ctx, planner.options);
  }

  const auto t0 = std::chrono::steady_clock::now();
  const auto path = prepared.plan(ctx, query);
  const double online = seconds_since(t0);
  const auto metrics = evaluate_path(path, query, ctx, a.scope);

  if (!a.out.empty()) {
    write_text_file(a.out, format_path(path));
    auto m = make_manifest(g, "plan");
    m["map"] = a.map.string();
    m["planner"] = planner_report_name(planner.kind);
    m["planner_options"] = planner_json(a.planner);
    m["start"] = a.start;
    m["goal"] = a.goal;
    m["roadmap"] = a.roadmap.string();
    m["scope"] = a.scope;
    write_manifest(manifest_beside(a.out), m);
  }
  if (!a.svg.empty()) {
    MapLayers layers;
    if (prepared.roadmap()) layers.roadmap = &*prepared.roadmap();
    layers.lines.push_back({path.waypoints, "red", 0.3});
    layers.markers.push_back({query.start, "green", 0.5});
    layers.markers.push_back({query.goal, "blue", 0.5});
    write_text_file(a.svg, render_map_svg(ctx.grid, layers));
  }

  Report r(g.porcelain);
  r.add("planner", planner_report_name(planner.kind))
      .add("length", path.length)
      .add("waypoints", path.waypoints.size())
      .add("roadmap_reused", std::string(reused ? "yes" : "no"));
  if (!reused && prepared.roadmap()) r.add("offline_seconds", prepared.offline_seconds());
  r.add("online_seconds", online);
  for (std::size_t i = 0; i < kMetricNames.size(); ++i) r.add(kMetricNames[i], metric_value(metrics, i));
  r.print();
  return kExitOk;
}

int cmd_obstacles(const Globals&, const ObstaclesArgs& a) {
  const auto obstacles = extract_obstacles(read_map_file(a.map));
  const auto text = format_obstacles(obstacles);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_text_file(a.out, text);
  }
  return kExitOk;
}

}  // namespace skelnav::cli
