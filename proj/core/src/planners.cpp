#include "skelnav/planners.hpp"

#include <chrono>

#include "skelnav/errors.hpp"

namespace skelnav {

MapContext MapContext::from_grid(OccupancyGrid grid) {
  MapContext ctx;
  ctx.field = distance_transform(grid);
  ctx.obstacles = extract_obstacles(grid);
  ctx.grid = std::move(grid);
  return ctx;
}

PlannerKind parse_planner(std::string_view name) {
  if (name == "skelunet" || name == "skelunet-roadmap") return PlannerKind::SkelUnet;
  if (name == "zhangsuen" || name == "zhangsuen-roadmap") return PlannerKind::ZhangSuen;
  if (name == "ma" || name == "ma-roadmap") return PlannerKind::MedialAxis;
  if (name == "astar" || name == "grid-astar") return PlannerKind::GridAStar;
  throw ValueError("unknown planner '" + std::string(name) + "'");
}

std::string planner_report_name(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::SkelUnet: return "skelunet-roadmap";
    case PlannerKind::ZhangSuen: return "zhangsuen-roadmap";
    case PlannerKind::MedialAxis: return "ma-roadmap";
    case PlannerKind::GridAStar: return "grid-astar";
  }
  return "?";
}

std::string planner_cli_name(PlannerKind kind) {
  switch (kind) {
    case PlannerKind::SkelUnet: return "skelunet";
    case PlannerKind::ZhangSuen: return "zhangsuen";
    case PlannerKind::MedialAxis: return "ma";
    case PlannerKind::GridAStar: return "astar";
  }
  return "?";
}

bool is_roadmap_planner(PlannerKind kind) { return kind != PlannerKind::GridAStar; }

SkeletonMask skeletonize(PlannerKind kind, const MapContext& ctx, const PlannerOptions& options) {
  switch (kind) {
    case PlannerKind::ZhangSuen:
      return zhang_suen(ctx.grid);
    case PlannerKind::MedialAxis: {
      const auto samples = sample_free(ctx.grid, options.ma_samples, options.seed);
      return samples_to_mask(ma_filter(ma_retract(samples, ctx.field), ctx.field), ctx.grid);
    }
    case PlannerKind::SkelUnet: {
      if (!options.weights) throw ValueError("the skelunet planner needs network weights");
      return apply_threshold(forward(*options.weights, ctx.grid), options.tau, ctx.grid);
    }
    case PlannerKind::GridAStar:
      break;
  }
  throw ValueError("grid A* has no skeleton");
}

PreparedPlanner PreparedPlanner::prepare(PlannerKind kind, const MapContext& ctx, const PlannerOptions& options) {
  PreparedPlanner p;
  p.kind_ = kind;
  if (!is_roadmap_planner(kind)) return p;
  const auto t0 = std::chrono::steady_clock::now();
  const auto mask = skeletonize(kind, ctx, options);
  p.roadmap_ = build_graph(mask, ctx.grid, ctx.obstacles, BuildOptions{options.k_nearest, options.stride});
  p.offline_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return p;
}

PreparedPlanner PreparedPlanner::from_roadmap(PlannerKind kind, Roadmap roadmap) {
  PreparedPlanner p;
  p.kind_ = kind;
  p.roadmap_ = std::move(roadmap);
  return p;
}

Path PreparedPlanner::plan(const MapContext& ctx, const Query& query) const {
  if (!roadmap_) return grid_astar(ctx.grid, query);
  return path_search(connect_query(*roadmap_, query, ctx.obstacles));
}

}  // namespace skelnav
