#pragma once

// Planner front-end shared by the CLI and the benchmark harness: prepares
// the offline structures for one map and answers queries against them.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "skelnav/geometry.hpp"
#include "skelnav/grid.hpp"
#include "skelnav/neuroskel.hpp"
#include "skelnav/roadmap.hpp"
#include "skelnav/skeleton.hpp"

namespace skelnav {

/// Per-map derived data every planner and metric needs.
struct MapContext {
  OccupancyGrid grid;
  ClearanceField field;
  ObstacleSet obstacles;

  static MapContext from_grid(OccupancyGrid grid);
};

enum class PlannerKind { SkelUnet, ZhangSuen, MedialAxis, GridAStar };

/// Accepts the short CLI names (skelunet, zhangsuen, ma, astar) and the
/// report names (skelunet-roadmap, zhangsuen-roadmap, ma-roadmap, grid-astar).
PlannerKind parse_planner(std::string_view name);
std::string planner_report_name(PlannerKind kind);
std::string planner_cli_name(PlannerKind kind);
bool is_roadmap_planner(PlannerKind kind);

struct PlannerOptions {
  std::size_t k_nearest = 6;
  double tau = 0.5;
  std::size_t ma_samples = 100;
  std::uint64_t seed = 0;
  std::size_t stride = 1;
  /// Required by the SkelUnet planner.
  const NetworkParameters* weights = nullptr;
};

/// Vertex-candidate mask for a roadmap planner (throws for GridAStar).
SkeletonMask skeletonize(PlannerKind kind, const MapContext& ctx, const PlannerOptions& options);

class PreparedPlanner {
 public:
  /// Runs the offline stage (skeletonization + graph build) for roadmap planners.
  static PreparedPlanner prepare(PlannerKind kind, const MapContext& ctx, const PlannerOptions& options);
  /// Wraps an already-built roadmap (e.g. loaded from disk).
  static PreparedPlanner from_roadmap(PlannerKind kind, Roadmap roadmap);

  PlannerKind kind() const noexcept { return kind_; }
  const std::optional<Roadmap>& roadmap() const noexcept { return roadmap_; }
  double offline_seconds() const noexcept { return offline_seconds_; }

  /// Online stage. Roadmap planners may throw UnconnectableStart/Goal or
  /// NoPath; grid A* may throw NoPath.
  Path plan(const MapContext& ctx, const Query& query) const;

 private:
  PlannerKind kind_ = PlannerKind::GridAStar;
  std::optional<Roadmap> roadmap_;
  double offline_seconds_ = 0.0;
};

}  // namespace skelnav
