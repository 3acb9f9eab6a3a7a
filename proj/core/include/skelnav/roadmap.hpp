#pragma once

// Skeleton roadmaps: offline graph construction from a skeleton mask and the
// online query stage (endpoint connection + best-first search), plus the
// 8-connected grid A* baseline.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skelnav/geometry.hpp"
#include "skelnav/grid.hpp"
#include "skelnav/skeleton.hpp"
#include "skelnav/spatial_index.hpp"

namespace skelnav {

struct Query {
  Point start;
  Point goal;
};

struct Path {
  std::vector<Point> waypoints;
  double length = 0.0;
};

/// Sums segment lengths.
double path_length(std::span<const Point> waypoints);

struct RoadmapEdge {
  int a = 0;
  int b = 0;
  double weight = 0.0;
};

struct Neighbor {
  int vertex = 0;
  double weight = 0.0;
};

/// Undirected graph embedded in free space. Immutable once built; queries
/// go through AugmentedRoadmap overlays.
class Roadmap {
 public:
  Roadmap() = default;
  explicit Roadmap(std::vector<Point> vertices);

  /// Adds a Euclidean-weighted edge; self-loops and duplicates are ignored
  /// and return false.
  bool add_edge(int a, int b);

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const std::vector<RoadmapEdge>& edges() const noexcept { return edges_; }
  const std::vector<Neighbor>& neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  const SpatialIndex& index() const noexcept { return index_; }

  /// FNV-1a hash of vertices and edges; changes iff the structure changes.
  std::uint64_t fingerprint() const;

 private:
  std::vector<Point> vertices_;
  std::vector<RoadmapEdge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  SpatialIndex index_;
};

struct BuildOptions {
  std::size_t k_nearest = 6;
  /// Keep every n-th skeleton pixel (row-major); 1 keeps all.
  std::size_t stride = 1;
};

/// Vertices are the centers of skeleton cells lying in free space; each
/// vertex tries its k nearest neighbours and keeps collision-free links.
/// Throws EmptySkeleton when no skeleton pixel is free.
Roadmap build_graph(const SkeletonMask& mask, const OccupancyGrid& grid, const ObstacleSet& obstacles,
                    const BuildOptions& options = {});

/// How a query endpoint attaches to the roadmap.
struct QueryLink {
  int vertex = -1;
  double length = 0.0;
  /// Endpoint coincides with the vertex; no extra node is added.
  bool identified = false;
};

/// Roadmap plus a connected query, layered on top without touching the base.
class AugmentedRoadmap {
 public:
  AugmentedRoadmap(const Roadmap& base, Query query, QueryLink start, QueryLink goal)
      : base_(&base), query_(query), start_(start), goal_(goal) {}

  const Roadmap& base() const noexcept { return *base_; }
  const Query& query() const noexcept { return query_; }
  const QueryLink& start_link() const noexcept { return start_; }
  const QueryLink& goal_link() const noexcept { return goal_; }

 private:
  const Roadmap* base_;
  Query query_;
  QueryLink start_;
  QueryLink goal_;
};

inline constexpr std::size_t kDefaultCandidateCap = 20;

/// Tries vertices in increasing distance (up to `candidate_cap`) for each
/// endpoint until a collision-free link is found. Throws UnconnectableStart /
/// UnconnectableGoal, or EmptySkeleton for an empty roadmap.
AugmentedRoadmap connect_query(const Roadmap& map, const Query& query, const ObstacleSet& obstacles,
                               std::size_t candidate_cap = kDefaultCandidateCap);

/// Shortest path with the straight-line heuristic. Throws NoPath.
Path path_search(const AugmentedRoadmap& map);

/// 8-connected grid A*: unit straight moves, sqrt(2) diagonals, no corner
/// cutting. Waypoints run from query.start through cell centers to
/// query.goal. Throws UnconnectableStart/Goal for occupied endpoint cells and
/// NoPath when the cells are not connected.
Path grid_astar(const OccupancyGrid& grid, const Query& query);

std::size_t component_count(const Roadmap& map);

/// `V id x y` lines followed by `E id1 id2 weight` lines.
std::string format_roadmap(const Roadmap& map);
Roadmap parse_roadmap(const std::string& text);
/// One `x y` line per waypoint.
std::string format_path(const Path& path);
Path parse_path(const std::string& text);

}  // namespace skelnav
