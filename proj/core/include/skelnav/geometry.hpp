#pragma once

// Polygonal obstacle extraction from an occupancy grid and exact segment
// collision predicates against it.

#include <string>
#include <vector>

#include "skelnav/grid.hpp"

namespace skelnav {

/// Integer lattice vertex; (x, y) is the top-left corner of cell (x, y).
struct LatticePoint {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

struct CornerSet {
  std::vector<LatticePoint> corners;  // sorted (y, x)
  bool contains(LatticePoint p) const;
};

/// Closed rectilinear polygon. Outer boundaries wind counter-clockwise in the
/// (x, y) frame and have positive signed area; `inner` boundaries (free
/// pockets enclosed by an occupied region) wind clockwise and subtract.
struct Polygon {
  std::vector<Point> vertices;
  bool inner = false;

  double signed_area() const;
};

/// Obstacle polygons plus a row-bucketed edge index for fast queries.
class ObstacleSet {
 public:
  ObstacleSet() = default;
  ObstacleSet(std::vector<Polygon> polygons, int width, int height);

  const std::vector<Polygon>& polygons() const noexcept { return polygons_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// True iff the closed segment pq touches any polygon boundary or lies in
  /// an occupied interior.
  bool segment_collides(Point p, Point q) const;
  /// Winding-number membership; boundary points count as inside.
  bool contains(Point p) const;

 private:
  struct Edge {
    Point a;
    Point b;
  };
  std::vector<int> candidate_edges(double y_lo, double y_hi) const;
  int winding_number(Point p) const;

  std::vector<Polygon> polygons_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> rows_;  // rows_[r]: edges whose y-span meets [r, r+1]
  int width_ = 0;
  int height_ = 0;
};

/// Every lattice vertex whose 2x2 cell window (outside counts as free) holds
/// exactly 1 or 3 occupied cells, or 2 occupied cells on a diagonal.
CornerSet seek_corners(const OccupancyGrid& grid);

/// Traces each 4-connected occupied region's boundary cycles and emits one
/// polygon per cycle, with the given corners as its vertices.
/// Throws TopologyError if tracing fails to close or meets a turn that is not
/// in `corners`.
ObstacleSet connect_polygon(const OccupancyGrid& grid, const CornerSet& corners);

/// seek_corners followed by connect_polygon.
ObstacleSet extract_obstacles(const OccupancyGrid& grid);

bool segment_collides(Point p, Point q, const ObstacleSet& obstacles);

/// Floor rule: p belongs to cell (floor(x), floor(y)). Throws OutOfBounds.
bool point_in_free(Point p, const OccupancyGrid& grid);

/// Sign of the orientation determinant of (a, b, c): +1 counter-clockwise,
/// -1 clockwise, 0 collinear. Exact for all finite doubles.
int orient2d(Point a, Point b, Point c);
/// Closed segment-segment intersection, exact.
bool segments_intersect(Point a, Point b, Point c, Point d);

/// One polygon per line: `x0,y0 x1,y1 ...`.
std::string format_obstacles(const ObstacleSet& obstacles);

}  // namespace skelnav
