#pragma once

// Occupancy grids, clearance fields and the procedural dungeon generator.
//
// Coordinates: cell (x, y) covers the half-open square [x, x+1) x [y, y+1);
// x grows along a row, y grows down the rows (image order). Continuous
// points use the same frame, so the center of cell (x, y) is (x+0.5, y+0.5).

#include <cstdint>
#include <span>
#include <vector>

namespace skelnav {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline Point cell_center(int x, int y) { return {x + 0.5, y + 0.5}; }
double distance(Point a, Point b);

enum class CellState : std::uint8_t { Free = 0, Occupied = 1 };

/// Binary workspace map. The border ring is always Occupied; the constructor
/// and set() enforce that.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, std::vector<CellState> cells);

  /// All cells occupied; carve free space with set()/fill_rect().
  static OccupancyGrid closed(int width, int height);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return cells_.size(); }

  bool in_bounds(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }
  CellState at(int x, int y) const;
  bool is_free(int x, int y) const { return at(x, y) == CellState::Free; }
  bool is_occupied(int x, int y) const { return at(x, y) == CellState::Occupied; }
  /// Out-of-bounds cells read as occupied.
  bool occupied_or_outside(int x, int y) const noexcept {
    return !in_bounds(x, y) || cells_[index(x, y)] == CellState::Occupied;
  }

  void set(int x, int y, CellState s);
  /// Sets every cell of [x0, x1] x [y0, y1] (inclusive), clipped to the interior.
  void fill_rect(int x0, int y0, int x1, int y1, CellState s);

  std::size_t free_count() const noexcept;
  std::size_t occupied_count() const noexcept { return size() - free_count(); }

  std::span<const CellState> cells() const noexcept { return cells_; }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
  }

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<CellState> cells_;
};

/// Label image of 4-connected free components; -1 on occupied cells.
struct ComponentLabels {
  int count = 0;
  std::vector<int> labels;
};
ComponentLabels free_components(const OccupancyGrid& grid);

/// Euclidean distance (cell units) from each cell center to the nearest
/// occupied cell center. Zero exactly on occupied cells.
class ClearanceField {
 public:
  ClearanceField() = default;
  ClearanceField(int width, int height, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double at(int x, int y) const;
  /// Bilinear interpolation between cell centers, clamped at the map edge.
  double sample(Point p) const;
  std::span<const double> values() const noexcept { return values_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

/// Exact Euclidean distance transform (separable lower-envelope method).
ClearanceField distance_transform(const OccupancyGrid& grid);

struct IntRange {
  int min = 0;
  int max = 0;
};

struct GenParams {
  int width = 64;
  int height = 64;
  IntRange room_count{4, 9};
  IntRange room_size{5, 16};
  int corridor_width = 3;
  std::uint64_t seed = 0;
  /// Number of full layout attempts before GenerationFailure.
  int retry_budget = 64;

  void validate() const;
};

/// BSP room placement joined by L-shaped corridors along the split tree.
/// The free space of the result is a single 4-connected component.
OccupancyGrid generate_dungeon(const GenParams& params);

/// Per-map seed derived from a corpus master seed (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace skelnav
