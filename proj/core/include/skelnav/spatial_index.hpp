#pragma once

#include <vector>

#include "skelnav/grid.hpp"

namespace skelnav {

/// Static 2-d tree over a point set. Query results are ordered by distance,
/// then by point index, so equal-distance ties resolve deterministically.
class SpatialIndex {
 public:
  SpatialIndex() = default;
  explicit SpatialIndex(const std::vector<Point>& points);

  std::size_t size() const noexcept { return points_.size(); }

  /// Up to k nearest point ids; `exclude` (if >= 0) is skipped.
  std::vector<int> k_nearest(Point q, std::size_t k, int exclude = -1) const;

 private:
  struct Node {
    int point = -1;
    int left = -1;
    int right = -1;
    int axis = 0;
  };
  int build(std::vector<int>& ids, int lo, int hi, int depth);

  std::vector<Point> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace skelnav
