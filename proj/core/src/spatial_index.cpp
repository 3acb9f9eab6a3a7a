#include "skelnav/spatial_index.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <utility>

namespace skelnav {

SpatialIndex::SpatialIndex(const std::vector<Point>& points) : points_(points) {
  std::vector<int> ids(points_.size());
  std::iota(ids.begin(), ids.end(), 0);
  nodes_.reserve(points_.size());
  root_ = build(ids, 0, static_cast<int>(ids.size()), 0);
}

int SpatialIndex::build(std::vector<int>& ids, int lo, int hi, int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % 2;
  const int mid = lo + (hi - lo) / 2;
  std::nth_element(ids.begin() + lo, ids.begin() + mid, ids.begin() + hi, [&](int a, int b) {
    const double ka = axis ? points_[a].y : points_[a].x;
    const double kb = axis ? points_[b].y : points_[b].x;
    return ka != kb ? ka < kb : a < b;
  });
  const int node = static_cast<int>(nodes_.size());
  nodes_.push_back({ids[mid], -1, -1, axis});
  const int left = build(ids, lo, mid, depth + 1);
  const int right = build(ids, mid + 1, hi, depth + 1);
  nodes_[node].left = left;
  nodes_[node].right = right;
  return node;
}

std::vector<int> SpatialIndex::k_nearest(Point q, std::size_t k, int exclude) const {
  using Entry = std::pair<double, int>;  // (squared distance, id); max-heap keeps the worst on top
  std::priority_queue<Entry> best;
  if (k == 0 || root_ < 0) return {};

  const auto visit = [&](auto&& self, int node) -> void {
    if (node < 0) return;
    const Node& n = nodes_[node];
    const Point& p = points_[n.point];
    const double dx = p.x - q.x, dy = p.y - q.y;
    const Entry e{dx * dx + dy * dy, n.point};
    if (n.point != exclude) {
      if (best.size() < k) {
        best.push(e);
      } else if (e < best.top()) {
        best.pop();
        best.push(e);
      }
    }
    const double diff = n.axis ? q.y - p.y : q.x - p.x;
    const int near = diff < 0 ? n.left : n.right;
    const int far = diff < 0 ? n.right : n.left;
    self(self, near);
    // ties on the splitting plane can sit on either side
    if (best.size() < k || diff * diff <= best.top().first) self(self, far);
  };
  visit(visit, root_);

  std::vector<Entry> sorted;
  sorted.reserve(best.size());
  while (!best.empty()) {
    sorted.push_back(best.top());
    best.pop();
  }
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> out;
  out.reserve(sorted.size());
  for (const auto& e : sorted) out.push_back(e.second);
  return out;
}

}  // namespace skelnav
