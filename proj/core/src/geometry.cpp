#include "skelnav/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "skelnav/errors.hpp"
#include "skelnav/text_util.hpp"

namespace skelnav {

// ---------------------------------------------------------------------------
// Exact predicates

int orient2d(Point a, Point b, Point c) {
  const double left = (b.x - a.x) * (c.y - a.y);
  const double right = (b.y - a.y) * (c.x - a.x);
  const double det = left - right;
  constexpr double eps = std::numeric_limits<double>::epsilon() / 2.0;
  constexpr double bound = (3.0 + 16.0 * eps) * eps;
  const double err = bound * (std::abs(left) + std::abs(right));
  if (det > err) return 1;
  if (-det > err) return -1;
  if (left == 0.0 && right == 0.0) return 0;

  using boost::multiprecision::cpp_rational;
  const cpp_rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  const cpp_rational exact = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return exact > 0 ? 1 : (exact < 0 ? -1 : 0);
}

namespace {

bool within_box(Point a, Point b, Point p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Point a, Point b, Point c, Point d) {
  const int o1 = orient2d(a, b, c);
  const int o2 = orient2d(a, b, d);
  const int o3 = orient2d(c, d, a);
  const int o4 = orient2d(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  // touching and collinear cases; also covers zero-length segments
  if (o1 == 0 && within_box(a, b, c)) return true;
  if (o2 == 0 && within_box(a, b, d)) return true;
  if (o3 == 0 && within_box(c, d, a)) return true;
  if (o4 == 0 && within_box(c, d, b)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Polygons

double Polygon::signed_area() const {
  double twice = 0.0;
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = vertices[i];
    const Point& q = vertices[(i + 1) % n];
    twice += p.x * q.y - q.x * p.y;
  }
  return 0.5 * twice;
}

bool CornerSet::contains(LatticePoint p) const {
  return std::binary_search(corners.begin(), corners.end(), p, [](LatticePoint a, LatticePoint b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
}

ObstacleSet::ObstacleSet(std::vector<Polygon> polygons, int width, int height)
    : polygons_(std::move(polygons)), width_(width), height_(height) {
  rows_.resize(static_cast<std::size_t>(std::max(height_, 0)) + 1);
  for (const auto& poly : polygons_) {
    const std::size_t n = poly.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Edge e{poly.vertices[i], poly.vertices[(i + 1) % n]};
      const int id = static_cast<int>(edges_.size());
      edges_.push_back(e);
      const int r0 = std::clamp(static_cast<int>(std::floor(std::min(e.a.y, e.b.y))), 0, height_);
      const int r1 = std::clamp(static_cast<int>(std::floor(std::max(e.a.y, e.b.y))), 0, height_);
      // an edge ending exactly on integer row r also touches row r-1
      for (int r = std::max(r0 - 1, 0); r <= r1; ++r) rows_[r].push_back(id);
    }
  }
}

std::vector<int> ObstacleSet::candidate_edges(double y_lo, double y_hi) const {
  std::vector<int> ids;
  if (rows_.empty()) return ids;
  const int r0 = std::clamp(static_cast<int>(std::floor(y_lo)), 0, height_);
  const int r1 = std::clamp(static_cast<int>(std::floor(y_hi)), 0, height_);
  for (int r = r0; r <= r1; ++r) ids.insert(ids.end(), rows_[r].begin(), rows_[r].end());
  if (r1 > r0) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }
  return ids;
}

int ObstacleSet::winding_number(Point p) const {
  int wn = 0;
  for (int id : candidate_edges(p.y, p.y)) {
    const Edge& e = edges_[id];
    if (e.a.y <= p.y) {
      if (e.b.y > p.y && orient2d(e.a, e.b, p) > 0) ++wn;
    } else if (e.b.y <= p.y && orient2d(e.a, e.b, p) < 0) {
      --wn;
    }
  }
  return wn;
}

bool ObstacleSet::segment_collides(Point p, Point q) const {
  const double x_lo = std::min(p.x, q.x), x_hi = std::max(p.x, q.x);
  for (int id : candidate_edges(std::min(p.y, q.y), std::max(p.y, q.y))) {
    const Edge& e = edges_[id];
    if (std::max(e.a.x, e.b.x) < x_lo || std::min(e.a.x, e.b.x) > x_hi) continue;
    if (segments_intersect(p, q, e.a, e.b)) return true;
  }
  // no boundary contact: the whole segment lies in a single face
  return winding_number(p) > 0;
}

bool ObstacleSet::contains(Point p) const { return segment_collides(p, p); }

bool segment_collides(Point p, Point q, const ObstacleSet& obstacles) { return obstacles.segment_collides(p, q); }

// ---------------------------------------------------------------------------
// Corner seeking and boundary tracing

CornerSet seek_corners(const OccupancyGrid& grid) {
  CornerSet out;
  for (int y = 0; y <= grid.height(); ++y) {
    for (int x = 0; x <= grid.width(); ++x) {
      // window cells: top-left, top-right, bottom-left, bottom-right of vertex (x, y)
      const auto occ = [&](int cx, int cy) { return grid.in_bounds(cx, cy) && grid.is_occupied(cx, cy); };
      const bool tl = occ(x - 1, y - 1), tr = occ(x, y - 1), bl = occ(x - 1, y), br = occ(x, y);
      const int n = tl + tr + bl + br;
      const bool diagonal = n == 2 && tl == br;
      if (n == 1 || n == 3 || diagonal) out.corners.push_back({x, y});
    }
  }
  return out;
}

namespace {

// directions: 0 = +x, 1 = +y, 2 = -x, 3 = -y; left of d is (d + 1) % 4
constexpr std::array<int, 4> kDx = {1, 0, -1, 0};
constexpr std::array<int, 4> kDy = {0, 1, 0, -1};

}  // namespace

ObstacleSet connect_polygon(const OccupancyGrid& grid, const CornerSet& corners) {
  const int vw = grid.width() + 1;
  const int vh = grid.height() + 1;
  const auto vid = [vw](int x, int y) { return static_cast<std::size_t>(y) * vw + x; };
  // out[v][d]: a boundary edge leaves vertex v in direction d (occupied on its left)
  std::vector<std::array<bool, 4>> out(static_cast<std::size_t>(vw) * vh, {false, false, false, false});
  std::vector<std::array<bool, 4>> used(out.size(), {false, false, false, false});
  const auto free_or_outside = [&](int x, int y) { return !grid.in_bounds(x, y) || grid.is_free(x, y); };

  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (!grid.is_occupied(x, y)) continue;
      if (free_or_outside(x, y - 1)) out[vid(x, y)][0] = true;
      if (free_or_outside(x + 1, y)) out[vid(x + 1, y)][1] = true;
      if (free_or_outside(x, y + 1)) out[vid(x + 1, y + 1)][2] = true;
      if (free_or_outside(x - 1, y)) out[vid(x, y + 1)][3] = true;
    }
  }

  std::vector<Polygon> polygons;
  for (int sy = 0; sy < vh; ++sy) {
    for (int sx = 0; sx < vw; ++sx) {
      for (int sd = 0; sd < 4; ++sd) {
        if (!out[vid(sx, sy)][sd] || used[vid(sx, sy)][sd]) continue;
        std::vector<LatticePoint> turns;
        int x = sx, y = sy, d = sd;
        std::size_t steps = 0;
        const std::size_t max_steps = out.size() * 4 + 4;
        while (true) {
          used[vid(x, y)][d] = true;
          x += kDx[d];
          y += kDy[d];
          int next = -1;
          for (int turn : {1, 0, 3}) {
            const int cand = (d + turn) % 4;
            if (out[vid(x, y)][cand]) {
              next = cand;
              break;
            }
          }
          if (next < 0) {
            throw TopologyError("boundary trace dead-ends at (" + std::to_string(x) + "," + std::to_string(y) + ")");
          }
          if (next != d) turns.push_back({x, y});
          if (used[vid(x, y)][next]) {
            if (x == sx && y == sy && next == sd) break;
            throw TopologyError("boundary trace revisits edge at (" + std::to_string(x) + "," + std::to_string(y) +
                                ") without closing");
          }
          d = next;
          if (++steps > max_steps) throw TopologyError("boundary trace did not terminate");
        }
        Polygon poly;
        poly.vertices.reserve(turns.size());
        for (const auto& t : turns) {
          if (!corners.contains(t)) {
            throw TopologyError("traced turn (" + std::to_string(t.x) + "," + std::to_string(t.y) +
                                ") is not in the corner set");
          }
          poly.vertices.push_back({static_cast<double>(t.x), static_cast<double>(t.y)});
        }
        poly.inner = poly.signed_area() < 0.0;
        polygons.push_back(std::move(poly));
      }
    }
  }
  return ObstacleSet(std::move(polygons), grid.width(), grid.height());
}

ObstacleSet extract_obstacles(const OccupancyGrid& grid) { return connect_polygon(grid, seek_corners(grid)); }

bool point_in_free(Point p, const OccupancyGrid& grid) {
  if (!(p.x >= 0.0 && p.y >= 0.0 && p.x < grid.width() && p.y < grid.height())) {
    throw OutOfBounds("point (" + format_double(p.x) + "," + format_double(p.y) + ") outside the map");
  }
  return grid.is_free(static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y)));
}

std::string format_obstacles(const ObstacleSet& obstacles) {
  std::string out;
  for (const auto& poly : obstacles.polygons()) {
    for (std::size_t i = 0; i < poly.vertices.size(); ++i) {
      if (i) out += ' ';
      out += format_double(poly.vertices[i].x) + "," + format_double(poly.vertices[i].y);
    }
    out += '\n';
  }
  return out;
}

}  // namespace skelnav
