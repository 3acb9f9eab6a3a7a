#include "skelnav/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "skelnav/errors.hpp"

namespace skelnav {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

bool on_border(int x, int y, int w, int h) { return x == 0 || y == 0 || x == w - 1 || y == h - 1; }

}  // namespace

OccupancyGrid::OccupancyGrid(int width, int height, std::vector<CellState> cells)
    : width_(width), height_(height), cells_(std::move(cells)) {
  if (width <= 0 || height <= 0) {
    throw ValueError("grid dimensions must be positive, got " + std::to_string(width) + "x" +
                     std::to_string(height));
  }
  if (cells_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ValueError("cell count " + std::to_string(cells_.size()) + " does not match " +
                     std::to_string(width) + "x" + std::to_string(height));
  }
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      if (on_border(x, y, width_, height_) && cells_[index(x, y)] != CellState::Occupied) {
        throw ValueError("border cell (" + std::to_string(x) + "," + std::to_string(y) +
                         ") is free; maps must be closed");
      }
    }
  }
}

OccupancyGrid OccupancyGrid::closed(int width, int height) {
  if (width <= 0 || height <= 0) throw ValueError("grid dimensions must be positive");
  return OccupancyGrid(width, height,
                       std::vector<CellState>(static_cast<std::size_t>(width) * height, CellState::Occupied));
}

CellState OccupancyGrid::at(int x, int y) const {
  if (!in_bounds(x, y)) {
    throw OutOfBounds("cell (" + std::to_string(x) + "," + std::to_string(y) + ") outside " +
                      std::to_string(width_) + "x" + std::to_string(height_) + " grid");
  }
  return cells_[index(x, y)];
}

void OccupancyGrid::set(int x, int y, CellState s) {
  if (!in_bounds(x, y)) {
    throw OutOfBounds("cell (" + std::to_string(x) + "," + std::to_string(y) + ") outside grid");
  }
  if (s == CellState::Free && on_border(x, y, width_, height_)) {
    throw ValueError("cannot free border cell (" + std::to_string(x) + "," + std::to_string(y) + ")");
  }
  cells_[index(x, y)] = s;
}

void OccupancyGrid::fill_rect(int x0, int y0, int x1, int y1, CellState s) {
  if (x0 > x1) std::swap(x0, x1);
  if (y0 > y1) std::swap(y0, y1);
  x0 = std::max(x0, 1);
  y0 = std::max(y0, 1);
  x1 = std::min(x1, width_ - 2);
  y1 = std::min(y1, height_ - 2);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) cells_[index(x, y)] = s;
}

std::size_t OccupancyGrid::free_count() const noexcept {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), CellState::Free));
}

ComponentLabels free_components(const OccupancyGrid& grid) {
  ComponentLabels out;
  out.labels.assign(grid.size(), -1);
  std::vector<int> stack;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const auto start = grid.index(x, y);
      if (grid.cells()[start] != CellState::Free || out.labels[start] != -1) continue;
      const int label = out.count++;
      out.labels[start] = label;
      stack.assign(1, static_cast<int>(start));
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int cx = cur % grid.width();
        const int cy = cur / grid.width();
        constexpr int dx[4] = {1, -1, 0, 0};
        constexpr int dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nx = cx + dx[k];
          const int ny = cy + dy[k];
          if (!grid.in_bounds(nx, ny)) continue;
          const auto ni = grid.index(nx, ny);
          if (grid.cells()[ni] == CellState::Free && out.labels[ni] == -1) {
            out.labels[ni] = label;
            stack.push_back(static_cast<int>(ni));
          }
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Clearance field

ClearanceField::ClearanceField(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw ValueError("clearance field size mismatch");
  }
}

double ClearanceField::at(int x, int y) const {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) {
    throw OutOfBounds("clearance lookup outside field");
  }
  return values_[static_cast<std::size_t>(y) * width_ + x];
}

double ClearanceField::sample(Point p) const {
  // cell centers sit at integer + 0.5
  const double gx = std::clamp(p.x - 0.5, 0.0, static_cast<double>(width_ - 1));
  const double gy = std::clamp(p.y - 0.5, 0.0, static_cast<double>(height_ - 1));
  const int x0 = std::min(static_cast<int>(gx), width_ - 1);
  const int y0 = std::min(static_cast<int>(gy), height_ - 1);
  const int x1 = std::min(x0 + 1, width_ - 1);
  const int y1 = std::min(y0 + 1, height_ - 1);
  const double fx = gx - x0;
  const double fy = gy - y0;
  const auto v = [&](int x, int y) { return values_[static_cast<std::size_t>(y) * width_ + x]; };
  const double top = v(x0, y0) * (1.0 - fx) + v(x1, y0) * fx;
  const double bottom = v(x0, y1) * (1.0 - fx) + v(x1, y1) * fx;
  return top * (1.0 - fy) + bottom * fy;
}

namespace {

// 1D squared distance transform of a sampled function (lower envelope of
// parabolas rooted at each sample).
void edt_1d(const std::vector<double>& f, std::vector<double>& d, std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = 0;
  v[0] = 0;
  z[0] = -inf;
  z[1] = inf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == inf) continue;
    if (f[v[k]] == inf) {
      v[k] = q;
      continue;
    }
    double s = ((f[q] + q * static_cast<double>(q)) - (f[v[k]] + v[k] * static_cast<double>(v[k]))) /
               (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * static_cast<double>(q)) - (f[v[k]] + v[k] * static_cast<double>(v[k]))) /
          (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = f[v[k]] == inf ? inf : dq * dq + f[v[k]];
  }
}

}  // namespace

ClearanceField distance_transform(const OccupancyGrid& grid) {
  const int w = grid.width();
  const int h = grid.height();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> sq(grid.size());
  for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = grid.cells()[i] == CellState::Occupied ? 0.0 : inf;

  const int n = std::max(w, h);
  std::vector<double> f(n), d(n), z(n + 1);
  std::vector<int> v(n);

  // columns
  f.resize(h);
  d.resize(h);
  for (int x = 0; x < w; ++x) {
    for (int y = 0; y < h; ++y) f[y] = sq[static_cast<std::size_t>(y) * w + x];
    edt_1d(f, d, v, z);
    for (int y = 0; y < h; ++y) sq[static_cast<std::size_t>(y) * w + x] = d[y];
  }
  // rows
  f.resize(w);
  d.resize(w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f[x] = sq[static_cast<std::size_t>(y) * w + x];
    edt_1d(f, d, v, z);
    for (int x = 0; x < w; ++x) sq[static_cast<std::size_t>(y) * w + x] = d[x];
  }

  for (auto& value : sq) value = std::sqrt(value);
  return ClearanceField(w, h, std::move(sq));
}

// ---------------------------------------------------------------------------
// Dungeon generation

void GenParams::validate() const {
  if (width < 8 || height < 8) throw ValueError("map must be at least 8x8");
  if (room_count.min < 1 || room_count.max < room_count.min) throw ValueError("room_count range is empty");
  if (room_size.min < 2 || room_size.max < room_size.min) throw ValueError("room_size range is empty");
  if (corridor_width < 1) throw ValueError("corridor_width must be >= 1");
  if (retry_budget < 1) throw ValueError("retry_budget must be >= 1");
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

struct Rect {
  int x0, y0, x1, y1;  // inclusive
  int w() const { return x1 - x0 + 1; }
  int h() const { return y1 - y0 + 1; }
};

struct BspNode {
  Rect area;
  int left = -1;
  int right = -1;
  int room = -1;
  bool leaf() const { return left < 0; }
};

class DungeonBuilder {
 public:
  DungeonBuilder(const GenParams& p, std::mt19937_64& rng) : p_(p), rng_(rng) {}

  // Returns false when the layout cannot hold the minimum number of rooms.
  bool build(OccupancyGrid& grid) {
    nodes_.clear();
    rooms_.clear();
    nodes_.push_back({Rect{1, 1, p_.width - 2, p_.height - 2}});
    const int target = uniform(p_.room_count.min, p_.room_count.max);
    int leaves = 1;
    while (leaves < target) {
      const int pick = pick_splittable();
      if (pick < 0) break;
      split(pick);
      ++leaves;
    }
    if (leaves < p_.room_count.min) return false;

    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].leaf()) place_room(static_cast<int>(i));
    }
    for (const auto& r : rooms_) grid.fill_rect(r.x0, r.y0, r.x1, r.y1, CellState::Free);
    connect(0, grid);
    return true;
  }

 private:
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  int min_leaf() const { return p_.room_size.min + 1; }

  int pick_splittable() const {
    int best = -1;
    long best_area = -1;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& n = nodes_[i];
      if (!n.leaf()) continue;
      if (n.area.w() < 2 * min_leaf() && n.area.h() < 2 * min_leaf()) continue;
      const long area = static_cast<long>(n.area.w()) * n.area.h();
      if (area > best_area) {
        best_area = area;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  void split(int idx) {
    const Rect a = nodes_[idx].area;
    const bool can_v = a.w() >= 2 * min_leaf();
    const bool can_h = a.h() >= 2 * min_leaf();
    bool vertical;
    if (can_v && can_h) {
      if (a.w() > a.h() * 5 / 4) vertical = true;
      else if (a.h() > a.w() * 5 / 4) vertical = false;
      else vertical = uniform(0, 1) == 0;
    } else {
      vertical = can_v;
    }
    Rect l = a, r = a;
    if (vertical) {
      const int s = uniform(a.x0 + min_leaf(), a.x1 - min_leaf() + 1);
      l.x1 = s - 1;
      r.x0 = s;
    } else {
      const int s = uniform(a.y0 + min_leaf(), a.y1 - min_leaf() + 1);
      l.y1 = s - 1;
      r.y0 = s;
    }
    nodes_.push_back({l});
    nodes_.push_back({r});
    nodes_[idx].left = static_cast<int>(nodes_.size()) - 2;
    nodes_[idx].right = static_cast<int>(nodes_.size()) - 1;
  }

  void place_room(int idx) {
    // one wall cell of margin on the high side separates neighbouring leaves
    const Rect a = nodes_[idx].area;
    const int avail_w = a.w() - 1;
    const int avail_h = a.h() - 1;
    const int rw = uniform(p_.room_size.min, std::min(p_.room_size.max, avail_w));
    const int rh = uniform(p_.room_size.min, std::min(p_.room_size.max, avail_h));
    const int rx = uniform(a.x0, a.x0 + avail_w - rw);
    const int ry = uniform(a.y0, a.y0 + avail_h - rh);
    nodes_[idx].room = static_cast<int>(rooms_.size());
    rooms_.push_back({rx, ry, rx + rw - 1, ry + rh - 1});
  }

  void collect_rooms(int idx, std::vector<int>& out) const {
    const auto& n = nodes_[idx];
    if (n.leaf()) {
      out.push_back(n.room);
      return;
    }
    collect_rooms(n.left, out);
    collect_rooms(n.right, out);
  }

  void connect(int idx, OccupancyGrid& grid) {
    const auto& n = nodes_[idx];
    if (n.leaf()) return;
    connect(n.left, grid);
    connect(n.right, grid);
    std::vector<int> left_rooms, right_rooms;
    collect_rooms(n.left, left_rooms);
    collect_rooms(n.right, right_rooms);
    // join the closest pair of rooms across the split
    int best_a = left_rooms.front(), best_b = right_rooms.front();
    long best_d = -1;
    for (int a : left_rooms) {
      for (int b : right_rooms) {
        const auto ca = center(rooms_[a]);
        const auto cb = center(rooms_[b]);
        const long d = static_cast<long>(ca.first - cb.first) * (ca.first - cb.first) +
                       static_cast<long>(ca.second - cb.second) * (ca.second - cb.second);
        if (best_d < 0 || d < best_d) {
          best_d = d;
          best_a = a;
          best_b = b;
        }
      }
    }
    carve_corridor(center(rooms_[best_a]), center(rooms_[best_b]), grid);
  }

  static std::pair<int, int> center(const Rect& r) { return {(r.x0 + r.x1) / 2, (r.y0 + r.y1) / 2}; }

  void carve_corridor(std::pair<int, int> a, std::pair<int, int> b, OccupancyGrid& grid) {
    const int lo = (p_.corridor_width - 1) / 2;
    const int hi = p_.corridor_width / 2;
    const bool horizontal_first = uniform(0, 1) == 0;
    const int bend_x = horizontal_first ? b.first : a.first;
    const int bend_y = horizontal_first ? a.second : b.second;
    // leg 1: a -> bend, leg 2: bend -> b; the square around the bend closes the elbow
    grid.fill_rect(std::min(a.first, bend_x) - lo, std::min(a.second, bend_y) - lo, std::max(a.first, bend_x) + hi,
                   std::max(a.second, bend_y) + hi, CellState::Free);
    grid.fill_rect(std::min(b.first, bend_x) - lo, std::min(b.second, bend_y) - lo, std::max(b.first, bend_x) + hi,
                   std::max(b.second, bend_y) + hi, CellState::Free);
  }

  const GenParams& p_;
  std::mt19937_64& rng_;
  std::vector<BspNode> nodes_;
  std::vector<Rect> rooms_;
};

}  // namespace

OccupancyGrid generate_dungeon(const GenParams& params) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  for (int attempt = 0; attempt < params.retry_budget; ++attempt) {
    auto grid = OccupancyGrid::closed(params.width, params.height);
    DungeonBuilder builder(params, rng);
    if (!builder.build(grid)) continue;
    if (free_components(grid).count == 1) return grid;
  }
  throw GenerationFailure("could not place " + std::to_string(params.room_count.min) + "+ rooms of size >= " +
                          std::to_string(params.room_size.min) + " in a " + std::to_string(params.width) + "x" +
                          std::to_string(params.height) + " map after " + std::to_string(params.retry_budget) +
                          " attempts");
}

}  // namespace skelnav
