#include "skelnav/roadmap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <unordered_set>

#include "skelnav/errors.hpp"
#include "skelnav/text_util.hpp"

namespace skelnav {

double path_length(std::span<const Point> waypoints) {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) total += distance(waypoints[i - 1], waypoints[i]);
  return total;
}

Roadmap::Roadmap(std::vector<Point> vertices)
    : vertices_(std::move(vertices)), adjacency_(vertices_.size()), index_(vertices_) {}

bool Roadmap::add_edge(int a, int b) {
  const int n = static_cast<int>(vertices_.size());
  if (a < 0 || b < 0 || a >= n || b >= n) throw OutOfBounds("edge endpoint out of range");
  if (a == b) return false;
  for (const auto& nb : adjacency_[a]) {
    if (nb.vertex == b) return false;
  }
  const double w = distance(vertices_[a], vertices_[b]);
  edges_.push_back({std::min(a, b), std::max(a, b), w});
  adjacency_[a].push_back({b, w});
  adjacency_[b].push_back({a, w});
  return true;
}

std::uint64_t Roadmap::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  const auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 1099511628211ULL;
    }
  };
  mix(vertices_.size());
  for (const auto& p : vertices_) {
    mix(std::bit_cast<std::uint64_t>(p.x));
    mix(std::bit_cast<std::uint64_t>(p.y));
  }
  mix(edges_.size());
  for (const auto& e : edges_) {
    mix(static_cast<std::uint64_t>(e.a));
    mix(static_cast<std::uint64_t>(e.b));
    mix(std::bit_cast<std::uint64_t>(e.weight));
  }
  return h;
}

Roadmap build_graph(const SkeletonMask& mask, const OccupancyGrid& grid, const ObstacleSet& obstacles,
                    const BuildOptions& options) {
  if (mask.width() != grid.width() || mask.height() != grid.height()) {
    throw DimensionMismatch("skeleton mask and grid sizes differ");
  }
  if (options.k_nearest < 1) throw ValueError("k_nearest must be >= 1");
  const std::size_t stride = std::max<std::size_t>(options.stride, 1);

  std::vector<Point> vertices;
  std::size_t seen = 0;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (!mask.at(x, y) || !grid.is_free(x, y)) continue;
      if (seen++ % stride == 0) vertices.push_back(cell_center(x, y));
    }
  }
  if (vertices.empty()) throw EmptySkeleton("skeleton mask has no pixel in free space");

  Roadmap map(std::move(vertices));
  const int n = static_cast<int>(map.vertex_count());
  for (int v = 0; v < n; ++v) {
    for (int near : map.index().k_nearest(map.vertices()[v], options.k_nearest, v)) {
      if (!obstacles.segment_collides(map.vertices()[v], map.vertices()[near])) map.add_edge(v, near);
    }
  }
  return map;
}

namespace {

QueryLink link_endpoint(const Roadmap& map, Point q, const ObstacleSet& obstacles, std::size_t cap) {
  for (int v : map.index().k_nearest(q, cap)) {
    const Point& p = map.vertices()[v];
    if (p == q) return {v, 0.0, true};
    if (!obstacles.segment_collides(q, p)) return {v, distance(q, p), false};
  }
  return {};
}

}  // namespace

AugmentedRoadmap connect_query(const Roadmap& map, const Query& query, const ObstacleSet& obstacles,
                               std::size_t candidate_cap) {
  if (map.vertex_count() == 0) throw EmptySkeleton("cannot connect a query to an empty roadmap");
  if (obstacles.contains(query.start)) throw UnconnectableStart("query start lies in an obstacle");
  if (obstacles.contains(query.goal)) throw UnconnectableGoal("query goal lies in an obstacle");
  const QueryLink start = link_endpoint(map, query.start, obstacles, candidate_cap);
  if (start.vertex < 0) {
    throw UnconnectableStart("no collision-free link from start to its " + std::to_string(candidate_cap) +
                             " nearest roadmap vertices");
  }
  const QueryLink goal = link_endpoint(map, query.goal, obstacles, candidate_cap);
  if (goal.vertex < 0) {
    throw UnconnectableGoal("no collision-free link from goal to its " + std::to_string(candidate_cap) +
                            " nearest roadmap vertices");
  }
  return AugmentedRoadmap(map, query, start, goal);
}

Path path_search(const AugmentedRoadmap& aug) {
  const Query& q = aug.query();
  if (q.start == q.goal) return Path{{q.start}, 0.0};

  const Roadmap& base = aug.base();
  const int n = static_cast<int>(base.vertex_count());
  const auto& sl = aug.start_link();
  const auto& gl = aug.goal_link();
  // overlay nodes: n = start, n + 1 = goal (unless identified with a vertex)
  const int start_node = sl.identified ? sl.vertex : n;
  const int goal_node = gl.identified ? gl.vertex : n + 1;
  const auto position = [&](int v) -> Point {
    if (v == n) return q.start;
    if (v == n + 1) return q.goal;
    return base.vertices()[v];
  };
  const auto for_each_neighbor = [&](int v, auto&& fn) {
    if (v < n) {
      for (const auto& nb : base.neighbors(v)) fn(nb.vertex, nb.weight);
      if (!sl.identified && v == sl.vertex) fn(n, sl.length);
      if (!gl.identified && v == gl.vertex) fn(n + 1, gl.length);
    } else if (v == n) {
      fn(sl.vertex, sl.length);
    } else {
      fn(gl.vertex, gl.length);
    }
  };

  const Point goal_pos = position(goal_node);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(static_cast<std::size_t>(n) + 2, inf);
  std::vector<int> parent(static_cast<std::size_t>(n) + 2, -1);
  std::vector<bool> closed(static_cast<std::size_t>(n) + 2, false);
  using Entry = std::pair<double, int>;  // (f, vertex); min-heap, ties -> smaller vertex
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[start_node] = 0.0;
  open.push({distance(position(start_node), goal_pos), start_node});
  while (!open.empty()) {
    const auto [f, v] = open.top();
    open.pop();
    if (closed[v]) continue;
    closed[v] = true;
    if (v == goal_node) break;
    for_each_neighbor(v, [&](int u, double w) {
      if (closed[u]) return;
      const double cand = g[v] + w;
      if (cand < g[u]) {
        g[u] = cand;
        parent[u] = v;
        open.push({cand + distance(position(u), goal_pos), u});
      }
    });
  }
  if (!closed[goal_node]) throw NoPath("start and goal lie in different roadmap components");

  std::vector<int> chain;
  for (int v = goal_node; v != -1; v = parent[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  Path path;
  if (sl.identified) path.waypoints.push_back(q.start);
  for (int v : chain) {
    const Point p = position(v);
    if (path.waypoints.empty() || !(path.waypoints.back() == p)) path.waypoints.push_back(p);
  }
  if (gl.identified && !(path.waypoints.back() == q.goal)) path.waypoints.push_back(q.goal);
  path.length = path_length(path.waypoints);
  return path;
}

Path grid_astar(const OccupancyGrid& grid, const Query& query) {
  const auto cell_of = [&](Point p) {
    if (!(p.x >= 0.0 && p.y >= 0.0 && p.x < grid.width() && p.y < grid.height())) {
      throw OutOfBounds("query point outside the map");
    }
    return std::pair<int, int>{static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))};
  };
  const auto [sx, sy] = cell_of(query.start);
  const auto [gx, gy] = cell_of(query.goal);
  if (!grid.is_free(sx, sy)) throw UnconnectableStart("start cell is occupied");
  if (!grid.is_free(gx, gy)) throw UnconnectableGoal("goal cell is occupied");

  const int w = grid.width();
  const auto id = [w](int x, int y) { return y * w + x; };
  const auto heuristic = [&](int x, int y) {
    const int dx = std::abs(x - gx), dy = std::abs(y - gy);
    return (std::sqrt(2.0) - 1.0) * std::min(dx, dy) + std::max(dx, dy);
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(grid.size(), inf);
  std::vector<int> parent(grid.size(), -1);
  std::vector<bool> closed(grid.size(), false);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const int start = id(sx, sy), goal = id(gx, gy);
  g[start] = 0.0;
  open.push({heuristic(sx, sy), start});
  constexpr int dxs[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  constexpr int dys[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  while (!open.empty()) {
    const auto [f, v] = open.top();
    open.pop();
    if (closed[v]) continue;
    closed[v] = true;
    if (v == goal) break;
    const int x = v % w, y = v / w;
    for (int k = 0; k < 8; ++k) {
      const int nx = x + dxs[k], ny = y + dys[k];
      if (grid.occupied_or_outside(nx, ny)) continue;
      const bool diagonal = dxs[k] != 0 && dys[k] != 0;
      if (diagonal && (grid.occupied_or_outside(x + dxs[k], y) || grid.occupied_or_outside(x, y + dys[k]))) continue;
      const int u = id(nx, ny);
      if (closed[u]) continue;
      const double cand = g[v] + (diagonal ? std::sqrt(2.0) : 1.0);
      if (cand < g[u]) {
        g[u] = cand;
        parent[u] = v;
        open.push({cand + heuristic(nx, ny), u});
      }
    }
  }
  if (!closed[goal]) throw NoPath("goal cell is not reachable from the start cell");

  std::vector<int> chain;
  for (int v = goal; v != -1; v = parent[v]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  Path path;
  path.waypoints.push_back(query.start);
  for (int v : chain) {
    const Point c = cell_center(v % w, v / w);
    if (!(path.waypoints.back() == c)) path.waypoints.push_back(c);
  }
  if (!(path.waypoints.back() == query.goal)) path.waypoints.push_back(query.goal);
  path.length = path_length(path.waypoints);
  return path;
}

std::size_t component_count(const Roadmap& map) {
  std::vector<int> parent(map.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::size_t components = map.vertex_count();
  for (const auto& e : map.edges()) {
    const int a = find(e.a), b = find(e.b);
    if (a != b) {
      parent[std::max(a, b)] = std::min(a, b);
      --components;
    }
  }
  return components;
}

std::string format_roadmap(const Roadmap& map) {
  std::string out;
  for (std::size_t i = 0; i < map.vertex_count(); ++i) {
    out += "V " + std::to_string(i) + " " + format_double(map.vertices()[i].x) + " " +
           format_double(map.vertices()[i].y) + "\n";
  }
  for (const auto& e : map.edges()) {
    out += "E " + std::to_string(e.a) + " " + std::to_string(e.b) + " " + format_double(e.weight) + "\n";
  }
  return out;
}

Roadmap parse_roadmap(const std::string& text) {
  std::vector<Point> vertices;
  std::vector<std::pair<int, int>> edges;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = split_whitespace(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    const std::string where = "roadmap line " + std::to_string(lineno);
    if (tok[0] == "V" && tok.size() == 4) {
      if (parse_int(tok[1]) != static_cast<long long>(vertices.size())) throw FormatError(where + ": vertex ids must be dense and ordered");
      vertices.push_back({parse_double(tok[2]), parse_double(tok[3])});
    } else if (tok[0] == "E" && tok.size() == 4) {
      edges.emplace_back(static_cast<int>(parse_int(tok[1])), static_cast<int>(parse_int(tok[2])));
    } else {
      throw FormatError(where + ": expected `V id x y` or `E id1 id2 weight`");
    }
  }
  Roadmap map(std::move(vertices));
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= static_cast<int>(map.vertex_count()) || b >= static_cast<int>(map.vertex_count())) {
      throw FormatError("roadmap edge references an unknown vertex");
    }
    map.add_edge(a, b);
  }
  return map;
}

std::string format_path(const Path& path) {
  std::string out;
  for (const auto& p : path.waypoints) out += format_double(p.x) + " " + format_double(p.y) + "\n";
  return out;
}

Path parse_path(const std::string& text) {
  Path path;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto tok = split_whitespace(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok.size() != 2) throw FormatError("path line must be `x y`");
    path.waypoints.push_back({parse_double(tok[0]), parse_double(tok[1])});
  }
  path.length = path_length(path.waypoints);
  return path;
}

}  // namespace skelnav
