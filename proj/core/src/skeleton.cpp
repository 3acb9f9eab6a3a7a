#include "skelnav/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "skelnav/errors.hpp"
#include "skelnav/geometry.hpp"

namespace skelnav {

SkeletonMask::SkeletonMask(int width, int height)
    : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, 0) {
  if (width <= 0 || height <= 0) throw ValueError("mask dimensions must be positive");
}

SkeletonMask::SkeletonMask(int width, int height, std::vector<std::uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
  if (width <= 0 || height <= 0) throw ValueError("mask dimensions must be positive");
  if (bits_.size() != static_cast<std::size_t>(width) * height) throw ValueError("mask size mismatch");
  for (auto& b : bits_) b = b ? 1 : 0;
}

std::size_t SkeletonMask::count() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

OccupancyGrid mask_as_grid(const SkeletonMask& mask) {
  std::vector<CellState> cells(mask.bits().size());
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      const bool border = x == 0 || y == 0 || x == mask.width() - 1 || y == mask.height() - 1;
      cells[static_cast<std::size_t>(y) * mask.width() + x] =
          mask.at(x, y) && !border ? CellState::Free : CellState::Occupied;
    }
  return OccupancyGrid(mask.width(), mask.height(), std::move(cells));
}

bool mask_within_free(const SkeletonMask& mask, const OccupancyGrid& grid) {
  if (mask.width() != grid.width() || mask.height() != grid.height()) return false;
  for (std::size_t i = 0; i < mask.bits().size(); ++i) {
    if (mask.bits()[i] && grid.cells()[i] != CellState::Free) return false;
  }
  return true;
}

SkeletonMask zhang_suen(const OccupancyGrid& grid) {
  const int w = grid.width();
  const int h = grid.height();
  std::vector<std::uint8_t> img(grid.size());
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = grid.cells()[i] == CellState::Free ? 1 : 0;

  const auto px = [&](int x, int y) -> int {
    return (x < 0 || y < 0 || x >= w || y >= h) ? 0 : img[static_cast<std::size_t>(y) * w + x];
  };

  std::vector<std::size_t> doomed;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      doomed.clear();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!img[static_cast<std::size_t>(y) * w + x]) continue;
          // P2..P9 clockwise from north
          const int p[8] = {px(x, y - 1), px(x + 1, y - 1), px(x + 1, y),     px(x + 1, y + 1),
                            px(x, y + 1), px(x - 1, y + 1), px(x - 1, y), px(x - 1, y - 1)};
          const int b = p[0] + p[1] + p[2] + p[3] + p[4] + p[5] + p[6] + p[7];
          if (b < 2 || b > 6) continue;
          int a = 0;
          for (int k = 0; k < 8; ++k) a += (p[k] == 0 && p[(k + 1) % 8] == 1);
          if (a != 1) continue;
          const int p2 = p[0], p4 = p[2], p6 = p[4], p8 = p[6];
          const bool keep = pass == 0 ? (p2 * p4 * p6 != 0 || p4 * p6 * p8 != 0)
                                      : (p2 * p4 * p8 != 0 || p2 * p6 * p8 != 0);
          if (!keep) doomed.push_back(static_cast<std::size_t>(y) * w + x);
        }
      }
      for (auto i : doomed) img[i] = 0;
      changed = changed || !doomed.empty();
    }
  }
  return SkeletonMask(w, h, std::move(img));
}

SampleSet sample_free(const OccupancyGrid& grid, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ValueError("sample count must be >= 1");
  std::vector<std::size_t> free_cells;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.cells()[i] == CellState::Free) free_cells.push_back(i);
  }
  if (free_cells.empty()) throw NoFreeSpace("map has no free cells to sample");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampleSet out;
  out.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cell = free_cells[pick(rng)];
    const double cx = static_cast<double>(cell % static_cast<std::size_t>(grid.width()));
    const double cy = static_cast<double>(cell / static_cast<std::size_t>(grid.width()));
    // keep strictly inside the cell so the floor rule maps back to it
    const double ux = std::min(unit(rng), std::nextafter(1.0, 0.0));
    const double uy = std::min(unit(rng), std::nextafter(1.0, 0.0));
    out.points.push_back({cx + ux, cy + uy});
  }
  return out;
}

SampleSet ma_retract(const SampleSet& samples, const ClearanceField& field, const RetractionOptions& options) {
  const double diag = options.step / std::sqrt(2.0);
  const Point dirs[8] = {{options.step, 0},  {diag, diag},   {0, options.step},  {-diag, diag},
                         {-options.step, 0}, {-diag, -diag}, {0, -options.step}, {diag, -diag}};
  const double max_x = std::nextafter(static_cast<double>(field.width()), 0.0);
  const double max_y = std::nextafter(static_cast<double>(field.height()), 0.0);

  SampleSet out;
  out.points.reserve(samples.points.size());
  for (Point p : samples.points) {
    double value = field.sample(p);
    for (int it = 0; it < options.max_steps; ++it) {
      Point best = p;
      double best_value = value;
      for (const auto& d : dirs) {
        const Point cand{std::clamp(p.x + d.x, 0.0, max_x), std::clamp(p.y + d.y, 0.0, max_y)};
        const double v = field.sample(cand);
        if (v > best_value) {
          best_value = v;
          best = cand;
        }
      }
      if (best_value - value <= options.tolerance) break;
      p = best;
      value = best_value;
    }
    out.points.push_back(p);
  }
  return out;
}

SampleSet ma_filter(const SampleSet& samples, const ClearanceField& field) {
  constexpr double tol = 1e-9;
  const auto& pts = samples.points;
  const std::size_t n = pts.size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = field.sample(pts[i]);

  // candidates that could contain x have r(y) >= r(x) - tol; scan in
  // descending radius so the inner loop can stop early
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return r[a] > r[b]; });

  const auto contains = [&](std::size_t outer, std::size_t inner) {
    return distance(pts[inner], pts[outer]) + r[inner] <= r[outer] + tol;
  };

  std::vector<bool> keep(n, true);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y : order) {
      if (r[y] < r[x] - tol) break;
      if (y == x || !contains(y, x)) continue;
      // identical discs contain each other; the lower index wins
      if (contains(x, y) && x < y) continue;
      keep[x] = false;
      break;
    }
  }
  SampleSet out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.points.push_back(pts[i]);
  }
  return out;
}

SkeletonMask samples_to_mask(const SampleSet& samples, const OccupancyGrid& grid) {
  SkeletonMask mask(grid.width(), grid.height());
  for (const auto& p : samples.points) {
    if (!point_in_free(p, grid)) {
      throw ValueError("sample lies on an occupied cell");
    }
    mask.set(static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y)), true);
  }
  return mask;
}

std::vector<Point> mask_points(const SkeletonMask& mask) {
  std::vector<Point> pts;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x)
      if (mask.at(x, y)) pts.push_back(cell_center(x, y));
  return pts;
}

double coverage_fraction(const std::vector<Point>& points, const OccupancyGrid& grid, double radius) {
  std::size_t free_cells = 0, covered = 0;
  std::vector<std::uint8_t> hit(grid.size(), 0);
  const int reach = static_cast<int>(std::ceil(radius)) + 1;
  for (const auto& p : points) {
    const int px = static_cast<int>(std::floor(p.x));
    const int py = static_cast<int>(std::floor(p.y));
    for (int y = std::max(0, py - reach); y <= std::min(grid.height() - 1, py + reach); ++y) {
      for (int x = std::max(0, px - reach); x <= std::min(grid.width() - 1, px + reach); ++x) {
        if (distance(cell_center(x, y), p) <= radius) hit[grid.index(x, y)] = 1;
      }
    }
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.cells()[i] != CellState::Free) continue;
    ++free_cells;
    covered += hit[i];
  }
  return free_cells == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(free_cells);
}

}  // namespace skelnav
