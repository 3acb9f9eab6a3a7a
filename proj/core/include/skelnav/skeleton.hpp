#pragma once

// Classical skeletonization back-ends: Zhang-Suen thinning of free space and
// medial-axis retraction of random free-space samples.

#include <cstdint>
#include <vector>

#include "skelnav/grid.hpp"

namespace skelnav {

class SkeletonMask {
 public:
  SkeletonMask() = default;
  SkeletonMask(int width, int height);
  SkeletonMask(int width, int height, std::vector<std::uint8_t> bits);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * width_ + x] != 0; }
  void set(int x, int y, bool on) { bits_[static_cast<std::size_t>(y) * width_ + x] = on ? 1 : 0; }
  std::size_t count() const noexcept;
  const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

  friend bool operator==(const SkeletonMask&, const SkeletonMask&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Reads a mask as a map: skeleton pixels become free, everything else
/// (including the border ring) occupied.
OccupancyGrid mask_as_grid(const SkeletonMask& mask);
/// True iff every skeleton pixel lies on a free cell of `grid`.
bool mask_within_free(const SkeletonMask& mask, const OccupancyGrid& grid);

/// Two-subiteration Zhang-Suen thinning with free space as foreground.
SkeletonMask zhang_suen(const OccupancyGrid& grid);

struct SampleSet {
  std::vector<Point> points;
};

/// n i.i.d. points, uniform over the free area. Throws NoFreeSpace.
SampleSet sample_free(const OccupancyGrid& grid, std::size_t n, std::uint64_t seed);

struct RetractionOptions {
  double step = 0.5;
  double tolerance = 1e-6;
  int max_steps = 100000;
};

/// Steepest ascent on the bilinear clearance field over 8 step directions,
/// stopping once no step improves clearance by more than the tolerance.
/// Output i is the retraction of input i.
SampleSet ma_retract(const SampleSet& samples, const ClearanceField& field, const RetractionOptions& options = {});

/// Drops every sample whose clearance disc is contained in another sample's
/// disc: ||x - y|| + r(x) <= r(y) + 1e-9. Among identical discs the lowest
/// index survives. Survivors keep their input order.
SampleSet ma_filter(const SampleSet& samples, const ClearanceField& field);

/// Marks the cell containing each point. Throws OutOfBounds, or ValueError
/// for a point on an occupied cell.
SkeletonMask samples_to_mask(const SampleSet& samples, const OccupancyGrid& grid);

/// Cell centers of all skeleton pixels, row-major.
std::vector<Point> mask_points(const SkeletonMask& mask);

/// Fraction of free cells whose center lies within `radius` of some point.
double coverage_fraction(const std::vector<Point>& points, const OccupancyGrid& grid, double radius);

}  // namespace skelnav
