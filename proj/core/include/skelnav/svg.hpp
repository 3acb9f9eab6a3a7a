#pragma once

// Minimal SVG rendering for maps, paths, executions and metric box plots.
// Map drawings use one user unit per cell scaled by `scale` pixels.

#include <string>
#include <vector>

#include "skelnav/grid.hpp"
#include "skelnav/roadmap.hpp"
#include "skelnav/simexec.hpp"
#include "skelnav/skeleton.hpp"

namespace skelnav {

struct Polyline {
  std::vector<Point> points;
  std::string color = "red";
  double width = 0.3;
};

struct Marker {
  Point at;
  std::string color = "black";
  double radius = 0.4;
};

struct MapLayers {
  const SkeletonMask* skeleton = nullptr;
  const Roadmap* roadmap = nullptr;
  std::vector<Polyline> lines;
  std::vector<Marker> markers;
};

std::string render_map_svg(const OccupancyGrid& grid, const MapLayers& layers, double scale = 8.0);

/// Planned path in red, executed trajectory in blue, risky samples in orange
/// and collisions in black.
std::string render_execution_svg(const OccupancyGrid& grid, const Path& planned, const ExecutedTrajectory& traj,
                                 const RiskReport& report, double scale = 8.0);

struct BoxGroup {
  std::string label;
  std::vector<double> values;
};

struct BoxStats {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
};

/// Quartiles by linear interpolation; whiskers at the extreme values within
/// 1.5 IQR of the box.
BoxStats box_stats(std::vector<double> values);

std::string render_boxplot_svg(const std::string& title, const std::vector<BoxGroup>& groups);

}  // namespace skelnav
