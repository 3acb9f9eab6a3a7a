#pragma once

// Path navigability metrics and the corpus benchmark harness.
//
// All per-path metrics are averages over arc-length samples spaced 0.5 cells
// apart. Ray lengths for visibility and characteristic dimension are measured
// to the center line of the first occupied cell hit, which matches the
// clearance-field convention (distance between cell centers); dispersion
// classifies a ray as blocked when it enters an occupied cell within `scope`.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "skelnav/grid.hpp"
#include "skelnav/planners.hpp"
#include "skelnav/roadmap.hpp"

namespace skelnav {

inline constexpr double kPathSampleStep = 0.5;
inline constexpr double kDefaultDispersionScope = 3.0;

std::vector<Point> sample_path(const Path& path, double step = kPathSampleStep);

struct RayHit {
  /// Distance at which the ray enters the first occupied cell.
  double entry = 0.0;
  /// entry + half a cell along the ray's dominant axis.
  double center_line = 0.0;
};

/// Casts a ray from p in direction `index` of `count` equally spaced headings
/// (index 0 = +x, counter-clockwise in the (x, y) frame). Exact cell
/// traversal; cells outside the map count as occupied. A ray passing exactly
/// through a cell corner is blocked if any of the three cells it touches is.
RayHit cast_ray(const OccupancyGrid& grid, Point p, int index, int count);

double dtco(const Path& path, const ClearanceField& field);
double average_visibility(const Path& path, const OccupancyGrid& grid);
double characteristic_dimension(const Path& path, const OccupancyGrid& grid);
double dispersion(const Path& path, const OccupancyGrid& grid, double scope = kDefaultDispersionScope);

double visibility_at(const OccupancyGrid& grid, Point p);
double characteristic_dimension_at(const OccupancyGrid& grid, Point p);
int dispersion_at(const OccupancyGrid& grid, Point p, double scope = kDefaultDispersionScope);
/// Per-sample dispersion values along the path.
std::vector<int> dispersion_profile(const Path& path, const OccupancyGrid& grid, double scope = kDefaultDispersionScope);

/// Straightness ||goal - start|| / length in (0, 1]; 1 when start == goal.
double tortuosity(const Path& path, const Query& query);
/// The inverse ratio length / ||goal - start|| (>= 1); 1 when start == goal.
double tortuosity_ratio(const Path& path, const Query& query);

struct MetricSample {
  double dtco = 0.0;
  double av = 0.0;
  double dsp = 0.0;
  double cd = 0.0;
  double trts = 0.0;
};

inline constexpr std::array<const char*, 5> kMetricNames = {"dtco", "av", "dsp", "cd", "trts"};
double metric_value(const MetricSample& m, std::size_t metric);

MetricSample evaluate_path(const Path& path, const Query& query, const MapContext& ctx,
                           double scope = kDefaultDispersionScope);

struct CorpusMap {
  std::string id;
  OccupancyGrid grid;
};

struct BenchmarkConfig {
  std::vector<PlannerKind> planners;
  std::size_t queries_per_map = 5;
  std::uint64_t seed = 0;
  double scope = kDefaultDispersionScope;
  PlannerOptions planner;
  unsigned jobs = 1;
};

struct BenchmarkRow {
  std::string map;
  std::size_t query = 0;
  std::string planner;
  Query endpoints;
  MetricSample metrics;
  double length = 0.0;
  /// "ok", or the failure kind (UnconnectableStart, NoPath, ...).
  std::string status = "ok";
  bool ok() const { return status == "ok"; }
};

struct MetricStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1); 0 for n < 2
  std::size_t n = 0;
};

struct PlannerAggregate {
  std::string planner;
  std::array<MetricStats, 5> metrics;
  std::size_t ok = 0;
  std::size_t failed = 0;
};

struct BenchmarkReport {
  std::vector<BenchmarkRow> rows;
  std::vector<PlannerAggregate> aggregates;
};

MetricStats compute_stats(const std::vector<double>& values);
/// Aggregates over successful rows, one entry per planner in first-seen order.
std::vector<PlannerAggregate> aggregate_rows(const std::vector<BenchmarkRow>& rows);

/// Start/goal pairs at distinct free cell centers in the same free component.
std::vector<Query> sample_queries(const OccupancyGrid& grid, std::size_t count, std::uint64_t seed);

/// Rows are ordered (map, query, planner) whatever the job count. Throws
/// EmptyCorpus.
BenchmarkReport run_benchmark(const std::vector<CorpusMap>& corpus, const BenchmarkConfig& config);

std::string format_rows_csv(const std::vector<BenchmarkRow>& rows);
std::string format_aggregates_csv(const std::vector<PlannerAggregate>& aggregates);
std::vector<BenchmarkRow> parse_rows_csv(const std::string& text);

struct ConfidenceInterval {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Percentile bootstrap interval for the mean.
ConfidenceInterval bootstrap_mean_ci(const std::vector<double>& values, double confidence = 0.95,
                                     std::size_t resamples = 4000, std::uint64_t seed = 1);

}  // namespace skelnav
