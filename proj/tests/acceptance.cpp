// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Thresholds live in the constants below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "skelnav/errors.hpp"
#include "skelnav/navmetrics.hpp"
#include "skelnav/neuroskel.hpp"
#include "skelnav/planners.hpp"
#include "skelnav/roadmap.hpp"
#include "skelnav/simexec.hpp"
#include "skelnav/skeleton.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace skelnav;

namespace {

constexpr std::uint64_t kCorpusSeed = 20240601;

constexpr std::size_t kThinningOracleMaps = 20;
constexpr double kThinningBudgetSeconds = 0.050;
constexpr std::size_t kThinningPropertyMaps = 100;
constexpr std::size_t kSoundnessMaps = 50;
constexpr std::size_t kSoundnessK = 6;
constexpr double kCollisionOracleStep = 0.05;
constexpr std::size_t kReuseQueries = 100;
constexpr double kReuseOnlineFraction = 0.10;
constexpr std::size_t kAStarMaps = 50;
constexpr double kAStarTolerance = 1e-9;
constexpr std::size_t kOrderingMaps = 50;
constexpr std::size_t kOrderingQueries = 5;
constexpr double kOrderingConfidence = 0.95;
constexpr double kOrderingBudgetSeconds = 600.0;
constexpr std::size_t kCoverageMaps = 50;
constexpr std::size_t kCoverageSamples = 100;
constexpr double kCoverageRadius = 3.0;
constexpr double kCoverageMajority = 0.80;
constexpr std::size_t kFilterSets = 100;
constexpr double kMetricTolerance = 0.05;
constexpr double kConvTolerance = 1e-6;
constexpr std::size_t kSafetyMaps = 50;
constexpr std::size_t kSafetyQueries = 5;
constexpr double kSafetyNoise = 0.1;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool path_clear(const OccupancyGrid& g, const Path& p) {
  for (std::size_t i = 0; i + 1 < p.waypoints.size(); ++i)
    if (oracle::supersampled_collides(g, p.waypoints[i], p.waypoints[i + 1], kCollisionOracleStep)) return false;
  return true;
}

Outcome thinning_oracle() {
  std::size_t mismatches = 0;
  double worst = 0;
  for (const auto& g : fixture::dungeons(kThinningOracleMaps, kCorpusSeed)) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto s = zhang_suen(g);
    worst = std::max(worst, seconds_since(t0));
    mismatches += s.bits() != oracle::zhang_suen(g);
  }
  return {mismatches == 0 && worst < kThinningBudgetSeconds,
          std::to_string(kThinningOracleMaps - mismatches) + "/" + std::to_string(kThinningOracleMaps) +
              " maps pixel-exact, slowest " + fmt(worst * 1e3, 3) + " ms"};
}

Outcome thinning_properties() {
  std::size_t failures = 0;
  for (const auto& g : fixture::dungeons(kThinningPropertyMaps, kCorpusSeed + 1)) {
    const auto s = zhang_suen(g);
    const bool idempotent = zhang_suen(mask_as_grid(s)) == s;
    const bool connected = oracle::components8(s.bits(), s.width(), s.height()) == oracle::free_components4(g);
    const bool thin = !oracle::has_2x2_block(s.bits(), s.width(), s.height());
    failures += !(idempotent && connected && thin);
  }
  return {failures == 0, std::to_string(failures) + " failures on " + std::to_string(kThinningPropertyMaps) + " maps"};
}

Outcome roadmap_soundness() {
  std::size_t edges = 0, bad_edges = 0, segments = 0, bad_paths = 0, paths = 0;
  std::size_t map_index = 0;
  for (const auto& g : fixture::dungeons(kSoundnessMaps, kCorpusSeed + 2)) {
    const auto ctx = MapContext::from_grid(g);
    PlannerOptions opt;
    opt.k_nearest = kSoundnessK;
    opt.seed = map_index;
    const auto queries = sample_queries(g, 5, derive_seed(kCorpusSeed, map_index++));
    for (auto kind : {PlannerKind::ZhangSuen, PlannerKind::MedialAxis}) {
      const auto planner = PreparedPlanner::prepare(kind, ctx, opt);
      const auto& rm = *planner.roadmap();
      for (const auto& e : rm.edges()) {
        ++edges;
        bad_edges += oracle::supersampled_collides(g, rm.vertices()[e.a], rm.vertices()[e.b], kCollisionOracleStep);
      }
      for (const auto& q : queries) {
        try {
          const auto p = planner.plan(ctx, q);
          ++paths;
          segments += p.waypoints.size() - 1;
          bad_paths += !path_clear(g, p);
        } catch (const Error&) {
        }
      }
    }
  }
  return {bad_edges == 0 && bad_paths == 0 && paths > 0,
          std::to_string(edges - bad_edges) + "/" + std::to_string(edges) + " edges clear, " +
              std::to_string(paths - bad_paths) + "/" + std::to_string(paths) + " paths clear (" +
              std::to_string(segments) + " segments)"};
}

Outcome multi_query_reuse() {
  const auto ctx = MapContext::from_grid(fixture::dungeons(1, kCorpusSeed + 3).front());
  const PlannerOptions opt;
  const auto shared = PreparedPlanner::prepare(PlannerKind::ZhangSuen, ctx, opt);
  const auto queries = sample_queries(ctx.grid, kReuseQueries, kCorpusSeed);
  std::size_t identical = 0;
  double online = 0, build = 0;
  for (const auto& q : queries) {
    std::string a_status = "ok", b_status = "ok";
    Path a, b;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      a = shared.plan(ctx, q);
    } catch (const Error& e) {
      a_status = e.what();
    }
    online += seconds_since(t0);
    const auto fresh = PreparedPlanner::prepare(PlannerKind::ZhangSuen, ctx, opt);
    build += fresh.offline_seconds();
    try {
      b = fresh.plan(ctx, q);
    } catch (const Error& e) {
      b_status = e.what();
    }
    identical += a_status == b_status && a.waypoints == b.waypoints;
  }
  const double n = static_cast<double>(queries.size());
  const double ratio = (online / n) / (build / n);
  return {identical == queries.size() && ratio < kReuseOnlineFraction,
          std::to_string(identical) + "/" + std::to_string(queries.size()) + " identical, online " +
              fmt(online / n * 1e6, 1) + " us vs build " + fmt(build / n * 1e6, 1) + " us per query (" +
              fmt(100 * ratio, 2) + "%)"};
}

Outcome astar_optimality() {
  std::size_t agree = 0;
  double worst = 0;
  std::size_t map_index = 0;
  for (const auto& g : fixture::dungeons(kAStarMaps, kCorpusSeed + 4)) {
    const auto q = sample_queries(g, 1, derive_seed(kCorpusSeed, map_index++)).front();
    const double cost = grid_astar(g, q).length;
    const double ucs = oracle::ucs_grid_cost(g, static_cast<int>(q.start.x), static_cast<int>(q.start.y),
                                             static_cast<int>(q.goal.x), static_cast<int>(q.goal.y));
    worst = std::max(worst, std::abs(cost - ucs));
    agree += std::abs(cost - ucs) <= kAStarTolerance;
  }
  return {agree == kAStarMaps, std::to_string(agree) + "/" + std::to_string(kAStarMaps) + " maps agree, max |diff| " +
                                   fmt(worst, 12)};
}

// Paired differences a - b over (map, query) pairs where both planners succeeded.
std::vector<double> paired(const BenchmarkReport& r, const std::string& a, const std::string& b, std::size_t metric) {
  std::vector<double> out;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (r.rows[i].planner != a || !r.rows[i].ok()) continue;
    for (std::size_t j = 0; j < r.rows.size(); ++j) {
      const auto& o = r.rows[j];
      if (o.planner == b && o.ok() && o.map == r.rows[i].map && o.query == r.rows[i].query)
        out.push_back(metric_value(r.rows[i].metrics, metric) - metric_value(o.metrics, metric));
    }
  }
  return out;
}

Outcome table_orderings() {
  const auto t0 = std::chrono::steady_clock::now();
  BenchmarkConfig cfg;
  cfg.planners = {PlannerKind::ZhangSuen, PlannerKind::MedialAxis, PlannerKind::GridAStar};
  cfg.queries_per_map = kOrderingQueries;
  cfg.seed = kCorpusSeed;
  const auto report = run_benchmark(fixture::corpus(kOrderingMaps, kCorpusSeed + 5), cfg);
  const double wall = seconds_since(t0);

  struct Check {
    const char* label;
    std::string a, b;
    std::size_t metric;
  };
  const std::vector<Check> checks = {
      {"DTCO zs>astar", "zhangsuen-roadmap", "grid-astar", 0},
      {"Dsp astar>zs", "grid-astar", "zhangsuen-roadmap", 2},
      {"Trts astar>zs", "grid-astar", "zhangsuen-roadmap", 4},
      {"Trts astar>ma", "grid-astar", "ma-roadmap", 4},
  };
  bool pass = wall < kOrderingBudgetSeconds;
  std::string detail;
  for (const auto& c : checks) {
    const auto diffs = paired(report, c.a, c.b, c.metric);
    const auto ci = bootstrap_mean_ci(diffs, kOrderingConfidence);
    const bool ok = ci.lo > 0;
    pass = pass && ok;
    detail += std::string(c.label) + " diff " + fmt(ci.mean) + " [" + fmt(ci.lo) + ", " + fmt(ci.hi) + "] n=" +
              std::to_string(diffs.size()) + (ok ? "" : " (not significant)") + "; ";
  }
  return {pass, detail + fmt(wall, 2) + " s"};
}

Outcome ma_coverage() {
  std::size_t lower = 0;
  std::size_t map_index = 0;
  for (const auto& g : fixture::dungeons(kCoverageMaps, kCorpusSeed + 6)) {
    const auto ctx = MapContext::from_grid(g);
    PlannerOptions opt;
    opt.ma_samples = kCoverageSamples;
    opt.seed = map_index++;
    const auto ma = build_graph(skeletonize(PlannerKind::MedialAxis, ctx, opt), g, ctx.obstacles);
    const double ma_cov = coverage_fraction(ma.vertices(), g, kCoverageRadius);
    const double zs_cov = coverage_fraction(mask_points(zhang_suen(g)), g, kCoverageRadius);
    lower += ma_cov < zs_cov;
  }
  return {static_cast<double>(lower) >= kCoverageMajority * kCoverageMaps,
          "MA below Zhang-Suen on " + std::to_string(lower) + "/" + std::to_string(kCoverageMaps) + " maps"};
}

Outcome disc_filter() {
  const auto maps = fixture::dungeons(10, kCorpusSeed + 7);
  std::mt19937_64 rng(kCorpusSeed);
  std::size_t agree = 0;
  for (std::size_t trial = 0; trial < kFilterSets; ++trial) {
    const auto& g = maps[trial % maps.size()];
    const auto f = distance_transform(g);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 300)(rng);
    auto s = sample_free(g, n, trial);
    if (trial % 2) s = ma_retract(s, f);
    if (n > 3) s.points[n - 1] = s.points[0];
    std::vector<double> r;
    for (const auto& p : s.points) r.push_back(f.sample(p));
    std::vector<Point> expect;
    for (auto i : oracle::disc_filter(s.points, r)) expect.push_back(s.points[i]);
    agree += ma_filter(s, f).points == expect;
  }
  return {agree == kFilterSets, std::to_string(agree) + "/" + std::to_string(kFilterSets) + " sets identical"};
}

Outcome metric_oracles() {
  constexpr int kLength = 40;
  const auto corridor = fixture::corridor(9, kLength);
  Path line{{{10.5, 5.5}, {30.5, 5.5}}, 20.0};
  const double d = dtco(line, distance_transform(corridor));
  const double cd = characteristic_dimension(line, corridor);
  const double av = average_visibility(line, corridor);
  // up/down reach the wall center lines at 5, the diagonals at 5 sqrt 2, and
  // the two horizontal rays sum to the corridor length minus one
  const double av_expected = (10.0 + (kLength - 1) + 20.0 * std::sqrt(2.0)) / 8.0;
  const double open = dispersion(Path{{{12.5, 12.5}, {17.5, 17.5}}, 0.0}, fixture::open_room(30, 30));
  const int half_plane = dispersion_at(fixture::open_room(40, 40), {20.5, 2.5});
  const bool pass = std::abs(d - 5.0) <= kMetricTolerance && std::abs(cd - 5.0) <= kMetricTolerance &&
                    std::abs(av - av_expected) <= kMetricTolerance && open == 0.0 && half_plane == 2;
  return {pass, "dtco " + fmt(d) + " cd " + fmt(cd) + " av " + fmt(av) + " (expect " + fmt(av_expected) +
                    ") dsp open " + fmt(open, 1) + " half-plane " + std::to_string(half_plane)};
}

Outcome neural_inference() {
  const auto maps = fixture::dungeons(3, kCorpusSeed + 8);
  bool uniform = true;
  for (const auto& g : maps)
    for (double v : forward(constant_parameters(0.0f), g).values) uniform = uniform && v == 0.5;

  const std::vector<double> image = {1, 0, 1, 1, 0, 0, 1, 1, 0, 1, 1, 1, 0, 0, 1, 0, 0, 1, 1, 1, 1, 0, 1, 0, 1};
  const std::vector<double> kernel = {0.1, -0.2, 0.3, 0.0, 1.0, 0.0, -0.5, 0.25, 0.125};
  nn::FeatureMap in(1, 5, 5);
  for (std::size_t i = 0; i < image.size(); ++i) in.data[i] = static_cast<float>(image[i]);
  Tensor w{{1, 1, 3, 3}, {}};
  for (double k : kernel) w.data.push_back(static_cast<float>(k));
  const auto out = nn::conv2d(in, w, Tensor{{1}, {0.75f}}, 1);
  const auto expected = oracle::convolve_same(image, 5, 5, kernel, 3, 0.75);
  double worst = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) worst = std::max(worst, std::abs(out.data[i] - expected[i]));

  // random weights give a non-trivial probability map to threshold
  std::mt19937_64 rng(kCorpusSeed);
  std::uniform_real_distribution<float> u(-0.3f, 0.3f);
  NetworkParameters params;
  for (const auto& spec : skelunet_manifest()) {
    Tensor t{spec.shape, {}};
    t.data.resize(t.element_count());
    for (auto& v : t.data) v = u(rng);
    params.add(spec.name, std::move(t));
  }
  const std::vector<double> taus = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::size_t violations = 0;
  for (const auto& g : maps) {
    const auto pm = forward(params, g);
    for (std::size_t i = 0; i + 1 < taus.size(); ++i) {
      const auto lo = apply_threshold(pm, taus[i], g), hi = apply_threshold(pm, taus[i + 1], g);
      for (std::size_t k = 0; k < lo.bits().size(); ++k) violations += hi.bits()[k] && !lo.bits()[k];
    }
  }
  return {uniform && worst <= kConvTolerance && violations == 0,
          std::string("zero weights ") + (uniform ? "uniform 0.5" : "NOT uniform") + ", conv max err " +
              fmt(worst, 12) + ", antitone violations " + std::to_string(violations)};
}

Outcome execution_safety() {
  const std::vector<PlannerKind> kinds = {PlannerKind::ZhangSuen, PlannerKind::MedialAxis, PlannerKind::GridAStar};
  std::vector<double> sum(kinds.size(), 0.0);
  std::vector<std::size_t> count(kinds.size(), 0);
  const RobotParams robot;
  std::size_t map_index = 0;
  for (const auto& g : fixture::dungeons(kSafetyMaps, kCorpusSeed + 9)) {
    const auto ctx = MapContext::from_grid(g);
    PlannerOptions opt;
    opt.seed = map_index;
    const auto queries = sample_queries(g, kSafetyQueries, derive_seed(kCorpusSeed, map_index));
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      const auto planner = PreparedPlanner::prepare(kinds[k], ctx, opt);
      for (std::size_t q = 0; q < queries.size(); ++q) {
        Path path;
        try {
          path = planner.plan(ctx, queries[q]);
        } catch (const Error&) {
          continue;
        }
        TrackOptions track_opt;
        track_opt.noise_sigma = kSafetyNoise;
        track_opt.seed = derive_seed(kCorpusSeed + map_index, q);
        const auto traj = track(path, robot, default_gains(), track_opt);
        sum[k] += audit_collisions(traj, g, ctx.field, robot).collision_fraction;
        ++count[k];
      }
    }
    ++map_index;
  }
  std::vector<double> mean(kinds.size());
  for (std::size_t k = 0; k < kinds.size(); ++k) mean[k] = count[k] ? sum[k] / count[k] : 0.0;
  const bool pass = count[0] && count[1] && mean[0] < mean[2] && mean[1] < mean[2];
  std::string detail;
  for (std::size_t k = 0; k < kinds.size(); ++k)
    detail += planner_report_name(kinds[k]) + " " + fmt(mean[k], 5) + " (n=" + std::to_string(count[k]) + ") ";
  return {pass, detail};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"thinning-oracle", thinning_oracle},
      {"thinning-idempotence-connectivity", thinning_properties},
      {"roadmap-soundness", roadmap_soundness},
      {"multi-query-reuse", multi_query_reuse},
      {"astar-optimality", astar_optimality},
      {"corpus-orderings", table_orderings},
      {"ma-coverage-deficiency", ma_coverage},
      {"disc-filter-oracle", disc_filter},
      {"metric-oracles", metric_oracles},
      {"neural-inference", neural_inference},
      {"execution-safety", execution_safety},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
