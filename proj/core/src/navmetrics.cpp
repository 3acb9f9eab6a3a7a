#include "skelnav/navmetrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "skelnav/errors.hpp"
#include "skelnav/text_util.hpp"

namespace skelnav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Dir {
  double dx;
  double dy;
};

Dir heading(int index, int count) {
  // Headings on multiples of 45 degrees are snapped so axis and diagonal rays
  // stay exactly symmetric.
  if ((8 * index) % count == 0) {
    static constexpr double h = 0.70710678118654752440;
    static constexpr std::array<Dir, 8> octants = {
        Dir{1, 0}, Dir{h, h}, Dir{0, 1}, Dir{-h, h}, Dir{-1, 0}, Dir{-h, -h}, Dir{0, -1}, Dir{h, -h}};
    return octants[static_cast<std::size_t>((8 * index) / count % 8)];
  }
  const double a = 2.0 * std::numbers::pi * index / count;
  return {std::cos(a), std::sin(a)};
}

double boundary_step(double p, double d) {
  if (d > 0) return (std::floor(p) + 1.0 - p) / d;
  if (d < 0) return (p - std::floor(p)) / -d;
  return kInf;
}

template <class F>
std::vector<double> per_sample(const Path& path, F&& f) {
  std::vector<double> out;
  for (const auto& p : sample_path(path)) out.push_back(f(p));
  return out;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::vector<Point> sample_path(const Path& path, double step) {
  if (!(step > 0)) throw ValueError("sample step must be positive");
  const auto& w = path.waypoints;
  if (w.empty()) return {};
  std::vector<Point> out{w.front()};
  double carried = 0.0;  // arc length since the last emitted sample
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double seg = distance(w[i - 1], w[i]);
    if (seg <= 0) continue;
    double s = step - carried;
    while (s < seg - 1e-12) {
      const double t = s / seg;
      out.push_back({w[i - 1].x + t * (w[i].x - w[i - 1].x), w[i - 1].y + t * (w[i].y - w[i - 1].y)});
      s += step;
    }
    carried = seg - (s - step);
  }
  if (!(out.back() == w.back())) out.push_back(w.back());
  return out;
}

RayHit cast_ray(const OccupancyGrid& grid, Point p, int index, int count) {
  const Dir d = heading(index, count);
  const double axis = std::max(std::abs(d.dx), std::abs(d.dy));
  int cx = static_cast<int>(std::floor(p.x));
  int cy = static_cast<int>(std::floor(p.y));
  const int sx = d.dx > 0 ? 1 : -1;
  const int sy = d.dy > 0 ? 1 : -1;
  double tx = boundary_step(p.x, d.dx);
  double ty = boundary_step(p.y, d.dy);
  const double dtx = d.dx != 0 ? 1.0 / std::abs(d.dx) : kInf;
  const double dty = d.dy != 0 ? 1.0 / std::abs(d.dy) : kInf;
  auto hit = [&](double t) { return RayHit{t, t + 0.5 / axis}; };

  if (grid.occupied_or_outside(cx, cy)) return hit(0.0);
  const int limit = 2 * (grid.width() + grid.height()) + 4;
  for (int step = 0; step < limit; ++step) {
    if (tx == ty) {
      const double t = tx;
      const bool blocked = grid.occupied_or_outside(cx + sx, cy) || grid.occupied_or_outside(cx, cy + sy) ||
                           grid.occupied_or_outside(cx + sx, cy + sy);
      cx += sx;
      cy += sy;
      tx += dtx;
      ty += dty;
      if (blocked) return hit(t);
    } else if (tx < ty) {
      cx += sx;
      if (grid.occupied_or_outside(cx, cy)) return hit(tx);
      tx += dtx;
    } else {
      cy += sy;
      if (grid.occupied_or_outside(cx, cy)) return hit(ty);
      ty += dty;
    }
  }
  throw Error("ray traversal did not terminate");
}

double visibility_at(const OccupancyGrid& grid, Point p) {
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) sum += cast_ray(grid, p, i, 8).center_line;
  return sum / 8.0;
}

double characteristic_dimension_at(const OccupancyGrid& grid, Point p) {
  double best = kInf;
  for (int i = 0; i < 8; ++i) best = std::min(best, cast_ray(grid, p, i, 8).center_line);
  return best;
}

int dispersion_at(const OccupancyGrid& grid, Point p, double scope) {
  std::array<bool, 16> blocked{};
  for (int i = 0; i < 16; ++i) blocked[static_cast<std::size_t>(i)] = cast_ray(grid, p, i, 16).entry <= scope;
  int transitions = 0;
  for (std::size_t i = 0; i < 16; ++i) transitions += blocked[i] != blocked[(i + 1) % 16] ? 1 : 0;
  return transitions;
}

double dtco(const Path& path, const ClearanceField& field) {
  return mean_of(per_sample(path, [&](Point p) { return field.sample(p); }));
}

double average_visibility(const Path& path, const OccupancyGrid& grid) {
  return mean_of(per_sample(path, [&](Point p) { return visibility_at(grid, p); }));
}

double characteristic_dimension(const Path& path, const OccupancyGrid& grid) {
  return mean_of(per_sample(path, [&](Point p) { return characteristic_dimension_at(grid, p); }));
}

std::vector<int> dispersion_profile(const Path& path, const OccupancyGrid& grid, double scope) {
  std::vector<int> out;
  for (const auto& p : sample_path(path)) out.push_back(dispersion_at(grid, p, scope));
  return out;
}

double dispersion(const Path& path, const OccupancyGrid& grid, double scope) {
  return mean_of(per_sample(path, [&](Point p) { return static_cast<double>(dispersion_at(grid, p, scope)); }));
}

double tortuosity(const Path& path, const Query& query) {
  const double direct = distance(query.start, query.goal);
  if (direct <= 0 || path.length <= 0) return 1.0;
  return std::min(1.0, direct / path.length);
}

double tortuosity_ratio(const Path& path, const Query& query) {
  const double direct = distance(query.start, query.goal);
  if (direct <= 0 || path.length <= 0) return 1.0;
  return std::max(1.0, path.length / direct);
}

double metric_value(const MetricSample& m, std::size_t metric) {
  switch (metric) {
    case 0: return m.dtco;
    case 1: return m.av;
    case 2: return m.dsp;
    case 3: return m.cd;
    case 4: return m.trts;
  }
  throw ValueError("metric index out of range");
}

MetricSample evaluate_path(const Path& path, const Query& query, const MapContext& ctx, double scope) {
  MetricSample m;
  const auto samples = sample_path(path);
  std::vector<double> dt, av, dsp, cd;
  for (const auto& p : samples) {
    dt.push_back(ctx.field.sample(p));
    double sum = 0.0;
    double best = kInf;
    for (int i = 0; i < 8; ++i) {
      const double r = cast_ray(ctx.grid, p, i, 8).center_line;
      sum += r;
      best = std::min(best, r);
    }
    av.push_back(sum / 8.0);
    cd.push_back(best);
    dsp.push_back(dispersion_at(ctx.grid, p, scope));
  }
  m.dtco = mean_of(dt);
  m.av = mean_of(av);
  m.dsp = mean_of(dsp);
  m.cd = mean_of(cd);
  m.trts = tortuosity(path, query);
  return m;
}

MetricStats compute_stats(const std::vector<double>& values) {
  MetricStats s;
  s.n = values.size();
  if (values.empty()) return s;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  s.mean = mean_of(values);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::vector<PlannerAggregate> aggregate_rows(const std::vector<BenchmarkRow>& rows) {
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (std::find(order.begin(), order.end(), r.planner) == order.end()) order.push_back(r.planner);
  }
  std::vector<PlannerAggregate> out;
  for (const auto& name : order) {
    PlannerAggregate agg;
    agg.planner = name;
    std::array<std::vector<double>, 5> values;
    for (const auto& r : rows) {
      if (r.planner != name) continue;
      if (!r.ok()) {
        ++agg.failed;
        continue;
      }
      ++agg.ok;
      for (std::size_t m = 0; m < 5; ++m) values[m].push_back(metric_value(r.metrics, m));
    }
    for (std::size_t m = 0; m < 5; ++m) agg.metrics[m] = compute_stats(values[m]);
    out.push_back(std::move(agg));
  }
  return out;
}

std::vector<Query> sample_queries(const OccupancyGrid& grid, std::size_t count, std::uint64_t seed) {
  const auto comps = free_components(grid);
  std::vector<std::pair<int, int>> free;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.is_free(x, y)) free.emplace_back(x, y);
    }
  }
  if (free.size() < 2) throw NoFreeSpace("map needs at least two free cells for a query");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
  std::vector<Query> out;
  const std::size_t budget = 1000 * std::max<std::size_t>(count, 1);
  for (std::size_t attempt = 0; out.size() < count && attempt < budget; ++attempt) {
    const auto a = free[pick(rng)];
    const auto b = free[pick(rng)];
    if (a == b) continue;
    if (comps.labels[grid.index(a.first, a.second)] != comps.labels[grid.index(b.first, b.second)]) continue;
    out.push_back({cell_center(a.first, a.second), cell_center(b.first, b.second)});
  }
  if (out.size() < count) throw NoFreeSpace("could not sample connected query endpoints");
  return out;
}

namespace {

template <class E>
bool is_a(const std::exception& e) {
  return dynamic_cast<const E*>(&e) != nullptr;
}

std::string failure_kind(const std::exception& e) {
  if (is_a<UnconnectableStart>(e)) return "UnconnectableStart";
  if (is_a<UnconnectableGoal>(e)) return "UnconnectableGoal";
  if (is_a<NoPath>(e)) return "NoPath";
  if (is_a<EmptySkeleton>(e)) return "EmptySkeleton";
  if (is_a<TopologyError>(e)) return "TopologyError";
  return "Error";
}

std::vector<BenchmarkRow> benchmark_map(const CorpusMap& map, std::size_t map_index, const BenchmarkConfig& config) {
  const auto ctx = MapContext::from_grid(map.grid);
  const auto map_seed = derive_seed(config.seed, map_index);
  const auto queries = sample_queries(ctx.grid, config.queries_per_map, map_seed);

  struct Prepared {
    std::optional<PreparedPlanner> planner;
    std::string failure;
  };
  std::vector<Prepared> prepared;
  for (const auto kind : config.planners) {
    Prepared p;
    auto opts = config.planner;
    opts.seed = map_seed;
    try {
      p.planner = PreparedPlanner::prepare(kind, ctx, opts);
    } catch (const Error& e) {
      p.failure = failure_kind(e);
    }
    prepared.push_back(std::move(p));
  }

  std::vector<BenchmarkRow> rows;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    for (std::size_t i = 0; i < config.planners.size(); ++i) {
      BenchmarkRow row;
      row.map = map.id;
      row.query = q;
      row.planner = planner_report_name(config.planners[i]);
      row.endpoints = queries[q];
      if (!prepared[i].planner) {
        row.status = prepared[i].failure;
      } else {
        try {
          const auto path = prepared[i].planner->plan(ctx, queries[q]);
          row.length = path.length;
          row.metrics = evaluate_path(path, queries[q], ctx, config.scope);
        } catch (const Error& e) {
          row.status = failure_kind(e);
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

BenchmarkReport run_benchmark(const std::vector<CorpusMap>& corpus, const BenchmarkConfig& config) {
  if (corpus.empty()) throw EmptyCorpus("benchmark corpus has no maps");
  if (config.planners.empty()) throw ValueError("benchmark needs at least one planner");

  std::vector<std::vector<BenchmarkRow>> per_map(corpus.size());
  std::vector<std::exception_ptr> errors(corpus.size());
  const unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(corpus.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < corpus.size(); i = next++) {
      try {
        per_map[i] = benchmark_map(corpus[i], i, config);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  BenchmarkReport report;
  for (auto& rows : per_map) {
    for (auto& r : rows) report.rows.push_back(std::move(r));
  }
  report.aggregates = aggregate_rows(report.rows);
  return report;
}

std::string format_rows_csv(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream os;
  os << "map,query,planner,dtco,av,dsp,cd,trts,status\n";
  for (const auto& r : rows) {
    os << r.map << ',' << r.query << ',' << r.planner;
    for (std::size_t m = 0; m < 5; ++m) {
      os << ',';
      if (r.ok()) os << format_double(metric_value(r.metrics, m));
    }
    os << ',' << r.status << '\n';
  }
  return os.str();
}

std::string format_aggregates_csv(const std::vector<PlannerAggregate>& aggregates) {
  std::ostringstream os;
  os << "planner,metric,min,max,mean,std,n\n";
  for (const auto& a : aggregates) {
    for (std::size_t m = 0; m < 5; ++m) {
      const auto& s = a.metrics[m];
      os << a.planner << ',' << kMetricNames[m] << ',' << format_double(s.min) << ',' << format_double(s.max) << ','
         << format_double(s.mean) << ',' << format_double(s.std) << ',' << s.n << '\n';
    }
  }
  return os.str();
}

std::vector<BenchmarkRow> parse_rows_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || trim(line) != "map,query,planner,dtco,av,dsp,cd,trts,status") {
    throw FormatError("missing benchmark CSV header");
  }
  std::vector<BenchmarkRow> rows;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(trim(line), ',');
    if (f.size() != 9) throw FormatError("benchmark row needs 9 fields: " + line);
    BenchmarkRow r;
    r.map = f[0];
    r.query = static_cast<std::size_t>(parse_int(f[1]));
    r.planner = f[2];
    r.status = f[8];
    if (r.ok()) {
      r.metrics = {parse_double(f[3]), parse_double(f[4]), parse_double(f[5]), parse_double(f[6]),
                   parse_double(f[7])};
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

ConfidenceInterval bootstrap_mean_ci(const std::vector<double>& values, double confidence, std::size_t resamples,
                                     std::uint64_t seed) {
  if (values.empty()) throw ValueError("bootstrap needs at least one value");
  if (!(confidence > 0 && confidence < 1)) throw ValueError("confidence must lie in (0, 1)");
  ConfidenceInterval ci;
  ci.mean = mean_of(values);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> means(std::max<std::size_t>(resamples, 1));
  for (auto& m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += values[pick(rng)];
    m = sum / static_cast<double>(values.size());
  }
  std::sort(means.begin(), means.end());
  const double alpha = (1.0 - confidence) / 2.0;
  auto at = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::clamp(q * static_cast<double>(means.size() - 1), 0.0,
                                                         static_cast<double>(means.size() - 1)));
    return means[idx];
  };
  ci.lo = at(alpha);
  ci.hi = at(1.0 - alpha);
  return ci;
}

}  // namespace skelnav
