#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "skelnav/errors.hpp"
#include "skelnav/navmetrics.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace skelnav;

namespace {

Path make_path(std::vector<Point> pts) {
  Path p{std::move(pts), 0.0};
  p.length = path_length(p.waypoints);
  return p;
}

Path center_line(int free_rows, double x0, double x1) {
  const double y = 1 + free_rows / 2 + 0.5;
  return make_path({{x0, y}, {x1, y}});
}

// Arc-length samples every 0.5 cells plus the final waypoint.
std::vector<Point> oracle_samples(const std::vector<Point>& w) {
  std::vector<Point> out;
  double total = 0;
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < w.size(); ++i) cum.push_back(total += distance(w[i - 1], w[i]));
  for (int k = 0; k * 0.5 < total - 1e-12 || k == 0; ++k) {
    const double s = k * 0.5;
    std::size_t i = 1;
    while (i + 1 < w.size() && cum[i] < s) ++i;
    const double seg = cum[i] - cum[i - 1];
    const double t = seg > 0 ? (s - cum[i - 1]) / seg : 0.0;
    out.push_back({w[i - 1].x + t * (w[i].x - w[i - 1].x), w[i - 1].y + t * (w[i].y - w[i - 1].y)});
  }
  if (!(out.back() == w.back())) out.push_back(w.back());
  return out;
}

double bilinear(const std::vector<double>& v, int w, int h, Point p) {
  const double gx = std::clamp(p.x - 0.5, 0.0, w - 1.0), gy = std::clamp(p.y - 0.5, 0.0, h - 1.0);
  const int x0 = std::min(static_cast<int>(gx), w - 1), y0 = std::min(static_cast<int>(gy), h - 1);
  const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
  const double fx = gx - x0, fy = gy - y0;
  const auto at = [&](int x, int y) { return v[static_cast<std::size_t>(y) * w + x]; };
  return (at(x0, y0) * (1 - fx) + at(x1, y0) * fx) * (1 - fy) + (at(x0, y1) * (1 - fx) + at(x1, y1) * fx) * fy;
}

// Ray length to the first occupied cell's center line, by marching.
double marched_center_line(const OccupancyGrid& g, Point p, int index, int count) {
  const double a = 2 * std::numbers::pi * index / count;
  return oracle::ray_march(g, p, a) + 0.5 / std::max(std::abs(std::cos(a)), std::abs(std::sin(a)));
}

// Marching overshoots the true entry by at most one step, so rays whose
// marched entry lies within two steps of the scope are undecidable; -1 then.
int oracle_dispersion(const OccupancyGrid& g, Point p, double scope) {
  constexpr double step = 1e-3;
  std::array<bool, 16> blocked{};
  for (int i = 0; i < 16; ++i) {
    const double d = oracle::ray_march(g, p, 2 * std::numbers::pi * i / 16, step);
    if (std::abs(d - scope) <= 2 * step) return -1;
    blocked[i] = d <= scope;
  }
  int changes = 0;
  for (int i = 0; i < 16; ++i) changes += blocked[i] != blocked[(i + 1) % 16];
  return changes;
}

Point random_free_point(const OccupancyGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(0.0, g.width()), uy(0.0, g.height());
  for (;;) {
    const Point p{ux(rng), uy(rng)};
    if (g.is_free(static_cast<int>(p.x), static_cast<int>(p.y))) return p;
  }
}

}  // namespace

TEST_SUITE("navmetrics") {
  TEST_CASE("corridor center line") {
    const auto g = fixture::corridor(9, 40);
    const auto f = distance_transform(g);
    const auto path = center_line(9, 10.5, 30.5);
    CHECK(std::abs(dtco(path, f) - 5.0) <= 0.05);
    CHECK(std::abs(characteristic_dimension(path, g) - 5.0) <= 0.05);
  }

  TEST_CASE("wall hugging path") {
    const auto g = fixture::corridor(9, 40);
    const auto path = make_path({{10.5, 1.5}, {30.5, 1.5}});
    CHECK(std::abs(dtco(path, distance_transform(g)) - 1.0) <= 0.05);
    CHECK(std::abs(characteristic_dimension(path, g) - 1.0) <= 0.05);
  }

  TEST_CASE("dtco matches the brute-force clearance on random paths") {
    std::mt19937_64 rng(4);
    for (const auto& g : fixture::dungeons(5, 64)) {
      const auto f = distance_transform(g);
      const auto edt = oracle::brute_force_edt(g);
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<Point> w;
        for (int i = 0; i < 4; ++i) w.push_back(random_free_point(g, rng));
        const auto samples = oracle_samples(w);
        double sum = 0;
        for (const auto& s : samples) sum += bilinear(edt, g.width(), g.height(), s);
        CHECK(dtco(make_path(w), f) == doctest::Approx(sum / samples.size()).epsilon(1e-9));
        CHECK(sample_path(make_path(w)).size() == samples.size());
      }
    }
  }

  TEST_CASE("average visibility in a square room") {
    for (int r = 2; r <= 6; ++r) {
      const auto g = fixture::open_room(2 * r + 1, 2 * r + 1);
      const Point c = cell_center(r, r);
      const double expected = r * (1 + std::sqrt(2.0)) / 2;
      CHECK(visibility_at(g, c) == doctest::Approx(expected).epsilon(1e-12));
      double marched = 0;
      for (int i = 0; i < 8; ++i) marched += marched_center_line(g, c, i, 8);
      CHECK(std::abs(marched / 8 - expected) < 5e-3);
      CHECK(characteristic_dimension_at(g, c) == doctest::Approx(r));
    }
    // a free cell boxed in on all eight sides
    const auto box = fixture::open_room(3, 3);
    CHECK(visibility_at(box, {1.5, 1.5}) == doctest::Approx((1 + std::sqrt(2.0)) / 2));
    CHECK(characteristic_dimension_at(box, {1.5, 1.5}) == doctest::Approx(1.0));
  }

  TEST_CASE("ray casting agrees with ray marching") {
    std::mt19937_64 rng(17);
    for (const auto& g : fixture::dungeons(5, 71)) {
      for (int trial = 0; trial < 40; ++trial) {
        const Point p = random_free_point(g, rng);
        for (int count : {8, 16}) {
          for (int i = 0; i < count; ++i) {
            const double a = 2 * std::numbers::pi * i / count;
            CHECK(std::abs(cast_ray(g, p, i, count).entry - oracle::ray_march(g, p, a)) < 2e-3);
          }
        }
        double lo = 1e9, sum = 0;
        for (int i = 0; i < 8; ++i) {
          const double d = marched_center_line(g, p, i, 8);
          lo = std::min(lo, d);
          sum += d;
        }
        CHECK(std::abs(characteristic_dimension_at(g, p) - lo) < 2e-3);
        CHECK(std::abs(visibility_at(g, p) - sum / 8) < 2e-3);
      }
    }
  }

  TEST_CASE("corner-adjacent point") {
    const auto g = fixture::open_room(12, 12);
    const Point p{1.25, 1.75};
    double lo = 1e9;
    for (int i = 0; i < 8; ++i) lo = std::min(lo, marched_center_line(g, p, i, 8));
    CHECK(std::abs(characteristic_dimension_at(g, p) - lo) < 2e-3);
    CHECK(characteristic_dimension_at(g, p) == doctest::Approx(0.75));
  }

  TEST_CASE("ray through a diagonal gap is blocked") {
    const auto g = fixture::from_ascii({
        "######",
        "#.#..#",
        "##...#",
        "#....#",
        "######",
    });
    // the 45 degree ray from (1.5,1.5) would slip between (2,1) and (1,2)
    const auto hit = cast_ray(g, {1.5, 1.5}, 1, 8);
    CHECK(hit.entry == doctest::Approx(0.5 * std::sqrt(2.0)));
  }

  TEST_CASE("dispersion fixtures") {
    const auto room = fixture::open_room(30, 30);
    CHECK(dispersion(make_path({{12.5, 12.5}, {17.5, 17.5}}), room) == 0.0);

    const auto wide = fixture::open_room(40, 40);
    const Point beside{20.5, 2.5};
    CHECK(dispersion_at(wide, beside) == 2);
    CHECK(oracle_dispersion(wide, beside, 3.0) == 2);

    const auto doorway = fixture::from_ascii({
        "#####################",
        "#...................#",
        "#...................#",
        "#...................#",
        "#...................#",
        "#...................#",
        "#...................#",
        "#...................#",
        "##########.##########",
        "#...................#",
        "#...................#",
        "#...................#",
        "#...................#",
        "#...................#",
        "#...................#",
        "#...................#",
        "#####################",
    });
    const auto path = make_path({{10.5, 3.5}, {10.5, 13.5}});
    const auto profile = dispersion_profile(path, doorway);
    REQUIRE(profile.size() == sample_path(path).size());
    const int peak = *std::max_element(profile.begin(), profile.end());
    CHECK(peak >= 2);
    CHECK(profile.front() < peak);
    CHECK(profile.back() < peak);
    const auto samples = sample_path(path);
    std::size_t decided = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const int want = oracle_dispersion(doorway, samples[i], 3.0);
      if (want < 0) continue;
      ++decided;
      CHECK(profile[i] == want);
    }
    CHECK(decided * 10 >= samples.size() * 8);
  }

  TEST_CASE("dispersion matches the ray-march classification") {
    std::mt19937_64 rng(23);
    for (const auto& g : fixture::dungeons(5, 91)) {
      for (int trial = 0; trial < 40; ++trial) {
        const Point p = random_free_point(g, rng);
        for (double scope : {3.0, 5.0}) {
          const int want = oracle_dispersion(g, p, scope);
          if (want >= 0) CHECK(dispersion_at(g, p, scope) == want);
        }
      }
    }
  }

  TEST_CASE("widening a corridor increases dtco, av and cd") {
    const auto narrow = fixture::corridor(9, 60);
    const auto wide = fixture::corridor(13, 60);
    const auto pn = center_line(9, 20.5, 40.5);
    const auto pw = center_line(13, 20.5, 40.5);
    CHECK(dtco(pw, distance_transform(wide)) > dtco(pn, distance_transform(narrow)));
    CHECK(average_visibility(pw, wide) > average_visibility(pn, narrow));
    CHECK(characteristic_dimension(pw, wide) > characteristic_dimension(pn, narrow));
  }

  TEST_CASE("tortuosity") {
    const auto l = make_path({{0, 0}, {3, 0}, {3, 4}});
    const Query q{{0, 0}, {3, 4}};
    CHECK(tortuosity(l, q) == doctest::Approx(5.0 / 7.0));
    CHECK(tortuosity_ratio(l, q) == doctest::Approx(7.0 / 5.0));
    CHECK(tortuosity(make_path({{1, 1}, {4, 5}}), {{1, 1}, {4, 5}}) == doctest::Approx(1.0));
    CHECK(tortuosity(make_path({{2, 2}}), {{2, 2}, {2, 2}}) == 1.0);
    CHECK(tortuosity_ratio(make_path({{2, 2}}), {{2, 2}, {2, 2}}) == 1.0);
  }

  TEST_CASE("sample_path spacing") {
    const auto s = sample_path(make_path({{0, 0}, {1.2, 0}, {1.2, 1.0}}));
    // arc lengths 0, .5, 1, 1.5, 2 and the end at 2.2
    REQUIRE(s.size() == 6);
    CHECK(s[2].x == doctest::Approx(1.0));
    CHECK(s[3].y == doctest::Approx(0.3));
    CHECK(s.back() == Point{1.2, 1.0});
    CHECK(sample_path(make_path({{3, 3}})).size() == 1);
    CHECK_THROWS_AS(sample_path(make_path({{0, 0}, {1, 0}}), 0.0), ValueError);
  }

  TEST_CASE("per-sample bounds on planner paths") {
    BenchmarkConfig cfg;
    cfg.planners = {PlannerKind::ZhangSuen, PlannerKind::MedialAxis, PlannerKind::GridAStar};
    cfg.queries_per_map = 3;
    const auto corpus = fixture::corpus(5, 55);
    const auto report = run_benchmark(corpus, cfg);
    for (const auto& row : report.rows) {
      if (!row.ok()) continue;
      CHECK(row.metrics.cd <= row.metrics.av + 1e-12);
      CHECK(row.metrics.dsp >= 0.0);
      CHECK(row.metrics.dsp <= 16.0);
      CHECK(row.metrics.trts > 0.0);
      CHECK(row.metrics.trts <= 1.0 + 1e-12);
    }
    for (const auto& cm : corpus) {
      const auto ctx = MapContext::from_grid(cm.grid);
      for (const auto& q : sample_queries(cm.grid, 3, 9)) {
        const auto path = grid_astar(cm.grid, q);
        for (const auto& s : sample_path(path)) {
          CHECK(characteristic_dimension_at(cm.grid, s) <= visibility_at(cm.grid, s) + 1e-12);
          const int d = dispersion_at(cm.grid, s);
          CHECK(d >= 0);
          CHECK(d <= 16);
          CHECK(d % 2 == 0);
        }
      }
    }
  }

  TEST_CASE("sample_queries") {
    const auto g = fixture::dungeons(1, 5).front();
    const auto a = sample_queries(g, 20, 3);
    CHECK(a.size() == 20);
    const auto labels = free_components(g);
    for (const auto& q : a) {
      CHECK_FALSE(q.start == q.goal);
      CHECK(q.start.x - std::floor(q.start.x) == 0.5);
      const auto ls = labels.labels[g.index(static_cast<int>(q.start.x), static_cast<int>(q.start.y))];
      const auto lg = labels.labels[g.index(static_cast<int>(q.goal.x), static_cast<int>(q.goal.y))];
      CHECK(ls >= 0);
      CHECK(ls == lg);
    }
    const auto b = sample_queries(g, 20, 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].start == b[i].start);
      CHECK(a[i].goal == b[i].goal);
    }
    CHECK_THROWS_AS(sample_queries(OccupancyGrid::closed(5, 5), 1, 0), NoFreeSpace);
  }

  TEST_CASE("benchmark accounting, aggregates and determinism") {
    const auto corpus = fixture::corpus(10, 202);
    BenchmarkConfig cfg;
    cfg.planners = {PlannerKind::ZhangSuen, PlannerKind::MedialAxis, PlannerKind::GridAStar};
    cfg.queries_per_map = 5;
    cfg.seed = 7;
    const auto report = run_benchmark(corpus, cfg);
    REQUIRE(report.rows.size() == 150);
    std::size_t ok = 0, failed = 0;
    for (const auto& agg : report.aggregates) {
      ok += agg.ok;
      failed += agg.failed;
    }
    CHECK(ok + failed == 150);

    // row order is (map, query, planner)
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      CHECK(report.rows[i].map == corpus[i / 15].id);
      CHECK(report.rows[i].query == (i / 3) % 5);
      CHECK(report.rows[i].planner == planner_report_name(cfg.planners[i % 3]));
    }

    // aggregates recomputed from rows by hand
    REQUIRE(report.aggregates.size() == 3);
    for (const auto& agg : report.aggregates) {
      for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
        std::vector<double> v;
        for (const auto& row : report.rows)
          if (row.planner == agg.planner && row.ok()) v.push_back(metric_value(row.metrics, m));
        double mean = 0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        double ss = 0;
        for (double x : v) ss += (x - mean) * (x - mean);
        const auto& st = agg.metrics[m];
        CHECK(st.n == v.size());
        CHECK(st.min == *std::min_element(v.begin(), v.end()));
        CHECK(st.max == *std::max_element(v.begin(), v.end()));
        CHECK(st.mean == doctest::Approx(mean).epsilon(1e-12));
        CHECK(st.std == doctest::Approx(std::sqrt(ss / (v.size() - 1))).epsilon(1e-12));
      }
    }
    const auto again = aggregate_rows(report.rows);
    CHECK(format_aggregates_csv(again) == format_aggregates_csv(report.aggregates));

    // the grid baseline always answers connected queries
    for (const auto& row : report.rows)
      if (row.planner == "grid-astar") CHECK(row.ok());

    cfg.jobs = 3;
    const auto parallel = run_benchmark(corpus, cfg);
    CHECK(format_rows_csv(parallel.rows) == format_rows_csv(report.rows));
    CHECK(format_aggregates_csv(parallel.aggregates) == format_aggregates_csv(report.aggregates));
  }

  TEST_CASE("rows CSV round trip") {
    BenchmarkConfig cfg;
    cfg.planners = {PlannerKind::MedialAxis, PlannerKind::GridAStar};
    cfg.queries_per_map = 4;
    const auto report = run_benchmark(fixture::corpus(4, 1), cfg);
    const auto text = format_rows_csv(report.rows);
    CHECK(text.rfind("map,query,planner,dtco,av,dsp,cd,trts,status\n", 0) == 0);
    const auto back = parse_rows_csv(text);
    REQUIRE(back.size() == report.rows.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      CHECK(back[i].map == report.rows[i].map);
      CHECK(back[i].status == report.rows[i].status);
      for (std::size_t m = 0; m < 5; ++m) CHECK(metric_value(back[i].metrics, m) == metric_value(report.rows[i].metrics, m));
    }
    CHECK(format_rows_csv(back) == text);
    CHECK_THROWS_AS(parse_rows_csv("nope\n"), FormatError);
  }

  TEST_CASE("benchmark argument errors") {
    BenchmarkConfig cfg;
    cfg.planners = {PlannerKind::GridAStar};
    CHECK_THROWS_AS(run_benchmark({}, cfg), EmptyCorpus);
    cfg.planners.clear();
    CHECK_THROWS_AS(run_benchmark(fixture::corpus(1, 1), cfg), ValueError);
  }

  TEST_CASE("compute_stats") {
    const auto s = compute_stats({2, 4, 4, 4, 5, 5, 7, 9});
    CHECK(s.mean == 5.0);
    CHECK(s.min == 2.0);
    CHECK(s.max == 9.0);
    CHECK(s.std == doctest::Approx(std::sqrt(32.0 / 7.0)));
    CHECK(compute_stats({3}).std == 0.0);
    CHECK(compute_stats({}).n == 0);
  }

  TEST_CASE("bootstrap interval") {
    std::vector<double> v;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(2.0, 1.0);
    for (int i = 0; i < 400; ++i) v.push_back(n(rng));
    const auto ci = bootstrap_mean_ci(v);
    CHECK(ci.lo < ci.mean);
    CHECK(ci.mean < ci.hi);
    // normal-theory half width 1.96 / sqrt(400) ~ 0.098
    CHECK(ci.hi - ci.lo == doctest::Approx(0.196).epsilon(0.2));
    const auto again = bootstrap_mean_ci(v);
    CHECK(again.lo == ci.lo);
    CHECK(again.hi == ci.hi);
    const auto flat = bootstrap_mean_ci(std::vector<double>(10, 3.0));
    CHECK(flat.lo == 3.0);
    CHECK(flat.hi == 3.0);
    CHECK_THROWS_AS(bootstrap_mean_ci({}), ValueError);
  }
}
