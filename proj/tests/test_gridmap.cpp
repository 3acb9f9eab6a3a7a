#include <doctest.h>

#include <cmath>

#include "skelnav/errors.hpp"
#include "skelnav/grid.hpp"
#include "skelnav/map_io.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace skelnav;

TEST_SUITE("gridmap") {
  TEST_CASE("grid rejects an open border and bad sizes") {
    std::vector<CellState> cells(9, CellState::Free);
    CHECK_THROWS_AS(OccupancyGrid(3, 3, cells), ValueError);
    CHECK_THROWS_AS(OccupancyGrid(3, 2, std::vector<CellState>(9, CellState::Occupied)), ValueError);
    auto g = OccupancyGrid::closed(4, 4);
    CHECK_THROWS_AS(g.set(0, 1, CellState::Free), ValueError);
    g.set(1, 1, CellState::Free);
    CHECK(g.is_free(1, 1));
    CHECK(g.free_count() == 1);
  }

  TEST_CASE("generator is deterministic and closed") {
    GenParams p;
    p.seed = 42;
    const auto a = generate_dungeon(p);
    const auto b = generate_dungeon(p);
    CHECK(a == b);
    p.seed = 43;
    CHECK_FALSE(generate_dungeon(p) == a);
    for (int x = 0; x < a.width(); ++x) {
      CHECK(a.is_occupied(x, 0));
      CHECK(a.is_occupied(x, a.height() - 1));
    }
    for (int y = 0; y < a.height(); ++y) {
      CHECK(a.is_occupied(0, y));
      CHECK(a.is_occupied(a.width() - 1, y));
    }
  }

  TEST_CASE("generated free space is one 4-connected component over 100 seeds") {
    int failures = 0;
    for (const auto& g : fixture::dungeons(100, 2024)) {
      if (oracle::free_components4(g) != 1) ++failures;
      if (free_components(g).count != 1) ++failures;
    }
    CHECK(failures == 0);
  }

  TEST_CASE("generator honours non-default sizes") {
    GenParams p;
    p.width = 96;
    p.height = 48;
    p.seed = 9;
    const auto g = generate_dungeon(p);
    CHECK(g.width() == 96);
    CHECK(g.height() == 48);
    CHECK(oracle::free_components4(g) == 1);
  }

  TEST_CASE("impossible parameters exhaust the retry budget") {
    GenParams p;
    p.width = 16;
    p.height = 16;
    p.room_count = {9, 9};
    p.room_size = {12, 14};
    p.retry_budget = 5;
    try {
      generate_dungeon(p);
      FAIL("expected GenerationFailure");
    } catch (const GenerationFailure& e) {
      CHECK(std::string(e.what()).find("after 5 attempts") != std::string::npos);
    }
    GenParams bad;
    bad.corridor_width = 0;
    CHECK_THROWS_AS(bad.validate(), ValueError);
    bad = GenParams{};
    bad.room_count = {5, 4};
    CHECK_THROWS_AS(bad.validate(), ValueError);
  }

  TEST_CASE("distance transform fixtures") {
    const auto room = fixture::open_room(10, 10);
    const auto f = distance_transform(room);
    CHECK(f.at(1, 5) == doctest::Approx(1.0));
    CHECK(f.at(0, 0) == 0.0);
    const auto corr = fixture::corridor(9, 30);
    const auto fc = distance_transform(corr);
    CHECK(fc.at(15, 5) == doctest::Approx(5.0));
  }

  TEST_CASE("distance transform matches brute force on random grids") {
    std::uint64_t s = 77;
    for (int trial = 0; trial < 5; ++trial) {
      auto g = OccupancyGrid::closed(64, 64);
      for (int y = 1; y < 63; ++y)
        for (int x = 1; x < 63; ++x) {
          s = s * 6364136223846793005ULL + 1442695040888963407ULL;
          if ((s >> 33) % 100 < 80) g.set(x, y, CellState::Free);
        }
      const auto f = distance_transform(g);
      const auto ref = oracle::brute_force_edt(g);
      double worst = 0;
      for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) worst = std::max(worst, std::abs(f.at(x, y) - ref[g.index(x, y)]));
      CHECK(worst <= 1e-9);
      for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) CHECK((f.at(x, y) == 0.0) == g.is_occupied(x, y));
    }
  }

  TEST_CASE("clearance sampling interpolates between centers") {
    const auto corr = fixture::corridor(9, 30);
    const auto f = distance_transform(corr);
    CHECK(f.sample({15.5, 5.5}) == doctest::Approx(5.0));
    CHECK(f.sample({15.5, 5.0}) == doctest::Approx(4.5));
  }

  TEST_CASE("derive_seed spreads indices") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  }
}

TEST_SUITE("map_io") {
  TEST_CASE("P5 round trip and payload size") {
    const auto g = fixture::open_room(64, 64);
    const auto bytes = save_map(g, MapFormat::PgmBinary);
    const std::string header = "P5\n64 64\n255\n";
    CHECK(bytes.size() == header.size() + 4096);
    CHECK(std::string(bytes.begin(), bytes.begin() + header.size()) == header);
    CHECK(load_map(bytes, MapFormat::PgmBinary) == g);
    CHECK(detect_format(bytes) == MapFormat::PgmBinary);
  }

  TEST_CASE("P2 and PNG round trips") {
    GenParams p;
    p.seed = 3;
    const auto g = generate_dungeon(p);
    for (auto fmt : {MapFormat::PgmAscii, MapFormat::Png}) {
      const auto bytes = save_map(g, fmt);
      CHECK(detect_format(bytes) == fmt);
      CHECK(load_map(bytes, fmt) == g);
    }
  }

  TEST_CASE("non-binary pixels and malformed headers are rejected") {
    GrayImage img{4, 4, std::vector<std::uint8_t>(16, 0)};
    img.pixels[5] = 128;
    const auto bytes = encode_gray(img, MapFormat::PgmBinary);
    CHECK_THROWS_AS(load_map(bytes, MapFormat::PgmBinary), ValueError);

    std::string truncated = "P5\n4 4\n255\n0123";
    CHECK_THROWS_AS(load_map(std::vector<std::uint8_t>(truncated.begin(), truncated.end()), MapFormat::PgmBinary),
                    FormatError);
    std::string junk = "P7\n";
    CHECK_THROWS_AS(detect_format(std::vector<std::uint8_t>(junk.begin(), junk.end())), FormatError);
    std::string ascii = "P2\n3 3\n255\n0 0 0\n0 255 0\n0 0\n";
    CHECK_THROWS_AS(load_map(std::vector<std::uint8_t>(ascii.begin(), ascii.end()), MapFormat::PgmAscii),
                    FormatError);
  }

  TEST_CASE("P2 tolerates comments") {
    std::string ascii = "P2\n# made by hand\n3 3\n255\n0 0 0\n0 255 0\n0 0 0\n";
    const auto g = load_map(std::vector<std::uint8_t>(ascii.begin(), ascii.end()), MapFormat::PgmAscii);
    CHECK(g.is_free(1, 1));
    CHECK(g.free_count() == 1);
  }

  TEST_CASE("meta files round trip") {
    MapMeta m{{"seed", "17"}, {"width", "64"}};
    CHECK(parse_meta(format_meta(m)) == m);
    CHECK(format_meta(m) == "seed=17\nwidth=64\n");
    CHECK(meta_path_for("a/map_00001.pgm") == std::filesystem::path("a/map_00001.meta"));
    CHECK_THROWS_AS(parse_meta("novalue\n"), FormatError);
  }
}
