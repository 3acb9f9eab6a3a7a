#include <chrono>
#include <cstdio>

#include "commands.hpp"
#include "output.hpp"
#include "skelnav/grid.hpp"
#include "skelnav/map_io.hpp"

namespace skelnav::cli {

int cmd_generate(const Globals& g, const GenerateArgs& a) {
  GenParams base;
  base.width = a.width;
  base.height = a.height;
  base.room_count = {a.rooms_min, a.rooms_max};
  base.room_size = {a.room_size_min, a.room_size_max};
  base.corridor_width = a.corridor_width;
  base.retry_budget = a.retry_budget;
  base.validate();

  fs::create_directories(a.out);
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < a.count; ++i) {
    GenParams p = base;
    p.seed = derive_seed(a.seed, i);
    const auto grid = generate_dungeon(p);

    char name[32];
    std::snprintf(name, sizeof name, "map_%05zu", i);
    const auto map_path = a.out / (std::string(name) + ".pgm");
    write_map_file(map_path, grid);
    write_text_file(meta_path_for(map_path), format_meta({
                                                 {"index", std::to_string(i)},
                                                 {"master_seed", std::to_string(a.seed)},
                                                 {"seed", std::to_string(p.seed)},
                                                 {"width", std::to_string(p.width)},
                                                 {"height", std::to_string(p.height)},
                                                 {"room_count", std::to_string(a.rooms_min) + "-" + std::to_string(a.rooms_max)},
                                                 {"room_size", std::to_string(a.room_size_min) + "-" + std::to_string(a.room_size_max)},
                                                 {"corridor_width", std::to_string(p.corridor_width)},
                                             }));
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  auto m = make_manifest(g, "generate");
  m["master_seed"] = a.seed;
  m["count"] = a.count;
  m["params"] = {{"width", a.width},
                 {"height", a.height},
                 {"room_count", {a.rooms_min, a.rooms_max}},
                 {"room_size", {a.room_size_min, a.room_size_max}},
                 {"corridor_width", a.corridor_width},
                 {"retry_budget", a.retry_budget}};
  m["wall_seconds"] = wall;
  write_manifest(a.out / "manifest.json", m);

  Report(g.porcelain).add("maps", a.count).add("out", a.out.string()).add("wall_seconds", wall).print();
  return kExitOk;
}

}  // namespace skelnav::cli
