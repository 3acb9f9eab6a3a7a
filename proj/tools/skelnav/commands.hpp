#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace skelnav::cli {

namespace fs = std::filesystem;

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitNoPath = 3;
inline constexpr int kExitUnconnectable = 4;

struct Globals {
  bool porcelain = false;
  /// Full argument vector (without the program name), stored in manifests.
  std::vector<std::string> argv;
};

/// Options every planner-facing command understands.
struct PlannerFlags {
  std::string planner = "zhangsuen";
  std::size_t k = 6;
  double tau = 0.5;
  std::size_t samples = 100;
  std::size_t stride = 1;
  std::uint64_t seed = 0;
  std::string weights;
};

struct GenerateArgs {
  std::size_t count = 10;
  fs::path out;
  std::uint64_t seed = 0;
  int width = 64;
  int height = 64;
  int rooms_min = 4;
  int rooms_max = 9;
  int room_size_min = 5;
  int room_size_max = 16;
  int corridor_width = 3;
  int retry_budget = 64;
};

struct SkeletonizeArgs {
  fs::path map;
  fs::path out;
  PlannerFlags planner;
};

struct BuildRoadmapArgs {
  fs::path map;
  fs::path out;
  fs::path svg;
  PlannerFlags planner;
};

struct PlanArgs {
  fs::path map;
  std::vector<int> start;
  std::vector<int> goal;
  fs::path roadmap;
  fs::path out;
  fs::path svg;
  double scope = 3.0;
  PlannerFlags planner;
};

struct BenchmarkArgs {
  fs::path corpus;
  fs::path out;
  std::vector<std::string> planners;
  std::size_t queries = 5;
  std::size_t limit = 0;
  double scope = 3.0;
  unsigned jobs = 1;
  bool svg = true;
  PlannerFlags planner;
};

struct SimulateArgs {
  fs::path map;
  fs::path path;
  fs::path out;
  fs::path svg;
  double noise = 0.1;
  double dt = 0.05;
  double cell_size = 0.1;
  double footprint = 0.34;
  std::uint64_t seed = 0;
};

struct ObstaclesArgs {
  fs::path map;
  fs::path out;
};

int cmd_generate(const Globals& g, const GenerateArgs& a);
int cmd_skeletonize(const Globals& g, const SkeletonizeArgs& a);
int cmd_build_roadmap(const Globals& g, const BuildRoadmapArgs& a);
int cmd_plan(const Globals& g, const PlanArgs& a);
int cmd_benchmark(const Globals& g, const BenchmarkArgs& a);
int cmd_simulate(const Globals& g, const SimulateArgs& a);
int cmd_obstacles(const Globals& g, const ObstaclesArgs& a);

}  // namespace skelnav::cli
