#include "output.hpp"

#include <algorithm>
#include <iostream>

#include "skelnav/errors.hpp"
#include "skelnav/map_io.hpp"
#include "skelnav/text_util.hpp"

namespace skelnav::cli {

Report& Report::add(std::string key, std::string value) {
  fields_.emplace_back(std::move(key), std::move(value));
  return *this;
}

Report& Report::add(std::string key, double value) {
  return add(std::move(key), porcelain_ ? format_double(value) : format_fixed(value, 4));
}

Report& Report::add(std::string key, std::size_t value) { return add(std::move(key), std::to_string(value)); }

void Report::print() const {
  std::size_t width = 0;
  for (const auto& [k, v] : fields_) width = std::max(width, k.size());
  for (const auto& [k, v] : fields_) {
    if (porcelain_) {
      std::cout << k << '=' << v << '\n';
    } else {
      std::cout << k << std::string(width - k.size() + 2, ' ') << v << '\n';
    }
  }
  std::cout.flush();
}

nlohmann::ordered_json make_manifest(const Globals& g, const std::string& command) {
  nlohmann::ordered_json m;
  m["tool"] = "skelnav";
  m["version"] = SKELNAV_VERSION;
  m["command"] = command;
  m["cwd"] = fs::current_path().string();
  m["argv"] = g.argv;
  return m;
}

void write_manifest(const fs::path& path, const nlohmann::ordered_json& manifest) {
  write_text_file(path, manifest.dump(2) + "\n");
}

fs::path manifest_beside(const fs::path& output) {
  auto p = output;
  p += ".manifest.json";
  return p;
}

void log(const std::string& message) { std::cerr << "skelnav: " << message << '\n'; }

ResolvedPlanner resolve_planner(const std::string& name, const PlannerFlags& flags) {
  ResolvedPlanner r;
  r.kind = parse_planner(name);
  r.options.k_nearest = flags.k;
  r.options.tau = flags.tau;
  r.options.ma_samples = flags.samples;
  r.options.stride = flags.stride;
  r.options.seed = flags.seed;
  if (!flags.weights.empty()) {
    r.weights = std::make_shared<const NetworkParameters>(load_weights(read_file(flags.weights)));
    r.options.weights = r.weights.get();
  } else if (r.kind == PlannerKind::SkelUnet) {
    throw ValueError("the skelunet planner needs --weights");
  }
  return r;
}

nlohmann::ordered_json planner_json(const PlannerFlags& flags) {
  nlohmann::ordered_json j;
  j["k"] = flags.k;
  j["tau"] = flags.tau;
  j["samples"] = flags.samples;
  j["stride"] = flags.stride;
  j["seed"] = flags.seed;
  j["weights"] = flags.weights;
  return j;
}

}  // namespace skelnav::cli
