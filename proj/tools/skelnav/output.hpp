#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "skelnav/neuroskel.hpp"
#include "skelnav/planners.hpp"

namespace skelnav::cli {

/// Result lines for standard output: `key=value` under --porcelain, an
/// aligned listing otherwise.
class Report {
 public:
  explicit Report(bool porcelain) : porcelain_(porcelain) {}
  Report& add(std::string key, std::string value);
  Report& add(std::string key, double value);
  Report& add(std::string key, std::size_t value);
  void print() const;

 private:
  bool porcelain_;
  std::vector<std::pair<std::string, std::string>> fields_;
};

/// Manifest skeleton every command fills in: tool version, command name and
/// the argument vector that reproduces the run.
nlohmann::ordered_json make_manifest(const Globals& g, const std::string& command);
void write_manifest(const fs::path& path, const nlohmann::ordered_json& manifest);
fs::path manifest_beside(const fs::path& output);

void log(const std::string& message);

/// Planner kind plus options, with weights loaded when a path was given.
struct ResolvedPlanner {
  PlannerKind kind = PlannerKind::ZhangSuen;
  PlannerOptions options;
  std::shared_ptr<const NetworkParameters> weights;
};
ResolvedPlanner resolve_planner(const std::string& name, const PlannerFlags& flags);
nlohmann::ordered_json planner_json(const PlannerFlags& flags);

}  // namespace skelnav::cli
