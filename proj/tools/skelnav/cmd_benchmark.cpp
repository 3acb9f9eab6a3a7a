#include <algorithm>
#include <chrono>

#include "commands.hpp"
#include "output.hpp"
#include "skelnav/errors.hpp"
#include "skelnav/map_io.hpp"
#include "skelnav/navmetrics.hpp"
#include "skelnav/svg.hpp"

namespace skelnav::cli {

namespace {

std::vector<fs::path> corpus_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("corpus directory " + dir.string() + " does not exist");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".pgm" || ext == ".png") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int cmd_benchmark(const Globals& g, const BenchmarkArgs& a) {
  auto names = a.planners;
  if (names.empty()) {
    names = {"zhangsuen", "ma", "astar"};
    if (!a.planner.weights.empty()) names.insert(names.begin(), "skelunet");
  }
  BenchmarkConfig config;
  std::shared_ptr<const NetworkParameters> weights;
  for (const auto& n : names) {
    auto r = resolve_planner(n, a.planner);
    config.planners.push_back(r.kind);
    if (r.weights) weights = r.weights;
    config.planner = r.options;
  }
  config.planner.weights = weights.get();
  config.queries_per_map = a.queries;
  config.seed = a.planner.seed;
  config.scope = a.scope;
  config.jobs = a.jobs;

  std::vector<CorpusMap> corpus;
  std::vector<std::string> skipped;
  for (const auto& file : corpus_files(a.corpus)) {
    if (a.limit && corpus.size() >= a.limit) break;
    try {
      corpus.push_back({file.stem().string(), read_map_file(file)});
    } catch (const Error& e) {
      log("skipping " + file.string() + ": " + e.what());
      skipped.push_back(file.filename().string());
    }
  }
  if (corpus.empty()) throw EmptyCorpus("no readable maps in " + a.corpus.string());

  const auto t0 = std::chrono::steady_clock::now();
  const auto report = run_benchmark(corpus, config);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  fs::create_directories(a.out);
  write_text_file(a.out / "rows.csv", format_rows_csv(report.rows));
  write_text_file(a.out / "aggregates.csv", format_aggregates_csv(report.aggregates));
  if (a.svg) {
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      std::vector<BoxGroup> groups;
      for (const auto kind : config.planners) {
        BoxGroup box{planner_report_name(kind), {}};
        for (const auto& row : report.rows) {
          if (row.ok() && row.planner == box.label) box.values.push_back(metric_value(row.metrics, m));
        }
        groups.push_back(std::move(box));
      }
      write_text_file(a.out / (std::string(kMetricNames[m]) + ".svg"), render_boxplot_svg(kMetricNames[m], groups));
    }
  }

  auto manifest = make_manifest(g, "benchmark");
  manifest["corpus"] = a.corpus.string();
  manifest["maps"] = corpus.size();
  manifest["skipped"] = skipped;
  manifest["planners"] = names;
  manifest["queries_per_map"] = a.queries;
  manifest["seed"] = a.planner.seed;
  manifest["scope"] = a.scope;
  manifest["jobs"] = a.jobs;
  manifest["planner_options"] = planner_json(a.planner);
  manifest["wall_seconds"] = wall;
  write_manifest(a.out / "manifest.json", manifest);

  Report out(g.porcelain);
  out.add("maps", corpus.size()).add("rows", report.rows.size());
  for (const auto& agg : report.aggregates) {
    if (agg.failed) log(agg.planner + ": " + std::to_string(agg.failed) + " failed queries");
    out.add(agg.planner + ".ok", agg.ok).add(agg.planner + ".failed", agg.failed);
    for (std::size_t m = 0; m < kMetricNames.size(); ++m) {
      out.add(agg.planner + "." + kMetricNames[m], agg.metrics[m].mean);
    }
  }
  out.add("wall_seconds", wall).add("out", a.out.string()).print();
  return kExitOk;
}

}  // namespace skelnav::cli
