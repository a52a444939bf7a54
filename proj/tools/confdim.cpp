// confdim — certified conformal-dimension lower bounds on finite metric nets.
//
// Usage: confdim <command> [flags]
//   commands: generate | analyze | straighten | unzip | family | bound | all
// A JSON config file (--config, or $CONFDIM_CONFIG) supplies defaults;
// command-line flags override it. Exit codes: 0 success, 1 certification
// failure, 2 usage error.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "confdim/report.hpp"
#include "confdim/spaces.hpp"

namespace {

using nlohmann::json;

bool looks_like_path(const std::string& s) {
  return s.find('/') != std::string::npos || s.find('.') != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"confdim: quantitative connectivity, arc unzipping, Cantor families of "
               "quasi-arcs, and certified conformal-dimension lower bounds"};
  std::string command;
  app.add_option("command", command, "generate|analyze|straighten|unzip|family|bound|all")
      ->required();

  std::string space = "carpet", metric = "euclidean", out, svg, config;
  int level = 4, grid = 256, depth = 2, samples = 64, hit_samples = 1000, workers = 1;
  std::uint64_t seed = 1;
  double lambda_target = 3.0, file_h = 0.0;
  bool timings = false;

  app.add_option("--space", space, "space kind (carpet|third_cantor|cantor_product|interval|"
                                   "circle|square) or an input file path");
  app.add_option("--level", level, "recursion depth for fractal spaces");
  app.add_option("--grid", grid, "grid points per axis for grid spaces");
  app.add_option("--metric", metric, "euclidean|sup");
  app.add_option("--seed", seed, "random seed for all sampling");
  app.add_option("--depth", depth, "family depth (-1 = auto from resolution)");
  app.add_option("--samples", samples, "connectivity/doubling sample budget");
  app.add_option("--hit-samples", hit_samples, "random balls for the hit-measure audit");
  app.add_option("--workers", workers, "worker count knob (recorded in the report)");
  app.add_option("--lambda-target", lambda_target, "quasi-arc target constant");
  app.add_option("--file-h", file_h, "net density h for bare input files");
  app.add_option("--out", out, "output path (space file for generate, report JSON otherwise; "
                               "default stdout)");
  app.add_option("--svg", svg, "SVG overlay output path (2d spaces only)");
  app.add_option("--config", config, "JSON config file (default $CONFDIM_CONFIG)");
  app.add_flag("--timings", timings, "include wall-clock timings in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  // config file: used only for options the command line left untouched
  if (config.empty())
    if (const char* env = std::getenv("CONFDIM_CONFIG")) config = env;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) {
      std::cerr << "confdim: cannot open config " << config << "\n";
      return 2;
    }
    json cfg;
    try {
      in >> cfg;
    } catch (const std::exception& e) {
      std::cerr << "confdim: malformed config: " << e.what() << "\n";
      return 2;
    }
    auto take = [&](const char* key, auto& slot) {
      std::string flag = std::string("--") + key;
      if (cfg.contains(key) && app.count(flag) == 0) cfg.at(key).get_to(slot);
    };
    take("space", space);
    take("level", level);
    take("grid", grid);
    take("metric", metric);
    take("seed", seed);
    take("depth", depth);
    take("samples", samples);
    take("hit-samples", hit_samples);
    take("workers", workers);
    take("lambda-target", lambda_target);
    take("file-h", file_h);
    take("out", out);
    take("svg", svg);
  }

  confdim::PipelineOptions opts;
  opts.seed = seed;
  opts.depth = depth;
  opts.samples = samples;
  opts.hit_samples = hit_samples;
  opts.workers = workers;
  opts.lambda_target = lambda_target;
  opts.timings = timings;

  try {
    opts.space.metric = confdim::metric_kind_from_string(metric);
    if (looks_like_path(space)) {
      opts.space.kind = confdim::SpaceKind::File;
      opts.space.path = space;
    } else {
      opts.space.kind = confdim::space_kind_from_string(space);
    }
    opts.space.level = level;
    opts.space.grid = grid;
    opts.space.file_h = file_h;
  } catch (const std::exception& e) {
    std::cerr << "confdim: " << e.what() << "\n";
    return 2;
  }

  try {
    auto t0 = std::chrono::steady_clock::now();
    confdim::PipelineResult res = confdim::run_pipeline(command, opts);
    if (timings) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      res.report["timings"] = {{"total_ms", ms}};
    }

    if (command == "generate") {
      std::string path = out.empty() ? "space.txt" : out;
      confdim::save_space(res.space, path);
      res.report["space_file"] = path;
    }

    std::string text = res.report.dump(2) + "\n";
    if (command != "generate" && !out.empty()) {
      std::ofstream o(out);
      if (!o) {
        std::cerr << "confdim: cannot open output " << out << "\n";
        return 2;
      }
      o << text;
    } else {
      std::cout << text;
    }
    if (!svg.empty() && res.space.has_coords() && res.space.dim() == 2)
      confdim::write_svg(res.space, res.overlay, svg);
    return res.exit_code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "confdim: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "confdim: " << e.what() << "\n";
    return 1;
  }
}
