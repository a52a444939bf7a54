#ifndef CONFDIM_REPORT_HPP
#define CONFDIM_REPORT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "confdim/arc.hpp"
#include "confdim/metric_space.hpp"
#include "confdim/spaces.hpp"

namespace confdim {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "confdim-report v1";

struct PipelineOptions {
  SpaceSpec space;
  std::uint64_t seed = 1;
  int depth = -1;          // family depth; -1 = auto from the resolution
  int samples = 64;        // connectivity / doubling sample budget
  int hit_samples = 1000;  // hit-measure audit balls
  int workers = 1;         // recorded; module internals stay deterministic
  double lambda_target = 3.0;
  bool timings = false;    // default off so reports are byte-identical
};

struct PipelineResult {
  nlohmann::ordered_json report;
  bool certified = true;
  int exit_code = 0;  // 0 ok, 1 certification failure
  FiniteMetricSpace space;
  // label -> arc, drawn over the space in the SVG overlay
  std::vector<std::pair<std::string, Arc>> overlay;
};

/// Runs the staged pipeline for one command: generate | analyze |
/// straighten | unzip | family | bound | all. Deterministic for equal
/// (options, seed); expected domain failures (cut points, uncertified
/// bounds) are recorded in the report and set exit_code 1 instead of
/// throwing.
PipelineResult run_pipeline(const std::string& command, const PipelineOptions& opts);

/// Decimal string with full round-trip precision, for the fields where
/// bit-exactness matters (beta, sigma, bound).
std::string format_decimal(double v);

/// 2D overlay: space points in gray, arcs as colored polylines.
void write_svg(const FiniteMetricSpace& X,
               const std::vector<std::pair<std::string, Arc>>& arcs, const std::string& path);

}  // namespace confdim

#endif
