#include "confdim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "confdim/connectivity.hpp"
#include "confdim/dimension.hpp"
#include "confdim/family.hpp"
#include "confdim/split.hpp"
#include "confdim/straighten.hpp"

namespace confdim {

namespace {

using ordered_json = nlohmann::ordered_json;

std::pair<PointId, PointId> farthest_pair(const FiniteMetricSpace& X) {
  PointId p = 0, q = 0;
  for (int sweep = 0; sweep < 4; ++sweep) {
    PointId far = p;
    double best = -1.0;
    for (PointId v = 0; v < X.size(); ++v) {
      double d = X.distance(q, v);
      if (d > best) {
        best = d;
        far = v;
      }
    }
    p = q;
    q = far;
  }
  return {p, q};
}

ordered_json arc_json(const Arc& a) {
  ordered_json j = ordered_json::array();
  for (PointId v : a.verts) j.push_back(v);
  return j;
}

}  // namespace

std::string format_decimal(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

PipelineResult run_pipeline(const std::string& command, const PipelineOptions& opts) {
  static const std::set<std::string> commands = {"generate", "analyze", "straighten", "unzip",
                                                 "family",   "bound",   "all"};
  if (!commands.count(command)) throw std::invalid_argument("unknown command: " + command);

  const bool do_conn = command == "analyze" || command == "family" || command == "bound" ||
                       command == "all";
  const bool do_dim = command == "analyze" || command == "bound" || command == "all";
  const bool do_straight = command == "straighten" || command == "unzip" ||
                           command == "family" || command == "bound" || command == "all";
  const bool do_unzip = command == "unzip" || command == "family" || command == "bound" ||
                        command == "all";
  const bool do_family = command == "family" || command == "bound" || command == "all";
  const bool do_bound = command == "bound" || command == "all";

  PipelineResult R;
  ordered_json& j = R.report;
  j["schema"] = kReportSchema;
  j["tool_version"] = kToolVersion;
  j["command"] = command;
  j["seed"] = opts.seed;
  j["workers"] = opts.workers;

  R.space = generate(opts.space);
  const FiniteMetricSpace& X = R.space;
  j["space"] = {{"spec", opts.space.describe()},
                {"metric", to_string(X.metric())},
                {"points", X.size()},
                {"h", X.resolution()},
                {"diameter", X.diameter()}};
  if (command == "generate") return R;

  double h = X.resolution();
  NeighborGraph G(X, 2.0 * h);
  j["graph"] = {{"scale", G.scale()},
                {"edges", static_cast<long>(G.edge_count())},
                {"components", G.component_count()}};
  j["audits"] = {{"triangle_worst", X.triangle_audit(opts.seed)}};

  std::vector<std::string> reasons;

  double L_used = 2.0;
  if (do_conn) {
    ConnectivityOptions co;
    co.sample_budget = opts.samples;
    co.seed = opts.seed;
    ConnectivityReport cr = annular_constant(G, co);
    j["connectivity"] = {{"linear_ok", cr.linear_ok},
                         {"L_linear", cr.L_linear},
                         {"annular_ok", cr.annular_ok},
                         {"L_annular", cr.L_annular},
                         {"samples", cr.samples_run}};
    if (!cr.linear_ok) reasons.push_back("linear connectivity fail");
    if (!cr.annular_ok) reasons.push_back("annular connectivity fail");
    if (cr.linear_ok) L_used = std::max(1.0, cr.L_linear);

    DoublingOptions dop;
    dop.sample_budget = opts.samples;
    dop.seed = opts.seed;
    j["doubling"] = {{"N", doubling_constant(X, dop)}};
  }

  DimensionEstimate tau_est;
  bool have_tau = false;
  if (do_dim) {
    try {
      tau_est = box_counting_dimension(X, default_scales(X));
      have_tau = true;
      j["dimension"] = {{"tau", tau_est.tau},
                        {"residual", tau_est.residual},
                        {"scales", tau_est.scales},
                        {"counts", tau_est.counts},
                        {"note", "box-counting surrogate for packing dimension"}};
    } catch (const std::exception& e) {
      j["dimension"] = {{"error", e.what()}};
      reasons.push_back(std::string("dimension estimation failed: ") + e.what());
    }
  }

  Arc seed_arc;
  double alpha_used = 1.0;
  bool have_seed = false;
  if (do_straight) {
    try {
      auto [pa, pb] = farthest_pair(X);
      StraightenResult sr = find_quasiarc(pa, pb, opts.lambda_target, G);
      seed_arc = sr.arc;
      have_seed = true;
      alpha_used = sr.alpha;
      R.overlay.emplace_back("seed", seed_arc);
      j["straighten"] = {{"lambda_target", opts.lambda_target},
                         {"lambda", sr.lambda},
                         {"alpha", sr.alpha},
                         {"iterations", sr.iterations},
                         {"follows_slack", sr.follows.slack},
                         {"vertices", seed_arc.size()},
                         {"arc", arc_json(seed_arc)}};
    } catch (const std::exception& e) {
      j["straighten"] = {{"error", e.what()}};
      reasons.push_back(std::string("straighten failed: ") + e.what());
    }
  }

  double delta_star = 0.0;
  bool have_split = false;
  if (do_unzip && have_seed) {
    double eps_u = X.diameter() / 4.0;
    try {
      ScaleSplitOptions sso;
      sso.seed = opts.seed;
      ScaleSplitResult sr =
          scale_split(seed_arc, eps_u, G, {opts.lambda_target, L_used, alpha_used}, sso);
      delta_star = sr.delta;
      have_split = delta_star > 0.0;
      R.overlay.emplace_back("J1", sr.split.J1);
      R.overlay.emplace_back("J2", sr.split.J2);
      j["split"] = {{"eps", eps_u},
                    {"separation", sr.split.separation},
                    {"delta_star", delta_star},
                    {"used_schedule", sr.used_schedule},
                    {"segments", sr.segments},
                    {"follows_ok", sr.split.follows1.ok && sr.split.follows2.ok},
                    {"endpoint_displacement", sr.split.endpoint_displacement}};
      if (!have_split) reasons.push_back("split produced no separation");
    } catch (const CutPointError& e) {
      j["split"] = {{"error", "cut point encountered"}, {"vertex", e.vertex}};
      reasons.push_back("cut point encountered");
    } catch (const std::exception& e) {
      j["split"] = {{"error", e.what()}};
      reasons.push_back(std::string("split failed: ") + e.what());
    }
  }

  CantorFamily fam;
  bool have_family = false;
  if (do_family && have_split) {
    try {
      FamilyConstants fc;
      fc.lambda = opts.lambda_target;
      fc.L = L_used;
      fc.alpha = alpha_used;
      fc.delta_star = delta_star;
      BuildFamilyOptions bo;
      bo.depth = opts.depth;
      bo.seed = opts.seed;
      fam = build_family(G, seed_arc, fc, bo);
      have_family = true;

      ordered_json certs = {{"separation", fam.separation_ok},
                            {"follows", fam.follows_ok},
                            {"cauchy", fam.cauchy_ok},
                            {"fact_qa", fam.fact_qa_ok},
                            {"diameter", fam.diameter_ok}};
      j["family"] = {{"depth", fam.depth},
                     {"beta", format_decimal(fam.beta)},
                     {"beta_formula", format_decimal(fam.beta_formula)},
                     {"beta_overridden", fam.beta_overridden},
                     {"sigma", format_decimal(fam.sigma)},
                     {"lambda_prime", fam.lambda_prime},
                     {"separation", fam.separation},
                     {"required", fam.required},
                     {"separation_tol", fam.separation_tol},
                     {"cauchy_worst", fam.cauchy_worst},
                     {"certificates", certs},
                     {"arcs", ordered_json::object()}};
      for (const auto& [w, a] : fam.arcs) j["family"]["arcs"][w.empty() ? "@" : w] = arc_json(a);
      for (const auto& w : fam.leaves())
        R.overlay.emplace_back("leaf:" + w, fam.arcs.at(w));
      if (!fam.certified()) reasons.push_back("family certificates failed");

      if (fam.depth >= 1) {
        EmbeddingReport er = embedding_check(fam, X);
        j["embedding"] = {{"pairs", er.pairs},
                          {"lower_violations", er.lower_violations},
                          {"upper_violations", er.upper_violations},
                          {"comparability_violations", er.comparability_violations},
                          {"upper_constant", er.upper_constant}};
        if (!er.ok()) reasons.push_back("embedding inequalities violated");
      }
    } catch (const std::exception& e) {
      j["family"] = {{"error", e.what()}};
      reasons.push_back(std::string("family build failed: ") + e.what());
    }
  }

  if (do_bound) {
    if (have_family && have_tau) {
      BoundOptions bo;
      bo.hit_samples = opts.hit_samples;
      bo.seed = opts.seed;
      BoundResult b = bound_from_family(fam, X, bo);
      j["bound"] = {{"certified", b.certified},
                    {"value", format_decimal(b.bound)},
                    {"sigma", format_decimal(b.sigma)},
                    {"tau", b.tau},
                    {"A", b.A},
                    {"hit_checks", b.hit_checks},
                    {"hit_violations", b.hit_violations},
                    {"reason", b.reason},
                    {"note", "tau is a box-counting surrogate for packing dimension"}};
      if (!b.certified) reasons.push_back(b.reason.empty() ? "bound uncertified" : b.reason);
    } else {
      j["bound"] = {{"certified", false}, {"value", "1"}, {"reason", "uncertified: prerequisites failed"}};
      reasons.push_back("bound prerequisites failed");
    }
  }

  j["certification"] = {{"pass", reasons.empty()}, {"reasons", reasons}};
  R.certified = reasons.empty();
  R.exit_code = R.certified ? 0 : 1;
  return R;
}

void write_svg(const FiniteMetricSpace& X,
               const std::vector<std::pair<std::string, Arc>>& arcs, const std::string& path) {
  if (!X.has_coords() || X.dim() != 2)
    throw std::invalid_argument("write_svg: needs a 2d coordinate space");
  double lo[2] = {1e300, 1e300}, hi[2] = {-1e300, -1e300};
  for (PointId p = 0; p < X.size(); ++p)
    for (int k = 0; k < 2; ++k) {
      lo[k] = std::min(lo[k], X.coord(p, k));
      hi[k] = std::max(hi[k], X.coord(p, k));
    }
  double span = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-12});
  const double W = 800.0, M = 10.0;
  auto px = [&](PointId p, int k) {
    double t = (X.coord(p, k) - lo[k]) / span;
    return M + (k == 1 ? 1.0 - t : t) * W;  // flip y for screen coords
  };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_svg: cannot open " + path);
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W + 2 * M << "' height='"
      << W + 2 * M << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  for (PointId p = 0; p < X.size(); ++p)
    out << "<circle cx='" << px(p, 0) << "' cy='" << px(p, 1) << "' r='1.2' fill='#cccccc'/>\n";
  auto color = [](const std::string& label) -> const char* {
    if (label == "seed") return "#222222";
    if (label == "J1") return "#2ca02c";
    if (label == "J2") return "#ff7f0e";
    if (label.rfind("leaf:0", 0) == 0) return "#1f77b4";  // arcs keyed by first bit
    if (label.rfind("leaf:1", 0) == 0) return "#d62728";
    return "#9467bd";
  };
  for (const auto& [label, a] : arcs) {
    out << "<polyline fill='none' stroke='" << color(label) << "' stroke-width='2' points='";
    for (PointId v : a.verts) out << px(v, 0) << "," << px(v, 1) << " ";
    out << "'><title>" << label << "</title></polyline>\n";
  }
  out << "</svg>\n";
}

}  // namespace confdim
