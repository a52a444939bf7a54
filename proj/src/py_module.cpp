// Python bindings: the generators, the neighbor graph, and the main
// operations of the pipeline (connectivity, straightening, splitting,
// family construction, dimension bounds), plus the full report runner.

#include <memory>
#include <stdexcept>
#include <utility>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "confdim/connectivity.hpp"
#include "confdim/dimension.hpp"
#include "confdim/family.hpp"
#include "confdim/report.hpp"
#include "confdim/spaces.hpp"
#include "confdim/split.hpp"
#include "confdim/straighten.hpp"

namespace py = pybind11;
using namespace confdim;

namespace {

// Owns the space alongside the graph, so Python lifetimes stay simple.
class Graph {
 public:
  Graph(FiniteMetricSpace X, double scale)
      : X_(std::make_shared<FiniteMetricSpace>(std::move(X))), G_(*X_, scale) {}
  const FiniteMetricSpace& space() const { return *X_; }
  const NeighborGraph& graph() const { return G_; }

 private:
  std::shared_ptr<FiniteMetricSpace> X_;
  NeighborGraph G_;
};

SpaceSpec make_spec(const std::string& kind, int level, int grid, const std::string& metric,
                    const std::string& path, double file_h) {
  SpaceSpec spec;
  if (!path.empty()) {
    spec.kind = SpaceKind::File;
    spec.path = path;
  } else {
    spec.kind = space_kind_from_string(kind);
  }
  spec.level = level;
  spec.grid = grid;
  spec.file_h = file_h;
  spec.metric = metric_kind_from_string(metric);
  return spec;
}

Arc make_arc(const Graph& g, const std::vector<PointId>& verts) {
  Arc A;
  A.verts = verts;
  A.scale = g.graph().scale();
  if (!A.is_simple()) throw std::invalid_argument("vertex list is not a simple path");
  return A;
}

py::dict split_dict(const SplitResult& s) {
  py::dict d;
  d["j1"] = s.J1.verts;
  d["j2"] = s.J2.verts;
  d["separation"] = s.separation;
  d["endpoint_displacement"] = s.endpoint_displacement;
  d["follows_ok"] = s.follows1.ok && s.follows2.ok;
  return d;
}

py::dict family_dict(const CantorFamily& fam) {
  py::dict arcs;
  for (const auto& [w, a] : fam.arcs) arcs[py::str(w)] = a.verts;
  py::dict d;
  d["arcs"] = arcs;
  d["depth"] = fam.depth;
  d["beta"] = fam.beta;
  d["beta_overridden"] = fam.beta_overridden;
  d["sigma"] = fam.sigma;
  d["lambda_prime"] = fam.lambda_prime;
  d["separation"] = fam.separation;
  d["required"] = fam.required;
  d["certified"] = fam.certified();
  d["leaves"] = fam.leaves();
  return d;
}

}  // namespace

PYBIND11_MODULE(_confdim, m) {
  m.doc() = "quantitative connectivity, arc unzipping, Cantor families of quasi-arcs, "
            "and certified conformal-dimension lower bounds on finite metric nets";

  py::class_<FiniteMetricSpace>(m, "Space")
      .def_property_readonly("size", &FiniteMetricSpace::size)
      .def_property_readonly("dim", &FiniteMetricSpace::dim)
      .def_property_readonly("h", &FiniteMetricSpace::resolution)
      .def("distance", &FiniteMetricSpace::distance, py::arg("a"), py::arg("b"))
      .def("diameter", &FiniteMetricSpace::diameter)
      .def("coord", &FiniteMetricSpace::coord, py::arg("p"), py::arg("axis"))
      .def("__len__", &FiniteMetricSpace::size)
      .def("__repr__", [](const FiniteMetricSpace& X) {
        return "<confdim.Space of " + std::to_string(X.size()) + " points, h=" +
               std::to_string(X.resolution()) + ">";
      });

  m.def(
      "generate",
      [](const std::string& kind, int level, int grid, const std::string& metric,
         const std::string& path, double file_h) {
        return generate(make_spec(kind, level, grid, metric, path, file_h));
      },
      py::arg("kind") = "carpet", py::arg("level") = 4, py::arg("grid") = 256,
      py::arg("metric") = "euclidean", py::arg("path") = "", py::arg("file_h") = 0.0,
      "Generate one of the named test spaces (or load `path`).");

  m.def("save_space", &save_space, py::arg("space"), py::arg("path"));
  m.def("load_space", &load_space, py::arg("path"));

  m.def("set_distance", &set_distance, py::arg("u"), py::arg("v"), py::arg("space"));
  m.def("hausdorff_distance", &hausdorff_distance, py::arg("u"), py::arg("v"),
        py::arg("space"));
  m.def(
      "doubling_constant",
      [](const FiniteMetricSpace& X, int samples, std::uint64_t seed) {
        DoublingOptions o;
        o.sample_budget = samples;
        o.seed = seed;
        return doubling_constant(X, o);
      },
      py::arg("space"), py::arg("samples") = 64, py::arg("seed") = 1);

  py::class_<Graph>(m, "Graph")
      .def(py::init([](const FiniteMetricSpace& X, double scale) {
             return Graph(X, scale <= 0.0 ? 2.0 * X.resolution() : scale);
           }),
           py::arg("space"), py::arg("scale") = 0.0,
           "Neighbor graph; scale defaults to 2h.")
      .def_property_readonly("scale", [](const Graph& g) { return g.graph().scale(); })
      .def_property_readonly("edges",
                             [](const Graph& g) { return g.graph().edge_count(); })
      .def_property_readonly("components",
                             [](const Graph& g) { return g.graph().component_count(); })
      .def("neighbors",
           [](const Graph& g, PointId p) { return g.graph().neighbors(p); });

  m.def(
      "annular_constant",
      [](const Graph& g, int samples, std::uint64_t seed) {
        ConnectivityOptions o;
        o.sample_budget = samples;
        o.seed = seed;
        ConnectivityReport r = annular_constant(g.graph(), o);
        py::dict d;
        d["linear_ok"] = r.linear_ok;
        d["L_linear"] = r.L_linear;
        d["annular_ok"] = r.annular_ok;
        d["L_annular"] = r.L_annular;
        d["samples"] = r.samples_run;
        return d;
      },
      py::arg("graph"), py::arg("samples") = 64, py::arg("seed") = 1);

  m.def(
      "find_quasiarc",
      [](const Graph& g, PointId x, PointId y, double lambda_target) {
        StraightenResult r = find_quasiarc(x, y, lambda_target, g.graph());
        py::dict d;
        d["verts"] = r.arc.verts;
        d["lambda"] = r.lambda;
        d["alpha"] = r.alpha;
        d["iterations"] = r.iterations;
        return d;
      },
      py::arg("graph"), py::arg("x"), py::arg("y"), py::arg("lambda_target") = 3.0);

  m.def(
      "straighten",
      [](const Graph& g, const std::vector<PointId>& verts, double eps,
         double lambda_target) {
        StraightenResult r = straighten(make_arc(g, verts), eps, lambda_target, g.graph());
        py::dict d;
        d["verts"] = r.arc.verts;
        d["lambda"] = r.lambda;
        d["alpha"] = r.alpha;
        d["iterations"] = r.iterations;
        d["follows_slack"] = r.follows.slack;
        return d;
      },
      py::arg("graph"), py::arg("verts"), py::arg("eps"), py::arg("lambda_target") = 3.0);

  m.def(
      "unzip",
      [](const Graph& g, const std::vector<PointId>& verts, double eps,
         std::uint64_t seed) {
        SplitOptions o;
        o.seed = seed;
        return split_dict(topological_split(make_arc(g, verts), eps, g.graph(), o));
      },
      py::arg("graph"), py::arg("verts"), py::arg("eps"), py::arg("seed") = 1,
      "Topological unzip of an arc into two disjoint following arcs.");

  m.def(
      "scale_split",
      [](const Graph& g, const std::vector<PointId>& verts, double eps, double lam,
         double L, double alpha, std::uint64_t seed) {
        ScaleSplitOptions o;
        o.seed = seed;
        ScaleSplitResult r =
            scale_split(make_arc(g, verts), eps, g.graph(), {lam, L, alpha}, o);
        py::dict d = split_dict(r.split);
        d["delta"] = r.delta;
        d["segments"] = r.segments;
        d["used_schedule"] = r.used_schedule;
        return d;
      },
      py::arg("graph"), py::arg("verts"), py::arg("eps"), py::arg("lambda_") = 3.0,
      py::arg("L") = 4.0, py::arg("alpha") = 1.0, py::arg("seed") = 1);

  m.def(
      "build_family",
      [](const Graph& g, const std::vector<PointId>& seed_verts, double lam, double L,
         double alpha, double delta_star, int depth, std::uint64_t seed) {
        FamilyConstants fc{lam, L, alpha, delta_star};
        BuildFamilyOptions o;
        o.depth = depth;
        o.seed = seed;
        return family_dict(build_family(g.graph(), make_arc(g, seed_verts), fc, o));
      },
      py::arg("graph"), py::arg("seed_verts"), py::arg("lambda_") = 3.0,
      py::arg("L") = 4.0, py::arg("alpha") = 1.0, py::arg("delta_star") = 0.1,
      py::arg("depth") = -1, py::arg("seed") = 1);

  m.def(
      "product_family",
      [](const Graph& g, int level) { return family_dict(make_product_family(g.graph(), level)); },
      py::arg("graph"), py::arg("level"),
      "The natural vertical family of a cantor_product space.");

  m.def("ultrametric", &ultrametric, py::arg("a"), py::arg("b"), py::arg("sigma"));
  m.def("cantor_measure", &cantor_measure, py::arg("prefix"));

  m.def(
      "box_counting_dimension",
      [](const FiniteMetricSpace& X) {
        DimensionEstimate e = box_counting_dimension(X, default_scales(X));
        py::dict d;
        d["tau"] = e.tau;
        d["residual"] = e.residual;
        d["scales"] = e.scales;
        d["counts"] = e.counts;
        return d;
      },
      py::arg("space"));
  m.def("pansu_bound", &pansu_bound, py::arg("sigma"), py::arg("tau"),
        "The conformal-dimension lower bound 1 + sigma/(tau - sigma).");

  m.def(
      "run",
      [](const std::string& command, const std::string& kind, int level, int grid,
         const std::string& metric, std::uint64_t seed, int depth, int samples,
         int hit_samples, double lambda_target) {
        PipelineOptions opts;
        opts.space = make_spec(kind, level, grid, metric, "", 0.0);
        opts.seed = seed;
        opts.depth = depth;
        opts.samples = samples;
        opts.hit_samples = hit_samples;
        opts.lambda_target = lambda_target;
        PipelineResult r = run_pipeline(command, opts);
        py::dict d;
        d["exit_code"] = r.exit_code;
        d["certified"] = r.certified;
        d["report"] = r.report.dump(2);
        return d;
      },
      py::arg("command"), py::arg("kind") = "carpet", py::arg("level") = 4,
      py::arg("grid") = 256, py::arg("metric") = "euclidean", py::arg("seed") = 1,
      py::arg("depth") = 2, py::arg("samples") = 64, py::arg("hit_samples") = 1000,
      py::arg("lambda_target") = 3.0,
      "Run a full pipeline command and return the JSON report as a string.");
}
