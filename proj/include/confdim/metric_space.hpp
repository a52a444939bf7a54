#ifndef CONFDIM_METRIC_SPACE_HPP
#define CONFDIM_METRIC_SPACE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace confdim {

using PointId = std::int32_t;
using PointSet = std::vector<PointId>;

enum class MetricKind { Euclidean, Sup, ExplicitMatrix };

std::string to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

/// A finite point set with a metric oracle. Coordinate-backed spaces
/// evaluate distances on the fly; explicit-matrix spaces store the full
/// table (capped at 20k points). `resolution` is the guaranteed density h
/// of the sample in the idealized space it approximates (0 if exact).
class FiniteMetricSpace {
public:
  FiniteMetricSpace() = default;

  static FiniteMetricSpace from_coords(std::vector<double> coords, int dim,
                                       MetricKind kind, double resolution);
  static FiniteMetricSpace from_matrix(std::vector<double> matrix, int n,
                                       double resolution);

  int size() const { return n_; }
  bool empty() const { return n_ == 0; }
  int dim() const { return dim_; }
  MetricKind metric() const { return kind_; }
  double resolution() const { return h_; }
  bool has_coords() const { return kind_ != MetricKind::ExplicitMatrix; }

  double distance(PointId a, PointId b) const;
  double coord(PointId p, int axis) const { return coords_[static_cast<size_t>(p) * dim_ + axis]; }
  const std::vector<double>& coords() const { return coords_; }
  const std::vector<double>& matrix() const { return matrix_; }

  /// Lower bound on the diameter via repeated farthest-point sweeps.
  /// Exact on the generated test spaces; cached after the first call.
  double diameter() const;

  /// Spot check of the triangle inequality on `samples` random triples.
  /// Returns the worst violation d(x,z) - d(x,y) - d(y,z) found (<= 0 when
  /// the axiom holds on the sample).
  double triangle_audit(std::uint64_t seed, int samples = 2000) const;

private:
  int n_ = 0;
  int dim_ = 0;
  MetricKind kind_ = MetricKind::Euclidean;
  double h_ = 0.0;
  std::vector<double> coords_;  // n_ * dim_, row-major
  std::vector<double> matrix_;  // n_ * n_ when explicit
  mutable double diameter_cache_ = -1.0;
};

struct Ball {
  PointId center;
  double r;
  bool contains(const FiniteMetricSpace& X, PointId p) const {
    return X.distance(center, p) <= r;
  }
};

/// A(p, r, R) = closed ball of radius R minus the open ball of radius r.
struct Annulus {
  PointId center;
  double r;
  double R;
  bool contains(const FiniteMetricSpace& X, PointId p) const {
    double d = X.distance(center, p);
    return d >= r && d <= R;
  }
};

/// Adjacency at a connection scale: edges exactly {x,y} with 0 < d(x,y) <= s.
/// At s = 2h the graph mirrors the connectivity of the idealized space.
class NeighborGraph {
public:
  NeighborGraph() = default;
  NeighborGraph(const FiniteMetricSpace& X, double scale);

  const FiniteMetricSpace& space() const { return *space_; }
  double scale() const { return scale_; }
  const std::vector<PointId>& neighbors(PointId p) const { return adj_[static_cast<size_t>(p)]; }
  std::size_t edge_count() const;

  /// Points within `r` of `center` (closed ball, the center itself
  /// excluded), via the spatial grid when coordinates are available.
  PointSet ball_points(PointId center, double r) const;
  PointSet ball_points_around(const std::vector<double>& point, double r) const;

  int component_count() const;
  std::vector<int> component_labels() const;

private:
  const FiniteMetricSpace* space_ = nullptr;
  double scale_ = 0.0;
  std::vector<std::vector<PointId>> adj_;
  // uniform grid over the bounding box, cell size = scale, for range queries
  struct Grid {
    double cell = 0.0;
    double origin[3] = {0, 0, 0};
    int dims[3] = {1, 1, 1};
    std::vector<std::vector<PointId>> cells;
  };
  Grid grid_;
  void build_grid();
  long cell_index(const double* p) const;
};

NeighborGraph build_neighbor_graph(const FiniteMetricSpace& X, double scale);

/// N(S, eps) with the exact distance-to-set for every member. Every point
/// within eps of S lies in the ball of its nearest member, so the union of
/// grid ball queries is exhaustive.
struct SetNeighborhood {
  PointSet pts;  // sorted ids
  std::unordered_map<PointId, double> dist;
  bool contains(PointId v) const { return dist.count(v) != 0; }
  double distance_to_set(PointId v) const;  // +inf outside the neighborhood
};

SetNeighborhood set_neighborhood(const PointSet& verts, double eps, const NeighborGraph& G);

double set_distance(const PointSet& U, const PointSet& V, const FiniteMetricSpace& X);
double point_set_distance(PointId x, const PointSet& U, const FiniteMetricSpace& X);

/// max(sup_u d(u,V), sup_v d(v,U)) with the classic early-break scan.
double hausdorff_distance(const PointSet& U, const PointSet& V, const FiniteMetricSpace& X);
/// Plain O(|U||V|) double loop, kept as the independent oracle.
double hausdorff_distance_bruteforce(const PointSet& U, const PointSet& V,
                                     const FiniteMetricSpace& X);

struct DoublingOptions {
  int sample_budget = 64;
  std::uint64_t seed = 1;
  int exact_candidate_cap = 24;  // branch-and-bound below, greedy above
};

/// Upper-bound certificate for the doubling constant: the largest observed
/// minimum number of (r/2)-balls needed to cover a sampled ball B(c, r).
int doubling_constant(const FiniteMetricSpace& X, const DoublingOptions& opts = {});

/// Minimum number of balls B(z, r/2), z in X, covering the points of B(c, r).
/// Exact (branch and bound) when the reduced candidate set is small,
/// greedy with local improvement otherwise; always an upper bound.
int cover_number(const FiniteMetricSpace& X, PointId center, double r,
                 int exact_candidate_cap = 24);

}  // namespace confdim

#endif
