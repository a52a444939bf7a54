#ifndef CONFDIM_ARC_HPP
#define CONFDIM_ARC_HPP

#include <limits>
#include <optional>
#include <vector>

#include "confdim/metric_space.hpp"

namespace confdim {

/// Ordered simple path of point ids in a NeighborGraph.
struct Arc {
  std::vector<PointId> verts;
  double scale = 0.0;  // connection scale of the graph it lives in

  int size() const { return static_cast<int>(verts.size()); }
  PointId front() const { return verts.front(); }
  PointId back() const { return verts.back(); }
  PointId operator[](int i) const { return verts[static_cast<size_t>(i)]; }

  bool is_simple() const;
  /// consecutive vertices within the connection scale and no repeats
  bool valid_in(const NeighborGraph& G) const;
  double length(const FiniteMetricSpace& X) const;
  double diameter(const FiniteMetricSpace& X) const;
  Arc reversed() const;
  Arc subarc(int i, int j) const;  // inclusive
};

/// Exact diameter of the vertex set A[i..j].
double subarc_diameter(const Arc& A, int i, int j, const FiniteMetricSpace& X);

struct QuasiArcReport {
  double lambda = 1.0;  // max diam(A[x,y]) / d(x,y) over scanned pairs
  int worst_i = 0, worst_j = 0;
  double worst_d = 0.0;
};

/// Quasi-arc constant of A restricted to pairs with d(x,y) <= eps
/// (eps = infinity gives the global constant). Exact over all vertex pairs.
QuasiArcReport quasiarc_constant(const Arc& A, const FiniteMetricSpace& X,
                                 double eps = std::numeric_limits<double>::infinity());

/// Witness that B eps-follows A: a monotone map p from follower indices to
/// followee indices displacing each vertex at most `slack`.
struct FollowsCertificate {
  std::vector<int> p;   // p[i] = index into A for vertex i of B
  double slack = 0.0;   // achieved max displacement
  bool ok = false;
  int violating_index = -1;  // vertex of B realizing the displacement on failure

  /// Independent re-check against fresh distance evaluations.
  bool verify(const Arc& B, const Arc& A, const FiniteMetricSpace& X, double eps) const;
};

/// Builds the monotone projection minimizing the worst displacement
/// (discrete Frechet-style dynamic program) and accepts iff it is <= eps.
/// Monotonicity plus per-vertex displacement bounds give the subarc
/// containment B[x,y] in N(A[p(x),p(y)], eps) for every index pair.
FollowsCertificate check_follows(const Arc& B, const Arc& A, const FiniteMetricSpace& X,
                                 double eps);

/// Minimum over monotone assignments of the maximum displacement (the value
/// check_follows thresholds against).
double follows_slack(const Arc& B, const Arc& A, const FiniteMetricSpace& X);

// --- incremental subarc-diameter sweep -------------------------------------

/// Tracks the diameter of a growing vertex set. Euclidean 2D keeps the
/// convex hull as the candidate extreme set; sup metric keeps the bounding
/// box; other metrics fall back to the full candidate list.
class DiameterSweep {
public:
  explicit DiameterSweep(const FiniteMetricSpace& X);
  void reset(PointId start);
  double add(PointId p);  // returns the diameter including p
  double current() const { return diam_; }

private:
  const FiniteMetricSpace& X_;
  double diam_ = 0.0;
  // sup / 1D
  double lo_[3], hi_[3];
  // euclidean 2D hull, CCW
  std::vector<PointId> hull_;
  // generic fallback
  std::vector<PointId> all_;
  enum class Mode { Box, Hull2D, Generic } mode_;
};

}  // namespace confdim

#endif
