#ifndef CONFDIM_STRAIGHTEN_HPP
#define CONFDIM_STRAIGHTEN_HPP

#include <vector>

#include "confdim/arc.hpp"
#include "confdim/metric_space.hpp"

namespace confdim {

struct StraightenOptions {
  int max_iters = 0;  // 0 = derived from the arc size
};

struct StraightenResult {
  Arc arc;
  double alpha = 1.0;   // achieved locality fraction: output is an
                        // (alpha*eps)-local quasi-arc, alpha <= 1
  double lambda = 1.0;  // measured constant at scale alpha*eps
  FollowsCertificate follows;      // output vs the input arc, slack <= eps
  int iterations = 0;              // accepted shortcut splices
  std::vector<double> potential;   // total path length, strictly decreasing
};

/// Shortcut iteration toward a local quasi-arc: repeatedly pick the worst
/// pair (x, y) on the arc with d(x,y) <= eps whose subarc diameter exceeds
/// lambda_target*d + 2h, replace the subarc by a diameter-capped shortest
/// path through N(A, eps), and splice keeping the path simple. Endpoints
/// are preserved; pairs that admit no shortcut lower the achieved alpha
/// instead of failing. The total length strictly decreases every accepted
/// iteration (asserted), which guarantees termination.
StraightenResult straighten(const Arc& A, double eps, double lambda_target,
                            const NeighborGraph& G, const StraightenOptions& opts = {});

/// Quasi-arc between two connected vertices: a linearly-connected first
/// attempt, then straightening with eps cascading from the arc diameter
/// down to 4h. Throws if x and y are disconnected.
StraightenResult find_quasiarc(PointId x, PointId y, double lambda_target,
                               const NeighborGraph& G, const StraightenOptions& opts = {});

/// Loop removal: keeps the first occurrence of every vertex and drops the
/// cycle whenever one repeats; consecutive adjacency is preserved because
/// cuts happen at the repeated vertex itself.
std::vector<PointId> drop_loops(const std::vector<PointId>& path);

}  // namespace confdim

#endif
