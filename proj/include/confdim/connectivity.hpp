#ifndef CONFDIM_CONNECTIVITY_HPP
#define CONFDIM_CONNECTIVITY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "confdim/arc.hpp"
#include "confdim/metric_space.hpp"

namespace confdim {

/// Fewest-hops path from x to y whose interior vertices all satisfy `admit`
/// (the endpoints are exempt), or nullopt if none exists.
std::optional<Arc> restricted_path(PointId x, PointId y, const NeighborGraph& G,
                                   const std::function<bool(PointId)>& admit);

/// Unrestricted fewest-hops path.
std::optional<Arc> shortest_path(PointId x, PointId y, const NeighborGraph& G);

/// Simple path from x to y of diameter <= L*d(x,y) + 2h, or nullopt.
/// The search is restricted to the ball B(x, (L+1)*d(x,y)); the constraint
/// is enforced by climbing a ladder of sub-L values so that enlarging L can
/// only add successes.
std::optional<Arc> connect_linear(PointId x, PointId y, double L, const NeighborGraph& G);

/// Simple path from x to y with every vertex in A(p, r/L - h, 2*L*r + h),
/// or nullopt. Precondition: x, y in A(p, r, 2r).
std::optional<Arc> connect_annulus(PointId p, double r, PointId x, PointId y, double L,
                                   const NeighborGraph& G);

struct ConnectivityWitness {
  PointId p = -1;  // annulus center (-1 for linear queries)
  double r = 0.0;
  PointId x = -1, y = -1;
  double achieved_L = 0.0;
  Arc arc;  // certifying path (empty when the query failed)
  bool success = false;
};

struct ConnectivityReport {
  bool linear_ok = false;
  double L_linear = 0.0;
  bool annular_ok = false;
  double L_annular = 0.0;
  ConnectivityWitness worst_linear;
  ConnectivityWitness worst_annular;
  ConnectivityWitness counterexample;  // present when a query failed
  int samples_run = 0;
};

struct ConnectivityOptions {
  int sample_budget = 64;
  std::uint64_t seed = 1;
  double L_max = 32.0;
};

/// Samples (p, r, x, y) queries with r log-uniform in [4h, diam/4] and
/// binary-searches the least L in [1, L_max] for which the constrained
/// connection succeeds. Failures are recorded, not thrown.
ConnectivityReport annular_constant(const NeighborGraph& G, const ConnectivityOptions& opts = {});

/// Re-checks a stored witness arc against its constraint from scratch.
bool verify_witness(const ConnectivityWitness& w, const NeighborGraph& G, bool annular);

}  // namespace confdim

#endif
