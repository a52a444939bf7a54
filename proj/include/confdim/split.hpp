#ifndef CONFDIM_SPLIT_HPP
#define CONFDIM_SPLIT_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "confdim/arc.hpp"
#include "confdim/metric_space.hpp"

namespace confdim {

/// Removing this vertex disconnects the walk at the current scale: the
/// space is not unzippable here (e.g. an interval).
struct CutPointError : std::runtime_error {
  PointId vertex;
  explicit CutPointError(PointId v)
      : std::runtime_error("cut point encountered"), vertex(v) {}
};

/// B0(a, eps) contains no vertex off the arc, so no seed for the second
/// strand exists at this slack.
struct SeedNotFoundError : std::runtime_error {
  SeedNotFoundError() : std::runtime_error("seed not found") {}
};

/// Connected component of x in the subgraph induced on B(x, r), optionally
/// with one vertex removed (the local-cut-point probe).
PointSet component_ball(PointId x, double r, const NeighborGraph& G,
                        std::optional<PointId> exclude = std::nullopt);

struct SplitResult {
  Arc J1, J2;
  double separation = 0.0;            // set_distance(J1, J2)
  FollowsCertificate follows1, follows2;
  double endpoint_displacement = 0.0; // worst end-to-end drift vs the input arc
  double slack = 0.0;                 // requested eps
};

/// An arc the produced strands must keep at least `clearance` away from.
struct AvoidArc {
  const Arc* arc = nullptr;
  double clearance = 0.0;
};

struct SplitOptions {
  std::uint64_t seed = 1;
  bool improve_separation = true;
  std::vector<AvoidArc> avoid;
};

/// Unzips A into two disjoint arcs inside N(A, eps) whose endpoints stay
/// close to A's, both eps-following A. Inductive detour walk around
/// successive unzipping points, followed by a separation-maximizing
/// reroute of each strand. Throws CutPointError / SeedNotFoundError.
SplitResult topological_split(const Arc& A, double eps, const NeighborGraph& G,
                              const SplitOptions& opts = {});

struct ScaleSplitConstants {
  double lambda = 2.0;  // quasi-arc constant of the input
  double L = 2.0;       // linear connectivity constant
  double alpha = 1.0;   // locality fraction achieved by straightening
};

struct ScheduleOverride {
  double D1, D2, D3;
};

struct ScaleSplitOptions {
  std::uint64_t seed = 1;
  int tries = 3;  // randomized walk seeds, best separation kept
  bool improve_separation = true;
  std::vector<AvoidArc> avoid;
  // Inject the jump/ball/slack schedule directly (testing and calibration);
  // by default it is derived from the constants.
  std::optional<ScheduleOverride> schedule;
};

struct ScaleSplitResult {
  SplitResult split;
  double delta = 0.0;  // achieved separation / eps
  double D1 = 0.0, D2 = 0.0, D3 = 0.0;
  int segments = 1;
  bool used_schedule = false;  // marked-jump decomposition vs single split
  bool short_arc = false;      // diam(A) <= eps/5 two-point fast path
  bool non_interaction_ok = true;
};

/// Quantitative split of an (alpha*eps)-local lambda-quasi-arc into two
/// eps-following, delta*eps-separated arcs. Uses the marked-jump schedule
/// D1 = alpha*eps/(5*lambda), D2 = D1/4, D3 = D2/(2*lambda*(L*lambda+2))
/// when those scales survive the net resolution, otherwise a single
/// randomized unzip of the whole arc. delta is measured, not derived.
ScaleSplitResult scale_split(const Arc& A, double eps, const NeighborGraph& G,
                             const ScaleSplitConstants& constants,
                             const ScaleSplitOptions& opts = {});

/// Brute-force audit of every SplitResult invariant (disjointness, positive
/// separation re-computed from scratch, certificate re-verification).
bool verify_split(const SplitResult& s, const Arc& A, const NeighborGraph& G,
                  double eps_follows, std::string* why = nullptr);

}  // namespace confdim

#endif
