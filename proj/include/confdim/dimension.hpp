#ifndef CONFDIM_DIMENSION_HPP
#define CONFDIM_DIMENSION_HPP

#include <string>
#include <vector>

#include "confdim/family.hpp"
#include "confdim/metric_space.hpp"

namespace confdim {

struct DimensionEstimate {
  double tau = 0.0;          // least-squares slope of log N(s) vs log(1/s)
  double residual = 0.0;     // rms regression residual
  std::vector<double> scales;
  std::vector<long> counts;  // occupied boxes (or greedy net size) per scale
};

/// Box-counting estimate over the given scales: grid-aligned occupied-box
/// counts for coordinate spaces, greedy s-net size for matrix spaces.
/// Requires at least 4 usable scales inside [4h, diam/2].
DimensionEstimate box_counting_dimension(const FiniteMetricSpace& X,
                                         const std::vector<double>& scales);

/// Dyadic default ladder inside the trimmed range [8h, diam/4].
std::vector<double> default_scales(const FiniteMetricSpace& X);

/// The conformal-dimension lower bound 1 + sigma/(tau - sigma).
/// Requires tau > sigma >= 0; tau - sigma < 1 is reported by callers, not
/// rejected, since both exponents carry estimation error.
double pansu_bound(double sigma, double tau);

struct BoundResult {
  bool certified = false;      // every family certificate passed
  std::string reason;          // "" when certified, else the failing gate
  double sigma = 0.0;
  double tau = 0.0;
  double A = 1.0;              // hit-measure constant 4^sigma
  double bound = 1.0;          // 1 when uncertified or degenerate
  int hit_checks = 0;          // random balls audited
  int hit_violations = 0;
  DimensionEstimate tau_estimate;
};

struct BoundOptions {
  int hit_samples = 1000;
  std::uint64_t seed = 1;
};

/// Assembles the certified bound from a built family: audits the family
/// certificates and the hit-measure bound on random balls, estimates tau by
/// box counting, and only then emits 1 + sigma/(tau - sigma). Any failed
/// prerequisite yields an uncertified result with bound 1.
BoundResult bound_from_family(const CantorFamily& fam, const FiniteMetricSpace& X,
                              const BoundOptions& opts = {});

}  // namespace confdim

#endif
