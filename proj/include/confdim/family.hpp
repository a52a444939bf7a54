#ifndef CONFDIM_FAMILY_HPP
#define CONFDIM_FAMILY_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "confdim/arc.hpp"
#include "confdim/metric_space.hpp"

namespace confdim {

/// d_sigma(a, b) = exp(-(log 2 / sigma) * first-difference-index), 0 when
/// equal (infimum-over-empty-set convention). Words must have equal length.
double ultrametric(const std::string& a, const std::string& b, double sigma);

/// nu_sigma of the cylinder fixed by a prefix of length n: 2^(-n).
double cantor_measure(const std::string& prefix);

struct ResolutionExhaustedError : std::runtime_error {
  ResolutionExhaustedError() : std::runtime_error("resolution exhausted") {}
};

struct FamilyConstants {
  double lambda = 2.0;      // quasi-arc target/constant carried by the arcs
  double L = 2.0;           // linear connectivity constant
  double alpha = 1.0;       // achieved straightening locality
  double delta_star = 0.1;  // measured split-separation ratio
};

struct CantorFamily {
  // word (binary string, length <= depth) -> arc; "" is the seed
  std::map<std::string, Arc> arcs;
  int depth = 0;
  double beta = 0.0;          // scaling ratio actually used for the levels
  double beta_formula = 0.0;  // alpha*delta*/(32*lambda), clamped per theory
  bool beta_overridden = false;  // beta lifted above the formula so that
                                 // beta^depth stays above the 8h resolution
  double sigma = 0.0;         // -log 2 / log beta
  double lambda = 0.0;        // constants echo, used by measure slack terms
  double lambda_prime = 0.0;  // measured global quasi-arc constant of leaves
  std::vector<double> separation;  // index n-1: min pairwise distance at depth n
  std::vector<double> required;    // index n-1: beta^n
  double separation_tol = 0.9;     // accepted: separation >= beta^n*(1 - tol)

  // certificate statuses, all re-measured after the build
  bool separation_ok = false;
  bool follows_ok = false;   // child follows parent with slack <= beta^n
  bool cauchy_ok = false;    // d_H(parent, child) <= lambda*beta^n
  bool fact_qa_ok = false;   // parent inside N(child, lambda*beta^n)
  bool diameter_ok = false;  // every arc diameter >= diam(seed)/2
  double cauchy_worst = 0.0;

  std::vector<std::string> leaves() const;
  bool certified() const {
    return separation_ok && follows_ok && cauchy_ok && fact_qa_ok && diameter_ok;
  }
};

struct BuildFamilyOptions {
  int depth = -1;  // -1: auto, the largest n with beta^n >= 8h
  std::uint64_t seed = 1;
  // Accepted relative shortfall of the measured separations against the
  // continuum ledger value beta^n. On a finite net the ledger argument
  // degrades with the resolution (splits at depth clamp to the 8h floor),
  // so the default is loose; it still rejects touching or adjacent arcs.
  double separation_tol = 0.9;
  // Lift beta above the formula value when the requested depth would push
  // beta^depth below the 8h net resolution; flagged in the result.
  bool allow_beta_override = true;
  int tries = 3;
};

/// Iterated split-and-straighten family (binary words label the children).
/// The seed is straightened at eps = 1/10; level n splits every arc with
/// eps = beta^n/8 and straightens the pieces at eps = (delta*/32)*beta^n,
/// both floored at the net resolution. All the ledger quantities
/// (separation, follows slack, Cauchy distances) are re-measured, never
/// assumed. Throws ResolutionExhaustedError when a level's scales are
/// unreachable at the net resolution.
CantorFamily build_family(const NeighborGraph& G, const Arc& seed_arc,
                          const FamilyConstants& constants, const BuildFamilyOptions& opts = {});

struct EmbeddingReport {
  int pairs = 0;
  int lower_violations = 0;  // (1/2)*d_sigma <= d_H failed
  int upper_violations = 0;  // d_H <= (2*lambda'/beta^2)*d_sigma failed
  int comparability_violations = 0;  // d_H < set_distance (impossible) or
                                     // d_H > set_distance + 2*lambda*beta^n
  double upper_constant = 0.0;       // 2*lambda'/beta^2
  std::vector<std::pair<std::string, std::string>> violating;
  bool ok() const {
    return lower_violations == 0 && upper_violations == 0 && comparability_violations == 0;
  }
};

/// Bi-Lipschitz certificate for word -> arc on all leaf pairs:
/// (1/2)*d_sigma(a,b) <= d_H(J_a, J_b) <= (2*lambda'/beta^2)*d_sigma(a,b),
/// plus comparability of d_H with the minimum set distance.
EmbeddingReport embedding_check(const CantorFamily& fam, const FiniteMetricSpace& X);

struct HitMeasureResult {
  double mu = 0.0;       // leaf-counting measure of {a : J_a hits the ball}
  int leaves_hit = 0;
  double bound = 0.0;    // 4^sigma * (r + truncation slack)^sigma
  double bound_raw = 0.0;  // 4^sigma * r^sigma
  bool within = false;   // mu <= bound
};

/// mu_sigma{J_a : J_a intersects B(x, r)} by leaf enumeration, checked
/// against the 4^sigma*r^sigma bound with the depth-truncation slack
/// 2*lambda*beta^depth added to r (leaves stand in for the limit arcs).
HitMeasureResult hit_measure(const CantorFamily& fam, const Ball& ball,
                             const FiniteMetricSpace& X);

/// Empirical scaling exponent of the hit measure: least-squares slope of
/// log mu against log r over seeded random balls (centers uniform, radii
/// log-uniform in [4*beta^depth, diam/8]); balls hitting no leaf are
/// skipped. For an exact family this recovers sigma.
double hit_measure_exponent(const CantorFamily& fam, const FiniteMetricSpace& X,
                            int samples = 400, std::uint64_t seed = 1);

/// The natural vertical family of a cantor_product(level, grid) space: a
/// word picks a Cantor cylinder of x-coordinates, each leaf is one column
/// arc. beta = 1/3 and sigma = log2/log3 exactly; intermediate words map to
/// their leftmost column as representative.
CantorFamily make_product_family(const NeighborGraph& G, int level);

}  // namespace confdim

#endif
