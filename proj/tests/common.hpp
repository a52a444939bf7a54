#ifndef CONFDIM_TESTS_COMMON_HPP
#define CONFDIM_TESTS_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "confdim/arc.hpp"
#include "confdim/metric_space.hpp"
#include "confdim/spaces.hpp"
#include "confdim/straighten.hpp"

namespace confdim::tests {

inline FiniteMetricSpace make_space(SpaceKind kind, int level, int grid = 2,
                                    MetricKind metric = MetricKind::Euclidean) {
  SpaceSpec spec;
  spec.kind = kind;
  spec.level = level;
  spec.grid = grid;
  spec.metric = metric;
  return generate(spec);
}

inline NeighborGraph graph_at_2h(const FiniteMetricSpace& X) {
  return NeighborGraph(X, 2.0 * X.resolution());
}

/// Same sweep the pipeline uses to pick the seed-arc endpoints: start at 0,
/// hop to the farthest point four times.
inline std::pair<PointId, PointId> farthest_pair(const FiniteMetricSpace& X) {
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

/// Seeded random zigzag: a random walk on the neighbor graph with loops
/// dropped, giving a valid (usually very non-straight) simple path.
inline Arc random_zigzag(const NeighborGraph& G, std::uint64_t seed, int steps) {
  std::mt19937_64 rng(seed);
  const FiniteMetricSpace& X = G.space();
  std::uniform_int_distribution<PointId> pick(0, X.size() - 1);
  std::vector<PointId> walk;
  while (true) {
    walk.assign(1, pick(rng));
    for (int i = 0; i < steps; ++i) {
      const auto& nb = G.neighbors(walk.back());
      if (nb.empty()) break;
      walk.push_back(nb[std::uniform_int_distribution<std::size_t>(0, nb.size() - 1)(rng)]);
    }
    std::vector<PointId> simple = drop_loops(walk);
    if (simple.size() >= 2) {
      Arc A;
      A.verts = std::move(simple);
      A.scale = G.scale();
      return A;
    }
  }
}

/// Quasi-arc stability check: build a map f from A to A' by perturbed
/// nearest-point projection, measure its additive distortion C, and verify
/// that images of subarcs stay within ((2*C*lambda + C)*lambda + C + 2h) of
/// the corresponding subarc of A', on `pair_samples` sampled index pairs.
/// Returns the number of violations (0 when the property holds).
inline int subarc_image_violations(const Arc& A, const Arc& Ap, const FiniteMetricSpace& X,
                                   std::uint64_t seed, int pair_samples) {
  std::mt19937_64 rng(seed);
  const int n = A.size(), m = Ap.size();
  // perturbed projection: nearest index on A', jittered by up to 2 slots
  std::vector<int> idx(n);
  std::uniform_int_distribution<int> jitter(-2, 2);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    double bd = X.distance(A[i], Ap[0]);
    for (int k = 1; k < m; ++k) {
      double d = X.distance(A[i], Ap[k]);
      if (d < bd) {
        bd = d;
        best = k;
      }
    }
    idx[i] = std::clamp(best + jitter(rng), 0, m - 1);
  }
  // exact additive distortion of f over all pairs
  double C = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      C = std::max(C, std::abs(X.distance(Ap[idx[i]], Ap[idx[j]]) - X.distance(A[i], A[j])));
  double lambda = std::max(quasiarc_constant(A, X).lambda, quasiarc_constant(Ap, X).lambda);
  double bound = (2.0 * C * lambda + C) * lambda + C + 2.0 * X.resolution();

  std::uniform_int_distribution<int> pick(0, n - 1);
  int violations = 0;
  for (int s = 0; s < pair_samples; ++s) {
    int i = pick(rng), j = pick(rng);
    if (i > j) std::swap(i, j);
    int lo = std::min(idx[i], idx[j]), hi = std::max(idx[i], idx[j]);
    for (int u = i; u <= j; ++u) {
      double d = std::numeric_limits<double>::infinity();
      for (int k = lo; k <= hi; ++k) d = std::min(d, X.distance(Ap[idx[u]], Ap[k]));
      if (d > bound + 1e-12) ++violations;
    }
  }
  return violations;
}

}  // namespace confdim::tests

#endif
