#include "confdim/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

namespace confdim {

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Euclidean: return "euclidean";
    case MetricKind::Sup: return "sup";
    case MetricKind::ExplicitMatrix: return "matrix";
  }
  return "euclidean";
}

MetricKind metric_kind_from_string(const std::string& name) {
  if (name == "euclidean") return MetricKind::Euclidean;
  if (name == "sup") return MetricKind::Sup;
  if (name == "matrix") return MetricKind::ExplicitMatrix;
  throw std::invalid_argument("unknown metric kind: " + name);
}

FiniteMetricSpace FiniteMetricSpace::from_coords(std::vector<double> coords, int dim,
                                                 MetricKind kind, double resolution) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dim must be 1, 2 or 3");
  if (kind == MetricKind::ExplicitMatrix)
    throw std::invalid_argument("coordinate space cannot use matrix metric");
  if (coords.size() % dim != 0) throw std::invalid_argument("coords size not divisible by dim");
  FiniteMetricSpace X;
  X.n_ = static_cast<int>(coords.size() / dim);
  X.dim_ = dim;
  X.kind_ = kind;
  X.h_ = resolution;
  X.coords_ = std::move(coords);
  return X;
}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<double> matrix, int n,
                                                 double resolution) {
  if (n > 20000) throw std::invalid_argument("explicit matrix limited to 20000 points");
  if (matrix.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("matrix size mismatch");
  for (int i = 0; i < n; ++i) {
    if (matrix[static_cast<size_t>(i) * n + i] != 0.0)
      throw std::invalid_argument("matrix diagonal must be zero");
    for (int j = i + 1; j < n; ++j) {
      double dij = matrix[static_cast<size_t>(i) * n + j];
      double dji = matrix[static_cast<size_t>(j) * n + i];
      if (dij <= 0.0 || dij != dji)
        throw std::invalid_argument("matrix must be symmetric, positive off the diagonal");
    }
  }
  FiniteMetricSpace X;
  X.n_ = n;
  X.dim_ = 0;
  X.kind_ = MetricKind::ExplicitMatrix;
  X.h_ = resolution;
  X.matrix_ = std::move(matrix);
  return X;
}

double FiniteMetricSpace::distance(PointId a, PointId b) const {
  if (kind_ == MetricKind::ExplicitMatrix)
    return matrix_[static_cast<size_t>(a) * n_ + b];
  const double* pa = &coords_[static_cast<size_t>(a) * dim_];
  const double* pb = &coords_[static_cast<size_t>(b) * dim_];
  if (kind_ == MetricKind::Sup) {
    double m = 0.0;
    for (int k = 0; k < dim_; ++k) m = std::max(m, std::abs(pa[k] - pb[k]));
    return m;
  }
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) {
    double d = pa[k] - pb[k];
    s += d * d;
  }
  return std::sqrt(s);
}

double FiniteMetricSpace::diameter() const {
  if (diameter_cache_ >= 0.0) return diameter_cache_;
  if (n_ == 0) return 0.0;
  double best = 0.0;
  PointId p = 0;
  for (int sweep = 0; sweep < 6; ++sweep) {
    PointId far = p;
    double fd = 0.0;
    for (PointId q = 0; q < n_; ++q) {
      double d = distance(p, q);
      if (d > fd) {
        fd = d;
        far = q;
      }
    }
    best = std::max(best, fd);
    if (far == p) break;
    p = far;
  }
  diameter_cache_ = best;
  return best;
}

double FiniteMetricSpace::triangle_audit(std::uint64_t seed, int samples) const {
  if (n_ < 3) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PointId> pick(0, n_ - 1);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    PointId x = pick(rng), y = pick(rng), z = pick(rng);
    worst = std::max(worst, distance(x, z) - distance(x, y) - distance(y, z));
  }
  return worst;
}

NeighborGraph::NeighborGraph(const FiniteMetricSpace& X, double scale)
    : space_(&X), scale_(scale) {
  if (scale <= 0.0) throw std::invalid_argument("neighbor graph scale must be positive");
  int n = X.size();
  adj_.assign(n, {});
  // relative tolerance so points at distance exactly `scale` (e.g. regular
  // grids with irrational spacing) stay connected despite rounding
  double eff = scale * (1.0 + 1e-9);
  if (X.has_coords()) {
    build_grid();
    for (PointId i = 0; i < n; ++i) {
      for (PointId j : ball_points(i, eff)) {
        if (j > i) {
          adj_[i].push_back(j);
          adj_[j].push_back(i);
        }
      }
    }
  } else {
    for (PointId i = 0; i < n; ++i)
      for (PointId j = i + 1; j < n; ++j)
        if (X.distance(i, j) <= eff) {
          adj_[i].push_back(j);
          adj_[j].push_back(i);
        }
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

void NeighborGraph::build_grid() {
  const auto& X = *space_;
  int dim = X.dim();
  double lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
  for (int k = 0; k < dim; ++k) {
    lo[k] = std::numeric_limits<double>::infinity();
    hi[k] = -std::numeric_limits<double>::infinity();
  }
  for (PointId p = 0; p < X.size(); ++p)
    for (int k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], X.coord(p, k));
      hi[k] = std::max(hi[k], X.coord(p, k));
    }
  grid_.cell = scale_;
  long total = 1;
  for (int k = 0; k < dim; ++k) {
    grid_.origin[k] = lo[k];
    grid_.dims[k] = std::max(1, static_cast<int>((hi[k] - lo[k]) / grid_.cell) + 1);
    total *= grid_.dims[k];
  }
  // fall back to a coarser grid if the scale is tiny relative to the extent
  while (total > 8L * X.size() + 1024) {
    grid_.cell *= 2.0;
    total = 1;
    for (int k = 0; k < dim; ++k) {
      grid_.dims[k] = std::max(1, static_cast<int>((hi[k] - lo[k]) / grid_.cell) + 1);
      total *= grid_.dims[k];
    }
  }
  grid_.cells.assign(static_cast<size_t>(total), {});
  for (PointId p = 0; p < X.size(); ++p) {
    double c[3] = {0, 0, 0};
    for (int k = 0; k < dim; ++k) c[k] = X.coord(p, k);
    grid_.cells[static_cast<size_t>(cell_index(c))].push_back(p);
  }
}

long NeighborGraph::cell_index(const double* p) const {
  const auto& X = *space_;
  long idx = 0;
  for (int k = 0; k < X.dim(); ++k) {
    int c = static_cast<int>((p[k] - grid_.origin[k]) / grid_.cell);
    c = std::clamp(c, 0, grid_.dims[k] - 1);
    idx = idx * grid_.dims[k] + c;
  }
  return idx;
}

PointSet NeighborGraph::ball_points_around(const std::vector<double>& point, double r) const {
  const auto& X = *space_;
  PointSet out;
  if (!X.has_coords()) throw std::logic_error("ball_points_around needs coordinates");
  int dim = X.dim();
  int clo[3] = {0, 0, 0}, chi[3] = {0, 0, 0};
  for (int k = 0; k < dim; ++k) {
    clo[k] = std::clamp(static_cast<int>((point[k] - r - grid_.origin[k]) / grid_.cell), 0,
                        grid_.dims[k] - 1);
    chi[k] = std::clamp(static_cast<int>((point[k] + r - grid_.origin[k]) / grid_.cell), 0,
                        grid_.dims[k] - 1);
  }
  int c[3] = {clo[0], clo[1], clo[2]};
  auto dist_to = [&](PointId q) {
    if (X.metric() == MetricKind::Sup) {
      double m = 0.0;
      for (int k = 0; k < dim; ++k) m = std::max(m, std::abs(point[k] - X.coord(q, k)));
      return m;
    }
    double s = 0.0;
    for (int k = 0; k < dim; ++k) {
      double d = point[k] - X.coord(q, k);
      s += d * d;
    }
    return std::sqrt(s);
  };
  while (true) {
    long idx = 0;
    for (int k = 0; k < dim; ++k) idx = idx * grid_.dims[k] + c[k];
    for (PointId q : grid_.cells[static_cast<size_t>(idx)])
      if (dist_to(q) <= r) out.push_back(q);
    int k = dim - 1;
    while (k >= 0) {
      if (++c[k] <= chi[k]) break;
      c[k] = clo[k];
      --k;
    }
    if (k < 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

PointSet NeighborGraph::ball_points(PointId center, double r) const {
  const auto& X = *space_;
  if (X.has_coords()) {
    std::vector<double> c(static_cast<size_t>(X.dim()));
    for (int k = 0; k < X.dim(); ++k) c[static_cast<size_t>(k)] = X.coord(center, k);
    PointSet out = ball_points_around(c, r);
    out.erase(std::remove(out.begin(), out.end(), center), out.end());
    return out;
  }
  PointSet out;
  for (PointId q = 0; q < X.size(); ++q)
    if (q != center && X.distance(center, q) <= r) out.push_back(q);
  return out;
}

std::size_t NeighborGraph::edge_count() const {
  std::size_t s = 0;
  for (const auto& a : adj_) s += a.size();
  return s / 2;
}

std::vector<int> NeighborGraph::component_labels() const {
  int n = static_cast<int>(adj_.size());
  std::vector<int> label(n, -1);
  int next = 0;
  std::vector<PointId> stack;
  for (PointId s = 0; s < n; ++s) {
    if (label[s] != -1) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      PointId v = stack.back();
      stack.pop_back();
      for (PointId w : adj_[v])
        if (label[w] == -1) {
          label[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  return label;
}

int NeighborGraph::component_count() const {
  auto labels = component_labels();
  return labels.empty() ? 0 : 1 + *std::max_element(labels.begin(), labels.end());
}

NeighborGraph build_neighbor_graph(const FiniteMetricSpace& X, double scale) {
  return NeighborGraph(X, scale);
}

double SetNeighborhood::distance_to_set(PointId v) const {
  auto it = dist.find(v);
  return it == dist.end() ? std::numeric_limits<double>::infinity() : it->second;
}

SetNeighborhood set_neighborhood(const PointSet& verts, double eps, const NeighborGraph& G) {
  const auto& X = G.space();
  SetNeighborhood nb;
  for (PointId v : verts)
    if (nb.dist.try_emplace(v, 0.0).second) nb.pts.push_back(v);
  for (PointId v : verts) {
    for (PointId q : G.ball_points(v, eps)) {
      double d = X.distance(v, q);
      auto [it, fresh] = nb.dist.try_emplace(q, d);
      if (fresh)
        nb.pts.push_back(q);
      else if (d < it->second)
        it->second = d;
    }
  }
  std::sort(nb.pts.begin(), nb.pts.end());
  return nb;
}

double set_distance(const PointSet& U, const PointSet& V, const FiniteMetricSpace& X) {
  if (U.empty() || V.empty()) throw std::invalid_argument("empty set");
  double best = std::numeric_limits<double>::infinity();
  for (PointId u : U)
    for (PointId v : V) best = std::min(best, X.distance(u, v));
  return best;
}

double point_set_distance(PointId x, const PointSet& U, const FiniteMetricSpace& X) {
  if (U.empty()) throw std::invalid_argument("empty set");
  double best = std::numeric_limits<double>::infinity();
  for (PointId u : U) best = std::min(best, X.distance(x, u));
  return best;
}

double hausdorff_distance(const PointSet& U, const PointSet& V, const FiniteMetricSpace& X) {
  if (U.empty() || V.empty()) throw std::invalid_argument("empty set");
  double cmax = 0.0;
  auto one_side = [&](const PointSet& A, const PointSet& B) {
    for (PointId a : A) {
      double cmin = std::numeric_limits<double>::infinity();
      for (PointId b : B) {
        double d = X.distance(a, b);
        if (d < cmax) {  // cannot raise the running max; skip the rest
          cmin = d;
          break;
        }
        cmin = std::min(cmin, d);
      }
      cmax = std::max(cmax, cmin);
    }
  };
  one_side(U, V);
  one_side(V, U);
  return cmax;
}

double hausdorff_distance_bruteforce(const PointSet& U, const PointSet& V,
                                     const FiniteMetricSpace& X) {
  if (U.empty() || V.empty()) throw std::invalid_argument("empty set");
  double h = 0.0;
  for (PointId u : U) {
    double m = std::numeric_limits<double>::infinity();
    for (PointId v : V) m = std::min(m, X.distance(u, v));
    h = std::max(h, m);
  }
  for (PointId v : V) {
    double m = std::numeric_limits<double>::infinity();
    for (PointId u : U) m = std::min(m, X.distance(v, u));
    h = std::max(h, m);
  }
  return h;
}

namespace {

// Branch and bound over a candidate list with per-candidate coverage masks.
// Requires candidates.size() <= 64.
int exact_cover(const std::vector<std::uint64_t>& masks, std::uint64_t all, int best_so_far) {
  struct Frame {
    std::uint64_t covered;
    int used;
  };
  int best = best_so_far;
  std::vector<Frame> stack{{0, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.covered == all) {
      best = std::min(best, f.used);
      continue;
    }
    if (f.used + 1 >= best) continue;
    // branch on the lowest uncovered element
    std::uint64_t uncovered = all & ~f.covered;
    int elem = std::countr_zero(uncovered);
    for (size_t c = 0; c < masks.size(); ++c)
      if (masks[c] >> elem & 1) stack.push_back({f.covered | masks[c], f.used + 1});
  }
  return best;
}

}  // namespace

int cover_number(const FiniteMetricSpace& X, PointId center, double r,
                 int exact_candidate_cap) {
  // points to cover
  PointSet target;
  for (PointId p = 0; p < X.size(); ++p)
    if (X.distance(center, p) <= r) target.push_back(p);
  if (target.empty()) return 0;
  double half = r / 2.0;

  // large instances: a maximal (r/2)-separated subset of the target is a
  // valid cover by (r/2)-balls, and greedy first-fit finds one cheaply
  if (target.size() > 256) {
    PointSet net;
    for (PointId t : target) {
      bool covered = false;
      for (PointId q : net)
        if (X.distance(t, q) <= half) {
          covered = true;
          break;
        }
      if (!covered) net.push_back(t);
    }
    return static_cast<int>(net.size());
  }

  // candidate centers: anything close enough to cover at least one target
  PointSet candidates;
  for (PointId z = 0; z < X.size(); ++z)
    if (X.distance(center, z) <= 1.5 * r) candidates.push_back(z);

  // coverage sets
  std::vector<PointSet> covers(candidates.size());
  for (size_t c = 0; c < candidates.size(); ++c)
    for (PointId t : target)
      if (X.distance(candidates[c], t) <= half) covers[c].push_back(t);

  // drop dominated candidates (coverage contained in another's)
  std::vector<bool> dead(candidates.size(), false);
  for (size_t a = 0; a < candidates.size(); ++a) {
    if (dead[a] || covers[a].empty()) {
      dead[a] = true;
      continue;
    }
    for (size_t b = 0; b < candidates.size(); ++b) {
      if (a == b || dead[b]) continue;
      if (covers[a].size() < covers[b].size() ||
          (covers[a].size() == covers[b].size() && b < a)) {
        if (std::includes(covers[b].begin(), covers[b].end(), covers[a].begin(),
                          covers[a].end())) {
          dead[a] = true;
          break;
        }
      }
    }
  }
  std::vector<PointSet> live;
  for (size_t c = 0; c < candidates.size(); ++c)
    if (!dead[c]) live.push_back(std::move(covers[c]));

  // greedy upper bound (with single-swap improvement)
  std::vector<bool> covered(target.size(), false);
  std::vector<int> tindex(X.size(), -1);
  for (size_t i = 0; i < target.size(); ++i) tindex[static_cast<size_t>(target[i])] = static_cast<int>(i);
  int greedy = 0;
  size_t remaining = target.size();
  std::vector<bool> used(live.size(), false);
  while (remaining > 0) {
    size_t best = live.size();
    size_t best_gain = 0;
    for (size_t c = 0; c < live.size(); ++c) {
      if (used[c]) continue;
      size_t gain = 0;
      for (PointId t : live[c])
        if (!covered[static_cast<size_t>(tindex[static_cast<size_t>(t)])]) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best == live.size()) break;  // should not happen: every target covers itself
    used[best] = true;
    ++greedy;
    for (PointId t : live[best]) {
      size_t i = static_cast<size_t>(tindex[static_cast<size_t>(t)]);
      if (!covered[i]) {
        covered[i] = true;
        --remaining;
      }
    }
  }

  if (live.size() <= static_cast<size_t>(std::min(exact_candidate_cap, 64)) &&
      target.size() <= 64) {
    std::vector<std::uint64_t> masks(live.size(), 0);
    for (size_t c = 0; c < live.size(); ++c)
      for (PointId t : live[c])
        masks[c] |= 1ULL << tindex[static_cast<size_t>(t)];
    std::uint64_t all = target.size() == 64 ? ~0ULL : (1ULL << target.size()) - 1;
    return exact_cover(masks, all, greedy);
  }
  return greedy;
}

int doubling_constant(const FiniteMetricSpace& X, const DoublingOptions& opts) {
  if (X.empty()) throw std::invalid_argument("empty space");
  if (X.size() == 1) return 1;
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<PointId> pick(0, X.size() - 1);
  double diam = X.diameter();
  double rmin = std::max(X.resolution() * 4.0, diam * 1e-6);
  int worst = 1;
  for (int i = 0; i < opts.sample_budget; ++i) {
    PointId c = pick(rng);
    // dyadic radius ladder
    for (double r = diam / 2.0; r >= rmin; r /= 2.0) {
      worst = std::max(worst, cover_number(X, c, r, opts.exact_candidate_cap));
    }
  }
  return worst;
}

}  // namespace confdim
