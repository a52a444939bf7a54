#include "confdim/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace confdim {

namespace {

// BFS over the subgraph induced by `admit`, fewest hops, ids break ties
// through the sorted adjacency lists.
template <typename Admit>
std::optional<Arc> bfs_path(PointId x, PointId y, const NeighborGraph& G, Admit admit) {
  if (x == y) {
    Arc a;
    a.scale = G.scale();
    a.verts = {x};
    return a;
  }
  std::unordered_map<PointId, PointId> parent;
  parent.emplace(x, x);
  std::queue<PointId> q;
  q.push(x);
  while (!q.empty()) {
    PointId v = q.front();
    q.pop();
    for (PointId w : G.neighbors(v)) {
      if (parent.count(w)) continue;
      if (w != y && !admit(w)) continue;
      parent.emplace(w, v);
      if (w == y) {
        Arc a;
        a.scale = G.scale();
        for (PointId c = y; c != x; c = parent[c]) a.verts.push_back(c);
        a.verts.push_back(x);
        std::reverse(a.verts.begin(), a.verts.end());
        return a;
      }
      q.push(w);
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Arc> restricted_path(PointId x, PointId y, const NeighborGraph& G,
                                   const std::function<bool(PointId)>& admit) {
  return bfs_path(x, y, G, [&](PointId v) { return admit(v); });
}

std::optional<Arc> shortest_path(PointId x, PointId y, const NeighborGraph& G) {
  return bfs_path(x, y, G, [](PointId) { return true; });
}

std::optional<Arc> connect_linear(PointId x, PointId y, double L, const NeighborGraph& G) {
  if (x == y) throw std::invalid_argument("connect_linear: x == y");
  if (L < 1.0) throw std::invalid_argument("connect_linear: L < 1");
  const auto& X = G.space();
  double d = X.distance(x, y);
  double h = std::max(X.resolution(), G.scale() / 2.0);
  // ladder of sub-L values so that success is monotone in L
  std::vector<double> ladder;
  for (double l = 1.0; l < L; l *= 1.5) ladder.push_back(l);
  ladder.push_back(L);
  for (double l : ladder) {
    double cap = l * d + 2.0 * h;
    auto admit = [&](PointId v) {
      return X.distance(x, v) <= cap && X.distance(y, v) <= cap;
    };
    auto arc = bfs_path(x, y, G, admit);
    if (!arc) continue;
    if (arc->diameter(X) <= cap) return arc;
  }
  return std::nullopt;
}

std::optional<Arc> connect_annulus(PointId p, double r, PointId x, PointId y, double L,
                                   const NeighborGraph& G) {
  if (L < 1.0) throw std::invalid_argument("connect_annulus: L < 1");
  const auto& X = G.space();
  Annulus pre{p, r, 2.0 * r};
  if (!pre.contains(X, x) || !pre.contains(X, y))
    throw std::invalid_argument("connect_annulus: endpoints outside A(p,r,2r)");
  double h = X.resolution();
  double inner = r / L - h, outer = 2.0 * L * r + h;
  auto admit = [&](PointId v) {
    double d = X.distance(p, v);
    return d >= inner && d <= outer;
  };
  if (!admit(x) || !admit(y)) return std::nullopt;
  return bfs_path(x, y, G, admit);
}

ConnectivityReport annular_constant(const NeighborGraph& G, const ConnectivityOptions& opts) {
  const auto& X = G.space();
  ConnectivityReport rep;
  double h = X.resolution() > 0 ? X.resolution() : G.scale() / 2.0;
  double diam = X.diameter();
  double rmin = 4.0 * h, rmax = diam / 4.0;
  if (rmin >= rmax) throw std::invalid_argument("annular_constant: no usable scale range");
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<PointId> pick(0, X.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool linear_fail = false, annular_fail = false;

  auto least_L = [&](auto&& connect) -> std::optional<double> {
    // geometric scan then bisection on the least workable L
    double lo = 1.0, hi = -1.0;
    for (double l = 1.0; l <= opts.L_max * 1.0001; l = std::max(l * 1.4, l + 0.25)) {
      if (connect(std::min(l, opts.L_max))) {
        hi = std::min(l, opts.L_max);
        break;
      }
      lo = l;
    }
    if (hi < 0) return std::nullopt;
    for (int it = 0; it < 12 && hi - lo > 0.05; ++it) {
      double mid = 0.5 * (lo + hi);
      if (connect(mid))
        hi = mid;
      else
        lo = mid;
    }
    return hi;
  };

  for (int s = 0; s < opts.sample_budget; ++s) {
    ++rep.samples_run;
    PointId p = pick(rng);
    double r = rmin * std::pow(rmax / rmin, unit(rng));
    // sample x,y from the annulus A(p,r,2r)
    PointSet ann;
    if (X.has_coords()) {
      for (PointId q : G.ball_points(p, 2.0 * r))
        if (X.distance(p, q) >= r) ann.push_back(q);
    } else {
      for (PointId q = 0; q < X.size(); ++q) {
        double d = X.distance(p, q);
        if (d >= r && d <= 2.0 * r) ann.push_back(q);
      }
    }
    if (ann.size() < 2) continue;
    std::uniform_int_distribution<size_t> apick(0, ann.size() - 1);
    PointId x = ann[apick(rng)];
    PointId y = ann[apick(rng)];
    if (x == y) continue;

    // linear query on the same pair
    Arc linear_arc;
    auto try_linear = [&](double l) {
      auto a = connect_linear(x, y, l, G);
      if (a) linear_arc = *a;
      return a.has_value();
    };
    auto Ll = least_L(try_linear);
    if (Ll) {
      if (*Ll >= rep.L_linear) {
        rep.L_linear = *Ll;
        rep.worst_linear = {-1, 0.0, x, y, *Ll, linear_arc, true};
      }
    } else {
      linear_fail = true;
      if (rep.counterexample.x < 0) rep.counterexample = {-1, 0.0, x, y, 0.0, {}, false};
    }

    // annular query: cap L so the inner exclusion stays meaningful at the
    // net resolution (r/L >= 2h), otherwise success is vacuous
    double cap = std::min(opts.L_max, r / (2.0 * h));
    cap = std::max(cap, 1.0);
    Arc ann_arc;
    auto try_ann = [&](double l) {
      auto a = connect_annulus(p, r, x, y, std::min(l, cap), G);
      if (a) ann_arc = *a;
      return a.has_value();
    };
    auto La = least_L(try_ann);
    if (La && *La <= cap + 1e-12) {
      if (*La >= rep.L_annular) {
        rep.L_annular = *La;
        rep.worst_annular = {p, r, x, y, *La, ann_arc, true};
      }
    } else {
      annular_fail = true;
      rep.counterexample = {p, r, x, y, 0.0, {}, false};
    }
  }
  rep.linear_ok = rep.L_linear > 0 && !linear_fail;
  rep.annular_ok = rep.L_annular > 0 && !annular_fail;
  rep.L_linear = std::max(rep.L_linear, 1.0);
  rep.L_annular = std::max(rep.L_annular, 1.0);
  return rep;
}

bool verify_witness(const ConnectivityWitness& w, const NeighborGraph& G, bool annular) {
  if (!w.success) return false;
  const auto& X = G.space();
  if (!w.arc.valid_in(G)) return false;
  if (w.arc.front() != w.x || w.arc.back() != w.y) return false;
  double h = X.resolution();
  if (annular) {
    double inner = w.r / w.achieved_L - h, outer = 2.0 * w.achieved_L * w.r + h;
    for (PointId v : w.arc.verts) {
      double d = X.distance(w.p, v);
      if (d < inner - 1e-12 || d > outer + 1e-12) return false;
    }
    return true;
  }
  double d = X.distance(w.x, w.y);
  return w.arc.diameter(X) <= w.achieved_L * d + 2.0 * h + 1e-12;
}

}  // namespace confdim
