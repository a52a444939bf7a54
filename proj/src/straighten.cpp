#include "confdim/straighten.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "confdim/connectivity.hpp"

namespace confdim {

namespace {

// Shortest path by edge length (not hops) through the admissible region,
// so that splicing it in can only shorten the arc. Deterministic: ties in
// the queue break on vertex id.
template <typename Admit>
std::optional<std::vector<PointId>> dijkstra_path(PointId x, PointId y, const NeighborGraph& G,
                                                  Admit admit) {
  const auto& X = G.space();
  std::unordered_map<PointId, double> dist;
  std::unordered_map<PointId, PointId> parent;
  using Entry = std::pair<double, PointId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  dist.emplace(x, 0.0);
  parent.emplace(x, x);
  pq.push({0.0, x});
  while (!pq.empty()) {
    auto [dv, v] = pq.top();
    pq.pop();
    if (dv > dist[v]) continue;
    if (v == y) break;
    for (PointId u : G.neighbors(v)) {
      if (u != y && !admit(u)) continue;
      double du = dv + X.distance(v, u);
      auto it = dist.find(u);
      if (it == dist.end() || du < it->second - 1e-15) {
        dist[u] = du;
        parent[u] = v;
        pq.push({du, u});
      }
    }
  }
  if (!dist.count(y)) return std::nullopt;
  std::vector<PointId> path;
  for (PointId c = y; c != x; c = parent[c]) path.push_back(c);
  path.push_back(x);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::vector<PointId> drop_loops(const std::vector<PointId>& path) {
  std::vector<PointId> out;
  std::unordered_map<PointId, int> pos;
  for (PointId v : path) {
    auto it = pos.find(v);
    if (it != pos.end()) {
      while (static_cast<int>(out.size()) > it->second + 1) {
        pos.erase(out.back());
        out.pop_back();
      }
    } else {
      pos.emplace(v, static_cast<int>(out.size()));
      out.push_back(v);
    }
  }
  return out;
}

StraightenResult straighten(const Arc& A, double eps, double lambda_target,
                            const NeighborGraph& G, const StraightenOptions& opts) {
  const auto& X = G.space();
  if (A.size() < 1 || !A.is_simple()) throw std::invalid_argument("straighten: not a simple arc");
  if (lambda_target <= 1.0) throw std::invalid_argument("straighten: lambda_target must be > 1");
  double h = std::max(X.resolution(), G.scale() / 2.0);
  if (eps < 4.0 * h) throw std::invalid_argument("straighten: eps below 4h net resolution");

  SetNeighborhood allowed = set_neighborhood(A.verts, eps, G);
  const double tol = 2.0 * h;  // net slack: shortcuts themselves carry it

  StraightenResult res;
  res.arc = A;
  res.potential.push_back(A.length(X));
  std::set<std::pair<PointId, PointId>> blocked;
  int cap = opts.max_iters > 0 ? opts.max_iters : 200 + 30 * A.size();

  while (true) {
    Arc& cur = res.arc;
    const int n = cur.size();
    // worst violating pair by diameter/distance ratio; lexicographic ties
    int bi = -1, bj = -1;
    double best_ratio = 0.0, bd = 0.0;
    DiameterSweep sweep(X);
    for (int i = 0; i + 1 < n; ++i) {
      sweep.reset(cur[i]);
      for (int j = i + 1; j < n; ++j) {
        double diam = sweep.add(cur[j]);
        double d = X.distance(cur[i], cur[j]);
        if (d <= 0.0 || d > eps) continue;
        if (diam <= lambda_target * d + tol + 1e-12) continue;
        if (blocked.count({cur[i], cur[j]})) continue;
        double ratio = diam / d;
        if (ratio > best_ratio) {
          best_ratio = ratio;
          bi = i;
          bj = j;
          bd = d;
        }
      }
    }
    if (bi < 0) break;

    PointId x = cur[bi], y = cur[bj];
    double diam_cap = lambda_target * bd + tol;
    auto admit = [&](PointId v) {
      return allowed.contains(v) && X.distance(x, v) <= diam_cap && X.distance(y, v) <= diam_cap;
    };
    auto path = dijkstra_path(x, y, G, admit);
    bool accepted = false;
    if (path) {
      Arc shortcut;
      shortcut.scale = G.scale();
      shortcut.verts = *path;
      if (shortcut.diameter(X) <= diam_cap + 1e-12) {
        std::vector<PointId> verts(cur.verts.begin(), cur.verts.begin() + bi);
        verts.insert(verts.end(), path->begin(), path->end());
        verts.insert(verts.end(), cur.verts.begin() + bj + 1, cur.verts.end());
        verts = drop_loops(verts);
        Arc cand;
        cand.scale = G.scale();
        cand.verts = std::move(verts);
        double len = cand.length(X);
        if (len < res.potential.back() - 1e-12) {
          res.arc = std::move(cand);
          res.potential.push_back(len);
          ++res.iterations;
          accepted = true;
        }
      }
    }
    if (!accepted) blocked.insert({x, y});
    if (res.iterations >= cap) {
      std::ostringstream msg;
      msg << "straighten: iteration cap " << cap << " exceeded; potential "
          << res.potential.front() << " -> " << res.potential.back();
      throw std::runtime_error(msg.str());
    }
  }

  // achieved locality: the largest alpha <= 1 free of violations below alpha*eps
  res.alpha = 1.0;
  {
    const Arc& cur = res.arc;
    DiameterSweep sweep(X);
    for (int i = 0; i + 1 < cur.size(); ++i) {
      sweep.reset(cur[i]);
      for (int j = i + 1; j < cur.size(); ++j) {
        double diam = sweep.add(cur[j]);
        double d = X.distance(cur[i], cur[j]);
        if (d <= 0.0 || d > eps) continue;
        if (diam > lambda_target * d + tol + 1e-12)
          res.alpha = std::min(res.alpha, d / eps * (1.0 - 1e-9));
      }
    }
  }
  res.lambda = res.arc.size() >= 2
                   ? quasiarc_constant(res.arc, X, res.alpha * eps).lambda
                   : 1.0;
  res.follows = check_follows(res.arc, A, X, eps);
  return res;
}

StraightenResult find_quasiarc(PointId x, PointId y, double lambda_target,
                               const NeighborGraph& G, const StraightenOptions& opts) {
  if (x == y) throw std::invalid_argument("find_quasiarc: x == y");
  const auto& X = G.space();
  std::optional<Arc> a0;
  for (double L : {2.0, 4.0, 8.0, 16.0}) {
    a0 = connect_linear(x, y, L, G);
    if (a0) break;
  }
  if (!a0) a0 = shortest_path(x, y, G);
  if (!a0) throw std::runtime_error("find_quasiarc: endpoints are not connected");

  double h = std::max(X.resolution(), G.scale() / 2.0);
  double floor_eps = 4.0 * h;
  double eps = std::max(a0->diameter(X), floor_eps);
  StraightenResult res;
  res.arc = *a0;
  double first_eps = eps;
  while (true) {
    StraightenResult stage = straighten(res.arc, eps, lambda_target, G, opts);
    stage.iterations += res.iterations;
    res = std::move(stage);
    if (eps <= floor_eps * (1.0 + 1e-9)) break;
    eps = std::max(eps / 2.0, floor_eps);
  }
  res.follows = check_follows(res.arc, *a0, X, first_eps);
  return res;
}

}  // namespace confdim
