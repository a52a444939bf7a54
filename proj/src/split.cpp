#include "confdim/split.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "confdim/connectivity.hpp"

namespace confdim {

namespace {

double min_dist_to(PointId v, const std::vector<PointId>& set, const FiniteMetricSpace& X) {
  double m = std::numeric_limits<double>::infinity();
  for (PointId u : set) m = std::min(m, X.distance(v, u));
  return m;
}

// --- the unzip walk ---------------------------------------------------------

struct WalkState {
  std::vector<PointId> j1, j2;
};

// Inductive detour walk: the two strands share only the current tip A[cur].
// Each step routes a detour through the component of B(tip, eps) \ {tip}
// from either strand to the furthest-back reachable future vertex of A;
// the entered strand is truncated at the detour's attachment point and the
// other strand absorbs the old tip plus the skipped stretch of A.
WalkState unzip_walk(const Arc& A, double eps, const NeighborGraph& G, std::mt19937_64& rng) {
  const auto& X = G.space();
  const int m = A.size();
  const int n = X.size();
  std::vector<int> a_index(static_cast<size_t>(n), -1);
  for (int i = 0; i < m; ++i) a_index[static_cast<size_t>(A[i])] = i;

  std::vector<std::uint8_t> in1(static_cast<size_t>(n), 0), in2(static_cast<size_t>(n), 0);
  std::vector<PointId> j1, j2;
  auto push = [&](int strand, PointId v) {
    (strand == 1 ? in1 : in2)[static_cast<size_t>(v)] = 1;
    (strand == 1 ? j1 : j2).push_back(v);
  };

  // Seed: a vertex of B0(a, eps) off the arc, reachable inside the ball.
  PointId a = A.front(), b = A.back();
  PointSet ball0 = component_ball(a, eps, G);
  std::vector<PointId> cands;
  for (PointId q : ball0)
    if (a_index[static_cast<size_t>(q)] < 0) cands.push_back(q);  // BFS order: nearest first
  if (cands.empty()) throw SeedNotFoundError();
  PointId w = cands[rng() % std::min<std::size_t>(cands.size(), 4)];
  std::unordered_set<PointId> ball0set(ball0.begin(), ball0.end());
  auto seed_path = restricted_path(w, a, G, [&](PointId v) { return ball0set.count(v) != 0; });
  assert(seed_path);
  // first arc vertex along the seed path becomes the initial shared tip
  int tip_idx = -1;
  for (PointId v : seed_path->verts) {
    int ai = a_index[static_cast<size_t>(v)];
    if (ai >= 0) {
      tip_idx = ai;
      break;
    }
    push(1, v);
  }
  assert(tip_idx >= 0);
  for (int i = 0; i < tip_idx; ++i) push(2, A[i]);
  int last_on_A = 2;  // strand whose tail currently continues into the tip along A

  while (tip_idx < m - 1 && X.distance(A[tip_idx], b) > eps / 2.0) {
    PointId tip = A[tip_idx];
    PointSet ballC = component_ball(tip, eps, G);
    std::unordered_set<PointId> inball(ballC.begin(), ballC.end());

    // multi-source BFS through the punctured ball from both strands
    std::unordered_map<PointId, PointId> parent;
    std::unordered_map<PointId, int> side;
    std::vector<PointId> frontier;
    for (PointId q : ballC) {
      if (q == tip) continue;
      if (in1[static_cast<size_t>(q)] || in2[static_cast<size_t>(q)]) {
        parent.emplace(q, q);
        side.emplace(q, in1[static_cast<size_t>(q)] ? 1 : 2);
        frontier.push_back(q);
      }
    }
    // both strand tails are adjacent to the tip, so sources always exist
    assert(!frontier.empty());

    PointId target = -1, via = -1;
    while (!frontier.empty() && target < 0) {
      std::vector<PointId> next;
      for (PointId v : frontier) {
        for (PointId u : G.neighbors(v)) {
          int ai = a_index[static_cast<size_t>(u)];
          if (ai > tip_idx && inball.count(u)) {
            // candidate re-entry into the future of A; earliest index wins
            if (target < 0 || ai < a_index[static_cast<size_t>(target)] ||
                (ai == a_index[static_cast<size_t>(target)] && u < target)) {
              target = u;
              via = v;
            }
            continue;
          }
          if (u == tip || parent.count(u) || !inball.count(u)) continue;
          if (in1[static_cast<size_t>(u)] || in2[static_cast<size_t>(u)]) continue;
          if (ai > tip_idx) continue;  // future arc vertices are targets only
          parent.emplace(u, v);
          next.push_back(u);
        }
      }
      frontier = std::move(next);
    }
    if (target < 0) throw CutPointError(tip);

    // detour chain via -> ... -> source (exclusive of the source strand vertex)
    std::vector<PointId> detour;
    PointId c = via;
    while (parent[c] != c) {
      detour.push_back(c);
      c = parent[c];
    }
    PointId source = c;  // BFS roots are their own parents and lie on a strand
    int d_side = side[source];
    std::reverse(detour.begin(), detour.end());  // now runs toward via

    auto& jd = d_side == 1 ? j1 : j2;
    auto& ind = d_side == 1 ? in1 : in2;
    // truncate the entered strand back to the attachment point
    while (jd.back() != source) {
      ind[static_cast<size_t>(jd.back())] = 0;
      jd.pop_back();
    }
    for (PointId v : detour) {
      ind[static_cast<size_t>(v)] = 1;
      jd.push_back(v);
    }
    // the other strand absorbs the old tip and the skipped stretch of A
    int o_side = 3 - d_side;
    int jdx = a_index[static_cast<size_t>(target)];
    push(o_side, tip);
    for (int i = tip_idx + 1; i < jdx; ++i) push(o_side, A[i]);
    last_on_A = o_side;
    tip_idx = jdx;
  }

  // the strand that ran along A claims the final tip
  push(last_on_A, A[tip_idx]);
  if (j1.empty() || j2.empty()) throw SeedNotFoundError();
  return {std::move(j1), std::move(j2)};
}

// --- separation-maximizing reroute ------------------------------------------

// Replace `strand` with the path through N(A, eps) \ other that maximizes
// its bottleneck clearance from `other`, keeping endpoints within eps of
// A's ends and the eps-follows relation intact. Clearance is normalized by
// a linear taper inside the endpoint balls: both strands have to converge
// on the shared endpoints, so demanding full clearance there is hopeless,
// while mid-arc every bit of width counts. The maximin path is found by a
// widest-path Dijkstra, so a single narrow pinch costs exactly its width
// instead of failing the whole route.
void reroute(std::vector<PointId>& strand, const std::vector<PointId>& other, const Arc& A,
             double eps, const NeighborGraph& G, const SetNeighborhood& nbA,
             const SplitOptions& opts) {
  const auto& X = G.space();
  std::unordered_set<PointId> in_other(other.begin(), other.end());
  PointId a = A.front(), b = A.back();

  // admissible region with taper-normalized clearance from the fixed strand
  std::vector<PointId> region;
  std::unordered_map<PointId, double> width;
  for (PointId v : nbA.pts) {
    if (in_other.count(v)) continue;
    bool blocked = false;
    for (const AvoidArc& av : opts.avoid)
      if (min_dist_to(v, av.arc->verts, X) < av.clearance) {
        blocked = true;
        break;
      }
    if (blocked) continue;
    double c = min_dist_to(v, other, X);
    double de = std::min(X.distance(v, a), X.distance(v, b));
    double taper = std::clamp(de / eps, 1e-6, 1.0);
    region.push_back(v);
    width.emplace(v, c / taper);
  }

  double cur_width = std::numeric_limits<double>::infinity();
  for (PointId v : strand) {
    auto it = width.find(v);
    cur_width = std::min(cur_width, it != width.end() ? it->second : 0.0);
  }

  // widest-path Dijkstra from the a-ring to the b-ring
  std::unordered_map<PointId, double> bestw;
  std::unordered_map<PointId, PointId> parent;
  std::priority_queue<std::pair<double, PointId>> pq;
  for (PointId v : region)
    if (X.distance(v, a) <= eps) {
      bestw[v] = width[v];
      parent[v] = v;
      pq.push({bestw[v], v});
    }
  PointId goal = -1;
  double goal_width = 0.0;
  while (!pq.empty()) {
    auto [w, v] = pq.top();
    pq.pop();
    if (w < bestw[v]) continue;
    if (X.distance(v, b) <= eps) {
      goal = v;
      goal_width = w;
      break;
    }
    for (PointId u : G.neighbors(v)) {
      auto it = width.find(u);
      if (it == width.end()) continue;
      double cand = std::min(w, it->second);
      auto bu = bestw.find(u);
      if (bu != bestw.end() && bu->second >= cand) continue;
      bestw[u] = cand;
      parent[u] = v;
      pq.push({cand, u});
    }
  }
  if (goal < 0 || goal_width <= cur_width) return;

  // Candidate routes: the maximin path itself plus minimum-hop routes over
  // width-thresholded subgraphs (the maximin path can wander and break the
  // follows relation; min-hop routes stay direct). Among candidates passing
  // the follows gate, keep the one with the best actual bottleneck width.
  std::vector<std::vector<PointId>> candidates;
  {
    std::vector<PointId> path;
    PointId c = goal;
    while (parent[c] != c) {
      path.push_back(c);
      c = parent[c];
    }
    path.push_back(c);
    std::reverse(path.begin(), path.end());
    candidates.push_back(std::move(path));
  }
  for (double frac : {1.0, 0.7, 0.5, 0.3, 0.15}) {
    double thr = goal_width * frac * (1.0 - 1e-12);
    if (thr <= cur_width) break;
    std::unordered_map<PointId, PointId> par;
    std::queue<PointId> q;
    for (PointId v : region)
      if (width[v] >= thr && X.distance(v, a) <= eps) {
        par.emplace(v, v);
        q.push(v);
      }
    PointId g2 = -1;
    while (!q.empty() && g2 < 0) {
      PointId v = q.front();
      q.pop();
      if (X.distance(v, b) <= eps) {
        g2 = v;
        break;
      }
      for (PointId u : G.neighbors(v)) {
        auto it = width.find(u);
        if (it == width.end() || it->second < thr || par.count(u)) continue;
        par.emplace(u, v);
        q.push(u);
      }
    }
    if (g2 < 0) continue;
    std::vector<PointId> path;
    PointId c = g2;
    while (par[c] != c) {
      path.push_back(c);
      c = par[c];
    }
    path.push_back(c);
    std::reverse(path.begin(), path.end());
    candidates.push_back(std::move(path));
  }

  std::optional<std::vector<PointId>> pick;
  double pick_width = cur_width;
  for (auto& path : candidates) {
    double w = std::numeric_limits<double>::infinity();
    for (PointId v : path) w = std::min(w, width[v]);
    if (w <= pick_width) continue;
    Arc pa;
    pa.scale = G.scale();
    pa.verts = path;
    if (follows_slack(pa, A, X) > eps) continue;
    pick = std::move(path);
    pick_width = w;
  }
  if (pick) strand = std::move(*pick);
}

Arc make_arc(std::vector<PointId> verts, double scale) {
  Arc a;
  a.scale = scale;
  a.verts = std::move(verts);
  return a;
}

double endpoint_drift(const SplitResult& s, const Arc& A, const FiniteMetricSpace& X) {
  double d = 0.0;
  for (const Arc* J : {&s.J1, &s.J2}) {
    d = std::max(d, X.distance(J->front(), A.front()));
    d = std::max(d, X.distance(J->back(), A.back()));
  }
  return d;
}

}  // namespace

PointSet component_ball(PointId x, double r, const NeighborGraph& G,
                        std::optional<PointId> exclude) {
  if (exclude && *exclude == x)
    throw std::invalid_argument("component_ball: cannot exclude the center");
  const auto& X = G.space();
  PointSet out;
  std::unordered_set<PointId> seen;
  std::queue<PointId> q;
  q.push(x);
  seen.insert(x);
  while (!q.empty()) {
    PointId v = q.front();
    q.pop();
    out.push_back(v);
    for (PointId u : G.neighbors(v)) {
      if (seen.count(u) || (exclude && *exclude == u)) continue;
      if (X.distance(x, u) > r) continue;
      seen.insert(u);
      q.push(u);
    }
  }
  return out;
}

SplitResult topological_split(const Arc& A, double eps, const NeighborGraph& G,
                              const SplitOptions& opts) {
  const auto& X = G.space();
  if (A.size() < 2) throw std::invalid_argument("topological_split: arc needs >= 2 vertices");
  if (!A.is_simple()) throw std::invalid_argument("topological_split: arc is not simple");
  double h = std::max(X.resolution(), G.scale() / 2.0);
  if (eps < 8.0 * h)
    throw std::invalid_argument("topological_split: eps below 8h net resolution");

  std::mt19937_64 rng(opts.seed);
  WalkState ws = unzip_walk(A, eps, G, rng);

  SplitResult s;
  s.slack = eps;
  s.J1 = make_arc(std::move(ws.j1), G.scale());
  s.J2 = make_arc(std::move(ws.j2), G.scale());

  if (opts.improve_separation) {
    SetNeighborhood nbA = set_neighborhood(A.verts, eps, G);
    auto j1 = s.J1.verts, j2 = s.J2.verts;
    double sep0 = set_distance(j1, j2, X);
    // push J1 clear of the parent first: starting both strands interleaved
    // along A leaves no room for the alternating rounds to open a gap
    reroute(s.J1.verts, A.verts, A, eps, G, nbA, opts);
    // alternating pull-apart rounds; each reroute only improves
    for (int round = 0; round < 2; ++round) {
      reroute(s.J2.verts, s.J1.verts, A, eps, G, nbA, opts);
      reroute(s.J1.verts, s.J2.verts, A, eps, G, nbA, opts);
    }
    // the initial push can leave the pair crossed when every later
    // reroute fails; keep whichever configuration is actually apart
    if (set_distance(s.J1.verts, s.J2.verts, X) <= sep0) {
      s.J1.verts = std::move(j1);
      s.J2.verts = std::move(j2);
    }
  }

  s.separation = set_distance(s.J1.verts, s.J2.verts, X);
  s.follows1 = check_follows(s.J1, A, X, eps);
  s.follows2 = check_follows(s.J2, A, X, eps);
  s.endpoint_displacement = endpoint_drift(s, A, X);
  return s;
}

bool verify_split(const SplitResult& s, const Arc& A, const NeighborGraph& G, double eps_follows,
                  std::string* why) {
  const auto& X = G.space();
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (s.J1.verts.empty() || s.J2.verts.empty()) return fail("empty strand");
  if (s.J1.size() > 1 && !s.J1.valid_in(G)) return fail("J1 is not a simple path in G");
  if (s.J2.size() > 1 && !s.J2.valid_in(G)) return fail("J2 is not a simple path in G");
  std::unordered_set<PointId> u1(s.J1.verts.begin(), s.J1.verts.end());
  for (PointId v : s.J2.verts)
    if (u1.count(v)) return fail("strands intersect");
  double sep = set_distance(s.J1.verts, s.J2.verts, X);
  if (sep <= 0.0) return fail("separation is not positive");
  if (std::abs(sep - s.separation) > 1e-9) return fail("recorded separation mismatch");
  if (!s.follows1.verify(s.J1, A, X, eps_follows)) return fail("J1 follows-certificate invalid");
  if (!s.follows2.verify(s.J2, A, X, eps_follows)) return fail("J2 follows-certificate invalid");
  return true;
}

// --- scale split ------------------------------------------------------------

namespace {

// Greedy jump marking: consecutive marks are the first indices at metric
// distance >= D1, alternating segment / connector stretches. Tails shorter
// than D1 are absorbed into the last segment.
std::vector<std::pair<int, int>> mark_segments(const Arc& A, double D1,
                                               const FiniteMetricSpace& X) {
  const int m = A.size();
  std::vector<std::pair<int, int>> segs;
  int i = 0;
  while (i < m - 1) {
    int j = i + 1;
    while (j < m && X.distance(A[i], A[j]) < D1) ++j;
    if (j >= m) {
      if (!segs.empty()) segs.back().second = m - 1;
      break;
    }
    segs.push_back({i, j});
    int k = j + 1;
    while (k < m && X.distance(A[j], A[k]) < D1) ++k;
    if (k >= m) {
      segs.back().second = m - 1;
      break;
    }
    i = k;
  }
  return segs;
}

struct JoinAttempt {
  std::vector<PointId> c1, c2;  // connector paths for chain 1 / chain 2
  bool swap = false;            // pieces of the next segment arrive crossed
  double score = 0.0;
};

}  // namespace

ScaleSplitResult scale_split(const Arc& A, double eps, const NeighborGraph& G,
                             const ScaleSplitConstants& constants, const ScaleSplitOptions& opts) {
  const auto& X = G.space();
  ScaleSplitResult res;
  double h = std::max(X.resolution(), G.scale() / 2.0);

  if (opts.schedule) {
    res.D1 = opts.schedule->D1;
    res.D2 = opts.schedule->D2;
    res.D3 = opts.schedule->D3;
  } else {
    res.D1 = constants.alpha * eps / (5.0 * constants.lambda);
    res.D2 = res.D1 / 4.0;
    res.D3 = res.D2 / (2.0 * constants.lambda * (constants.L * constants.lambda + 2.0));
  }

  if (A.size() < 2) throw std::invalid_argument("scale_split: arc needs >= 2 vertices");

  // degenerate single edge: the endpoints themselves are the split
  if (A.size() == 2) {
    res.split.J1 = make_arc({A.front()}, G.scale());
    res.split.J2 = make_arc({A.back()}, G.scale());
    res.split.slack = eps;
    res.split.separation = X.distance(A.front(), A.back());
    res.split.follows1 = check_follows(res.split.J1, A, X, eps);
    res.split.follows2 = check_follows(res.split.J2, A, X, eps);
    res.split.endpoint_displacement = 0.0;
    res.delta = res.split.separation / eps;
    return res;
  }

  // short arc: any two far-apart points of N(A, eps) do the job
  if (A.diameter(X) <= eps / 5.0) {
    res.short_arc = true;
    SetNeighborhood nb = set_neighborhood(A.verts, eps, G);
    PointId p = nb.pts.front(), q = p;
    for (int sweep = 0; sweep < 3; ++sweep) {
      PointId far = p;
      double best = -1.0;
      for (PointId v : nb.pts) {
        double d = X.distance(q, v);
        if (d > best) {
          best = d;
          far = v;
        }
      }
      p = q;
      q = far;
    }
    res.split.J1 = make_arc({p}, G.scale());
    res.split.J2 = make_arc({q}, G.scale());
    res.split.slack = eps;
    res.split.separation = X.distance(p, q);
    res.split.follows1 = check_follows(res.split.J1, A, X, eps);
    res.split.follows2 = check_follows(res.split.J2, A, X, eps);
    res.split.endpoint_displacement = endpoint_drift(res.split, A, X);
    res.delta = res.split.separation / eps;
    return res;
  }

  // marked-jump schedule only when its finest scale survives the resolution
  if (res.D3 / 2.0 >= 8.0 * h) {
    auto segs = mark_segments(A, res.D1, X);
    if (segs.size() >= 2) {
      res.used_schedule = true;
      res.segments = static_cast<int>(segs.size());

      // non-interaction audit: distinct segments, away from the D2-balls
      // at their facing marks, stay more than 2*D3 apart
      res.non_interaction_ok = true;
      for (std::size_t p = 0; p + 1 < segs.size() && res.non_interaction_ok; ++p) {
        for (std::size_t q = p + 1; q < segs.size() && res.non_interaction_ok; ++q) {
          PointId mp = A[segs[p].second], mq = A[segs[q].first];
          for (int ip = segs[p].first; ip <= segs[p].second && res.non_interaction_ok; ++ip) {
            if (q == p + 1 && X.distance(A[ip], mp) <= res.D2) continue;
            for (int iq = segs[q].first; iq <= segs[q].second; ++iq) {
              if (q == p + 1 && X.distance(A[iq], mq) <= res.D2) continue;
              if (X.distance(A[ip], A[iq]) <= 2.0 * res.D3) {
                res.non_interaction_ok = false;
                break;
              }
            }
          }
        }
      }

      // split every segment at the finest scale
      std::vector<SplitResult> pieces;
      bool ok = true;
      for (auto [s0, s1] : segs) {
        Arc sub = A.subarc(s0, s1);
        SplitOptions so;
        so.seed = opts.seed + 977u * pieces.size();
        so.improve_separation = opts.improve_separation;
        so.avoid = opts.avoid;
        try {
          pieces.push_back(topological_split(sub, res.D3, G, so));
        } catch (const std::runtime_error&) {
          ok = false;
          break;
        }
      }

      // wire consecutive pieces through the join regions
      std::vector<PointId> chain1, chain2;
      if (ok) {
        chain1 = pieces[0].J1.verts;
        chain2 = pieces[0].J2.verts;
        std::unordered_set<PointId> occupied;
        for (const auto& pc : pieces) {
          occupied.insert(pc.J1.verts.begin(), pc.J1.verts.end());
          occupied.insert(pc.J2.verts.begin(), pc.J2.verts.end());
        }
        for (std::size_t k = 0; ok && k + 1 < pieces.size(); ++k) {
          // join region: D2-balls at the facing marks plus a D3-tube
          // around the connector stretch of A
          std::vector<PointId> core;
          core.push_back(A[segs[k].second]);
          core.push_back(A[segs[k + 1].first]);
          SetNeighborhood tube = set_neighborhood(
              std::vector<PointId>(A.verts.begin() + segs[k].second,
                                   A.verts.begin() + segs[k + 1].first + 1),
              res.D3, G);
          std::unordered_set<PointId> region(tube.pts.begin(), tube.pts.end());
          for (PointId c : core)
            for (PointId v : G.ball_points(c, res.D2)) region.insert(v);

          PointId t1 = chain1.back(), t2 = chain2.back();
          const auto& nx = pieces[k + 1];
          std::optional<JoinAttempt> best;
          for (int swap = 0; swap < 2; ++swap) {
            PointId h1 = swap ? nx.J2.front() : nx.J1.front();
            PointId h2 = swap ? nx.J1.front() : nx.J2.front();
            for (int order = 0; order < 2; ++order) {
              std::unordered_set<PointId> used;
              auto admit = [&](PointId v) {
                return region.count(v) && !occupied.count(v) && !used.count(v);
              };
              PointId fa = order ? t2 : t1, fb = order ? h2 : h1;
              PointId sa = order ? t1 : t2, sb = order ? h1 : h2;
              auto p1 = restricted_path(fa, fb, G, admit);
              if (!p1) continue;
              used.insert(p1->verts.begin(), p1->verts.end());
              auto p2 = restricted_path(sa, sb, G, admit);
              if (!p2) continue;
              JoinAttempt ja;
              ja.swap = swap != 0;
              ja.c1 = order ? p2->verts : p1->verts;
              ja.c2 = order ? p1->verts : p2->verts;
              ja.score = set_distance(ja.c1, ja.c2, X);
              if (!best || ja.score > best->score) best = std::move(ja);
            }
          }
          if (!best) {
            ok = false;
            break;
          }
          auto extend = [&](std::vector<PointId>& chain, const std::vector<PointId>& conn,
                            const std::vector<PointId>& piece) {
            chain.insert(chain.end(), conn.begin() + 1, conn.end());
            chain.insert(chain.end(), piece.begin() + 1, piece.end());
            occupied.insert(conn.begin(), conn.end());
          };
          extend(chain1, best->c1, best->swap ? nx.J2.verts : nx.J1.verts);
          extend(chain2, best->c2, best->swap ? nx.J1.verts : nx.J2.verts);
        }
      }

      if (ok) {
        res.split.J1 = make_arc(std::move(chain1), G.scale());
        res.split.J2 = make_arc(std::move(chain2), G.scale());
        if (res.split.J1.is_simple() && res.split.J2.is_simple()) {
          res.split.slack = eps;
          res.split.separation = set_distance(res.split.J1.verts, res.split.J2.verts, X);
          res.split.follows1 = check_follows(res.split.J1, A, X, eps);
          res.split.follows2 = check_follows(res.split.J2, A, X, eps);
          res.split.endpoint_displacement = endpoint_drift(res.split, A, X);
          res.delta = res.split.separation / eps;
          return res;
        }
      }
      // a failed join falls through to the single-split path
      res.used_schedule = false;
      res.segments = 1;
    }
  }

  // single randomized unzip of the whole arc over a small ladder of slack
  // values (the pull-apart search is a local optimization and different
  // slacks reach different optima); best separation kept
  if (eps < 8.0 * h) throw std::invalid_argument("scale_split: eps below 8h net resolution");
  std::optional<SplitResult> best;
  bool best_clear = false;  // clearance from the avoid set beats raw separation
  std::exception_ptr last_err;
  auto clearance_ok = [&](const SplitResult& s) {
    for (const AvoidArc& av : opts.avoid)
      if (set_distance(s.J1.verts, av.arc->verts, X) < av.clearance ||
          set_distance(s.J2.verts, av.arc->verts, X) < av.clearance)
        return false;
    return true;
  };
  for (double div : {1.0, 2.0, 3.0, 4.0}) {
    double slack = std::clamp(eps / div, 8.0 * h, eps);
    for (int t = 0; t < std::max(1, opts.tries); ++t) {
      SplitOptions so;
      so.seed = opts.seed + 1000u * static_cast<unsigned>(t);
      so.improve_separation = opts.improve_separation;
      so.avoid = opts.avoid;
      try {
        SplitResult s = topological_split(A, slack, G, so);
        bool clear = clearance_ok(s);
        if (!best || (clear && !best_clear) ||
            (clear == best_clear && s.separation > best->separation)) {
          best = std::move(s);
          best_clear = clear;
        }
      } catch (const std::runtime_error&) {
        last_err = std::current_exception();
      }
    }
    if (eps / div <= 8.0 * h) break;  // the ladder has collapsed to the floor
  }
  if (!best) std::rethrow_exception(last_err);
  res.split = std::move(*best);
  res.split.follows1 = check_follows(res.split.J1, A, X, eps);
  res.split.follows2 = check_follows(res.split.J2, A, X, eps);
  res.split.slack = eps;
  res.delta = res.split.separation / eps;
  return res;
}

}  // namespace confdim
