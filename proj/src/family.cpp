#include "confdim/family.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <unordered_set>

#include "confdim/split.hpp"
#include "confdim/straighten.hpp"

namespace confdim {

double ultrametric(const std::string& a, const std::string& b, double sigma) {
  if (a.size() != b.size()) throw std::invalid_argument("ultrametric: word length mismatch");
  if (sigma <= 0.0) throw std::invalid_argument("ultrametric: sigma must be positive");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) {
      double n = static_cast<double>(i + 1);  // positions count from 1
      return std::exp(-(std::log(2.0) / sigma) * n);
    }
  return 0.0;  // infimum over the empty set: no finite difference index
}

double cantor_measure(const std::string& prefix) {
  for (char c : prefix)
    if (c != '0' && c != '1') throw std::invalid_argument("cantor_measure: non-binary prefix");
  return std::pow(2.0, -static_cast<double>(prefix.size()));
}

std::vector<std::string> CantorFamily::leaves() const {
  std::vector<std::string> out;
  for (const auto& [w, a] : arcs)
    if (static_cast<int>(w.size()) == depth) out.push_back(w);
  return out;
}

namespace {

// Minimum pairwise set distance with a bounding-box lower bound so only
// genuinely close pairs pay the exact quadratic scan.
struct Bbox {
  double lo[3], hi[3];
};

Bbox arc_bbox(const Arc& a, const FiniteMetricSpace& X) {
  Bbox b;
  for (int k = 0; k < X.dim(); ++k) {
    b.lo[k] = std::numeric_limits<double>::infinity();
    b.hi[k] = -std::numeric_limits<double>::infinity();
  }
  for (PointId v : a.verts)
    for (int k = 0; k < X.dim(); ++k) {
      b.lo[k] = std::min(b.lo[k], X.coord(v, k));
      b.hi[k] = std::max(b.hi[k], X.coord(v, k));
    }
  return b;
}

double bbox_gap(const Bbox& a, const Bbox& b, const FiniteMetricSpace& X) {
  double acc = 0.0;
  for (int k = 0; k < X.dim(); ++k) {
    double g = std::max({0.0, a.lo[k] - b.hi[k], b.lo[k] - a.hi[k]});
    if (X.metric() == MetricKind::Sup)
      acc = std::max(acc, g);
    else
      acc += g * g;
  }
  return X.metric() == MetricKind::Sup ? acc : std::sqrt(acc);
}

double min_pairwise_separation(const std::vector<const Arc*>& arcs, const FiniteMetricSpace& X) {
  if (arcs.size() < 2) return std::numeric_limits<double>::infinity();
  if (!X.has_coords()) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < arcs.size(); ++i)
      for (std::size_t j = i + 1; j < arcs.size(); ++j)
        best = std::min(best, set_distance(arcs[i]->verts, arcs[j]->verts, X));
    return best;
  }
  std::vector<Bbox> boxes;
  for (const Arc* a : arcs) boxes.push_back(arc_bbox(*a, X));
  struct Pair {
    double lb;
    std::size_t i, j;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < arcs.size(); ++i)
    for (std::size_t j = i + 1; j < arcs.size(); ++j)
      pairs.push_back({bbox_gap(boxes[i], boxes[j], X), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.lb < b.lb; });
  double best = std::numeric_limits<double>::infinity();
  for (const Pair& p : pairs) {
    if (p.lb >= best) break;
    best = std::min(best, set_distance(arcs[p.i]->verts, arcs[p.j]->verts, X));
  }
  return best;
}

bool arcs_disjoint(const Arc& a, const Arc& b) {
  std::unordered_set<PointId> s(a.verts.begin(), a.verts.end());
  for (PointId v : b.verts)
    if (s.count(v)) return false;
  return true;
}

// Re-measures every ledger quantity of a populated family from scratch.
void audit_family(CantorFamily& fam, const FiniteMetricSpace& X) {
  fam.separation.clear();
  fam.required.clear();
  fam.separation_ok = fam.follows_ok = fam.cauchy_ok = fam.fact_qa_ok = fam.diameter_ok = true;
  fam.cauchy_worst = 0.0;

  const Arc& seed = fam.arcs.at("");
  double seed_diam = seed.diameter(X);
  for (const auto& [w, a] : fam.arcs)
    if (a.size() >= 2 && a.diameter(X) < seed_diam / 2.0 - 1e-12) fam.diameter_ok = false;

  for (int n = 1; n <= fam.depth; ++n) {
    std::vector<const Arc*> level;
    for (const auto& [w, a] : fam.arcs)
      if (static_cast<int>(w.size()) == n) level.push_back(&a);
    double sep = min_pairwise_separation(level, X);
    double req = std::pow(fam.beta, n);
    fam.separation.push_back(sep);
    fam.required.push_back(req);
    if (sep < req * (1.0 - fam.separation_tol) - 1e-12) fam.separation_ok = false;
  }

  fam.lambda_prime = 1.0;
  for (const auto& [w, a] : fam.arcs) {
    if (w.empty()) continue;
    const Arc& parent = fam.arcs.at(w.substr(0, w.size() - 1));
    double bn = std::pow(fam.beta, static_cast<double>(w.size()) - 1.0);
    if (follows_slack(a, parent, X) > bn + 1e-12) fam.follows_ok = false;
    double dh = hausdorff_distance(a.verts, parent.verts, X);
    fam.cauchy_worst = std::max(fam.cauchy_worst, dh / bn);
    if (dh > fam.lambda * bn + 1e-12) fam.cauchy_ok = false;
    for (PointId v : parent.verts)
      if (point_set_distance(v, a.verts, X) > fam.lambda * bn + 1e-12) {
        fam.fact_qa_ok = false;
        break;
      }
    if (static_cast<int>(w.size()) == fam.depth && a.size() >= 2)
      fam.lambda_prime = std::max(fam.lambda_prime, quasiarc_constant(a, X).lambda);
  }
}

}  // namespace

CantorFamily build_family(const NeighborGraph& G, const Arc& seed_arc,
                          const FamilyConstants& constants, const BuildFamilyOptions& opts) {
  const auto& X = G.space();
  if (constants.delta_star <= 0.0)
    throw std::invalid_argument("build_family: measured delta* must be positive");
  if (constants.lambda <= 1.0) throw std::invalid_argument("build_family: lambda must be > 1");
  double h = std::max(X.resolution(), G.scale() / 2.0);
  double res8 = 8.0 * h;

  CantorFamily fam;
  fam.lambda = constants.lambda;
  fam.separation_tol = opts.separation_tol;

  // scaling ratio: the formula value, clamped to the theory's explicit caps
  double cap = std::min({1.0 / 32.0, 1.0 / (4.0 + 2.0 * constants.lambda), 1.0 / 10.0});
  fam.beta_formula =
      std::min(constants.alpha * constants.delta_star / (32.0 * constants.lambda), cap);
  double beta = fam.beta_formula;

  int depth = opts.depth;
  if (depth < 0) {
    depth = 0;
    for (double b = beta; b >= res8 && depth < 16; b *= beta) ++depth;
  }
  if (depth > 0 && std::pow(beta, depth) < res8) {
    // the formula scales sink below the net; lift beta just enough that the
    // deepest level stays resolvable, or give up
    if (!opts.allow_beta_override) throw ResolutionExhaustedError();
    double lifted = std::pow(res8, 1.0 / depth) * 1.06;
    if (lifted >= 0.75) throw ResolutionExhaustedError();
    beta = std::max(beta, lifted);
    fam.beta_overridden = beta > fam.beta_formula;
  }
  fam.beta = beta;
  fam.depth = depth;
  fam.sigma = depth > 0 ? -std::log(2.0) / std::log(beta) : 0.0;

  // seed straightening at the coarse scale
  double lam_t = std::max(constants.lambda, 1.5);
  double eps0 = std::max(0.1, 4.0 * h);
  fam.arcs[""] = straighten(seed_arc, eps0, lam_t, G).arc;

  std::vector<std::string> level = {""};
  for (int n = 0; n < depth; ++n) {
    double bn = std::pow(beta, n);
    double eps_split = std::max(bn / 8.0, res8);
    double eps_str = std::max(constants.delta_star / 32.0 * bn, 4.0 * h);
    double need = std::pow(beta, n + 1) * (1.0 - opts.separation_tol);

    // The split slack is free in [max(beta^n/8, 8h), beta^n]: the follows
    // certificate only demands slack <= beta^n, and the formula scale (or
    // the 8h floor it clamps to) can be a bad resonance with the grid. Probe
    // a geometric ladder across the whole admissible window and keep the
    // best split; wider slacks buy Hausdorff spread between the strands,
    // which the embedding lower bound needs.
    double slack_cap = std::min(bn, X.diameter() / 4.0);
    std::vector<double> slacks = {eps_split};
    for (double es = eps_split * 1.25; es < slack_cap; es *= 1.25) slacks.push_back(es);
    if (slack_cap > slacks.back() * 1.02) slacks.push_back(slack_cap);

    // Hausdorff target between the two children: the embedding lower bound
    // needs beta^(n+1)/2 between the eventual leaves, and descendants drift
    // off their parent by up to the next level's base slack on each side.
    double dh_need = 0.5 * std::pow(beta, n + 1);
    double dh_margin =
        dh_need +
        (n + 1 < depth ? 2.0 * std::max(std::pow(beta, n + 1) / 8.0, res8) : 0.0);

    // children must keep enough diameter for the half-seed-diameter
    // certificate, with headroom for the loss deeper splits will incur
    double diam_need = fam.arcs.at("").diameter(X) / 2.0;
    for (int k = n + 1; k < depth; ++k)
      diam_need += 2.0 * std::max(std::pow(beta, k) / 8.0, res8);

    // rank a candidate pair: clearance first, the diameter floor, then the
    // Hausdorff-gap targets (embedding lower bound), separation last
    using Rank = std::tuple<bool, bool, bool, bool, double>;
    auto rank = [&](const Arc& c0, const Arc& c1, const std::vector<AvoidArc>& av) -> Rank {
      bool clear = arcs_disjoint(c0, c1);
      for (const AvoidArc& a : av)
        clear = clear && set_distance(c0.verts, a.arc->verts, X) >= a.clearance - 1e-12 &&
                set_distance(c1.verts, a.arc->verts, X) >= a.clearance - 1e-12;
      bool diam_ok = c0.diameter(X) >= diam_need && c1.diameter(X) >= diam_need;
      double dh = hausdorff_distance(c0.verts, c1.verts, X);
      return {clear, diam_ok, dh >= dh_margin, dh >= dh_need,
              set_distance(c0.verts, c1.verts, X)};
    };

    // polish a child at the fine scale, but never at the cost of
    // disjointness, the sibling gap, or the clearances
    auto tidy = [&](Arc& c, const Arc& other, const std::vector<AvoidArc>& av) {
      if (c.size() < 2) return;
      try {
        Arc s = straighten(c, eps_str, lam_t, G).arc;
        bool clear = arcs_disjoint(s, other) &&
                     hausdorff_distance(s.verts, other.verts, X) >=
                         hausdorff_distance(c.verts, other.verts, X) - 1e-12;
        for (const AvoidArc& a : av)
          clear = clear && set_distance(s.verts, a.arc->verts, X) >= a.clearance - 1e-12;
        if (clear) c = std::move(s);
      } catch (const std::runtime_error&) {
        // keep the unpolished child; the audit reports the consequences
      }
    };

    // best split over the slack ladder under an es-dependent avoid set
    auto search = [&](const Arc& J, std::uint64_t sd,
                      const std::function<std::vector<AvoidArc>(double)>& avoid_at)
        -> std::pair<ScaleSplitResult, Rank> {
      std::optional<ScaleSplitResult> best;
      Rank best_rank{};
      std::exception_ptr err;
      for (double es : slacks) {
        ScaleSplitOptions sso;
        sso.seed = sd;
        sso.tries = opts.tries;
        sso.avoid = avoid_at(es);
        try {
          ScaleSplitResult r =
              scale_split(J, es, G, {constants.lambda, constants.L, constants.alpha}, sso);
          Rank rk = rank(r.split.J1, r.split.J2, sso.avoid);
          if (!best || rk > best_rank) {
            best = std::move(r);
            best_rank = rk;
          }
        } catch (const std::runtime_error&) {
          err = std::current_exception();
        }
      }
      if (!best) std::rethrow_exception(err);
      return {std::move(*best), best_rank};
    };

    std::vector<std::string> next;
    std::vector<const Arc*> built;  // already-placed arcs of the new level
    for (std::size_t wi = 0; wi < level.size(); ++wi) {
      const std::string& w = level[wi];
      const Arc& J = fam.arcs.at(w);
      if (J.size() < 2) throw ResolutionExhaustedError();

      // the split must clear the placed cousins by the required separation,
      // and stay out of the corridors of the parents still waiting to be
      // split (their children will wander up to the slack off the parent)
      auto avoid_at = [&](double es) {
        std::vector<AvoidArc> av;
        for (const Arc* c : built) av.push_back({c, need});
        for (std::size_t vi = wi + 1; vi < level.size(); ++vi)
          av.push_back({&fam.arcs.at(level[vi]), need + es});
        return av;
      };
      auto [sr, rk] = search(J, opts.seed * 131u + std::hash<std::string>{}(w) % 100000u,
                             avoid_at);

      Arc c0 = std::move(sr.split.J1), c1 = std::move(sr.split.J2);
      std::vector<AvoidArc> av = avoid_at(sr.split.slack);
      tidy(c0, c1, av);
      tidy(c1, c0, av);

      fam.arcs[w + "0"] = std::move(c0);
      fam.arcs[w + "1"] = std::move(c1);
      built.push_back(&fam.arcs.at(w + "0"));
      built.push_back(&fam.arcs.at(w + "1"));
      next.push_back(w + "0");
      next.push_back(w + "1");
    }

    // second chance: parents early in the order had to respect reserved
    // corridors for their unsplit peers, which is conservative. Re-split any
    // parent whose children missed a target, now against the arcs actually
    // placed, and keep the outcome only when it strictly improves.
    for (const std::string& w : level) {
      std::vector<AvoidArc> cousins;
      for (const std::string& v : level)
        if (v != w) {
          cousins.push_back({&fam.arcs.at(v + "0"), need});
          cousins.push_back({&fam.arcs.at(v + "1"), need});
        }
      Rank cur = rank(fam.arcs.at(w + "0"), fam.arcs.at(w + "1"), cousins);
      if (std::get<0>(cur) && std::get<1>(cur) && std::get<2>(cur) && std::get<3>(cur)) continue;
      try {
        auto [sr, rk] = search(fam.arcs.at(w),
                               opts.seed * 131u + std::hash<std::string>{}(w) % 100000u + 7u,
                               [&](double) { return cousins; });
        Arc c0 = std::move(sr.split.J1), c1 = std::move(sr.split.J2);
        tidy(c0, c1, cousins);
        tidy(c1, c0, cousins);
        if (rank(c0, c1, cousins) > cur) {
          fam.arcs.at(w + "0") = std::move(c0);
          fam.arcs.at(w + "1") = std::move(c1);
        }
      } catch (const std::runtime_error&) {
        // the first-pass children stand
      }
    }
    level = std::move(next);
  }

  audit_family(fam, X);
  return fam;
}

EmbeddingReport embedding_check(const CantorFamily& fam, const FiniteMetricSpace& X) {
  if (fam.depth < 1) throw std::invalid_argument("embedding_check: depth must be >= 1");
  EmbeddingReport rep;
  double lp = std::max(fam.lambda_prime, 1.0);
  rep.upper_constant = 2.0 * lp / (fam.beta * fam.beta);
  auto leaves = fam.leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves.size(); ++j) {
      const Arc& A = fam.arcs.at(leaves[i]);
      const Arc& B = fam.arcs.at(leaves[j]);
      double ds = ultrametric(leaves[i], leaves[j], fam.sigma);
      double dh = hausdorff_distance(A.verts, B.verts, X);
      double sd = set_distance(A.verts, B.verts, X);
      ++rep.pairs;
      bool bad = false;
      if (dh < 0.5 * ds - 1e-12) {
        ++rep.lower_violations;
        bad = true;
      }
      if (dh > rep.upper_constant * ds + 1e-12) {
        ++rep.upper_violations;
        bad = true;
      }
      // d_H dominates the minimum distance; the reverse comparison holds
      // within 4*lambda'/beta by the two displayed inequalities
      if (sd > dh + 1e-12 || dh > (4.0 * lp / fam.beta) * sd + 1e-12) {
        ++rep.comparability_violations;
        bad = true;
      }
      if (bad) rep.violating.emplace_back(leaves[i], leaves[j]);
    }
  }
  return rep;
}

HitMeasureResult hit_measure(const CantorFamily& fam, const Ball& ball,
                             const FiniteMetricSpace& X) {
  HitMeasureResult res;
  auto leaves = fam.leaves();
  if (leaves.empty()) return res;
  for (const auto& w : leaves) {
    if (point_set_distance(ball.center, fam.arcs.at(w).verts, X) <= ball.r) ++res.leaves_hit;
  }
  res.mu = static_cast<double>(res.leaves_hit) * std::pow(2.0, -fam.depth);
  double slack = 2.0 * std::max(fam.lambda, 1.0) * std::pow(fam.beta, fam.depth);
  res.bound_raw = std::pow(4.0, fam.sigma) * std::pow(ball.r, fam.sigma);
  res.bound = std::pow(4.0, fam.sigma) * std::pow(ball.r + slack, fam.sigma);
  res.within = res.mu <= res.bound + 1e-12;
  return res;
}

double hit_measure_exponent(const CantorFamily& fam, const FiniteMetricSpace& X, int samples,
                            std::uint64_t seed) {
  if (fam.depth < 1) throw std::invalid_argument("hit_measure_exponent: depth must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PointId> pick(0, X.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double rmin = 4.0 * std::pow(fam.beta, fam.depth);
  double rmax = std::max(X.diameter() / 8.0, rmin * 8.0);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long n = 0;
  for (int i = 0; i < samples; ++i) {
    Ball b{pick(rng), rmin * std::pow(rmax / rmin, unit(rng))};
    HitMeasureResult res = hit_measure(fam, b, X);
    if (res.leaves_hit == 0) continue;
    double x = std::log(b.r), y = std::log(res.mu);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 8) throw std::runtime_error("hit_measure_exponent: too few usable balls");
  double denom = static_cast<double>(n) * sxx - sx * sx;
  return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

CantorFamily make_product_family(const NeighborGraph& G, int level) {
  const auto& X = G.space();
  if (!X.has_coords() || X.dim() != 2)
    throw std::invalid_argument("make_product_family: needs a 2d coordinate space");
  double p3 = std::pow(3.0, level);

  // bucket the points into columns keyed by the binary cylinder word
  std::map<std::string, std::vector<PointId>> cols;
  for (PointId p = 0; p < X.size(); ++p) {
    long c = std::lround(X.coord(p, 0) * p3 - 0.5);
    std::string w(static_cast<std::size_t>(level), '0');
    long rem = c;
    for (int k = level - 1; k >= 0; --k) {
      long digit = rem % 3;
      rem /= 3;
      if (digit == 1) throw std::invalid_argument("make_product_family: not a cantor_product net");
      w[static_cast<std::size_t>(k)] = digit == 2 ? '1' : '0';
    }
    cols[w].push_back(p);
  }

  CantorFamily fam;
  fam.depth = level;
  fam.beta = 1.0 / 3.0;
  fam.beta_formula = 1.0 / 3.0;  // structural, not derived from a split run
  fam.sigma = std::log(2.0) / std::log(3.0);
  fam.lambda = 1.0;
  fam.separation_tol = 0.5;
  for (auto& [w, pts] : cols) {
    std::sort(pts.begin(), pts.end(),
              [&](PointId a, PointId b) { return X.coord(a, 1) < X.coord(b, 1); });
    Arc a;
    a.scale = G.scale();
    a.verts = pts;
    fam.arcs[w] = std::move(a);
  }
  // interior words: represented by the leftmost column of their cylinder
  for (int len = level - 1; len >= 0; --len) {
    std::vector<std::string> words;
    for (const auto& [w, a] : fam.arcs)
      if (static_cast<int>(w.size()) == len + 1 && w.back() == '0')
        words.push_back(w.substr(0, static_cast<std::size_t>(len)));
    for (const auto& w : words) fam.arcs[w] = fam.arcs.at(w + "0");
  }
  audit_family(fam, X);
  return fam;
}

}  // namespace confdim
