#include "confdim/arc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace confdim {

bool Arc::is_simple() const {
  std::unordered_set<PointId> seen(verts.begin(), verts.end());
  return seen.size() == verts.size();
}

bool Arc::valid_in(const NeighborGraph& G) const {
  if (verts.empty() || !is_simple()) return false;
  const auto& X = G.space();
  // same relative tolerance the graph itself uses when admitting edges
  double eff = G.scale() * (1.0 + 1e-9);
  for (size_t i = 0; i + 1 < verts.size(); ++i)
    if (X.distance(verts[i], verts[i + 1]) > eff) return false;
  return true;
}

double Arc::length(const FiniteMetricSpace& X) const {
  double s = 0.0;
  for (size_t i = 0; i + 1 < verts.size(); ++i) s += X.distance(verts[i], verts[i + 1]);
  return s;
}

double Arc::diameter(const FiniteMetricSpace& X) const {
  if (verts.empty()) return 0.0;
  return subarc_diameter(*this, 0, size() - 1, X);
}

Arc Arc::reversed() const {
  Arc r = *this;
  std::reverse(r.verts.begin(), r.verts.end());
  return r;
}

Arc Arc::subarc(int i, int j) const {
  if (i < 0 || j >= size() || i > j) throw std::out_of_range("subarc indices");
  Arc s;
  s.scale = scale;
  s.verts.assign(verts.begin() + i, verts.begin() + j + 1);
  return s;
}

// --- DiameterSweep ----------------------------------------------------------

namespace {
inline double cross(double ox, double oy, double ax, double ay, double bx, double by) {
  return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
}
}  // namespace

DiameterSweep::DiameterSweep(const FiniteMetricSpace& X) : X_(X) {
  if (X.metric() == MetricKind::Sup || (X.has_coords() && X.dim() == 1))
    mode_ = Mode::Box;
  else if (X.metric() == MetricKind::Euclidean && X.dim() == 2)
    mode_ = Mode::Hull2D;
  else
    mode_ = Mode::Generic;
}

void DiameterSweep::reset(PointId start) {
  diam_ = 0.0;
  hull_.clear();
  all_.clear();
  for (int k = 0; k < 3; ++k) lo_[k] = hi_[k] = 0.0;
  if (mode_ == Mode::Box) {
    for (int k = 0; k < X_.dim(); ++k) lo_[k] = hi_[k] = X_.coord(start, k);
  } else if (mode_ == Mode::Hull2D) {
    hull_.push_back(start);
  } else {
    all_.push_back(start);
  }
}

double DiameterSweep::add(PointId p) {
  switch (mode_) {
    case Mode::Box: {
      double m = 0.0;
      for (int k = 0; k < X_.dim(); ++k) {
        lo_[k] = std::min(lo_[k], X_.coord(p, k));
        hi_[k] = std::max(hi_[k], X_.coord(p, k));
        if (X_.metric() == MetricKind::Sup || X_.dim() == 1)
          m = std::max(m, hi_[k] - lo_[k]);
      }
      diam_ = m;
      return diam_;
    }
    case Mode::Hull2D: {
      double px = X_.coord(p, 0), py = X_.coord(p, 1);
      for (PointId q : hull_) diam_ = std::max(diam_, X_.distance(p, q));
      // skip points already inside the hull: they can never be extreme
      if (hull_.size() >= 3) {
        bool inside = true;
        for (size_t i = 0; i < hull_.size(); ++i) {
          size_t j = (i + 1) % hull_.size();
          if (cross(X_.coord(hull_[i], 0), X_.coord(hull_[i], 1), X_.coord(hull_[j], 0),
                    X_.coord(hull_[j], 1), px, py) < 0) {
            inside = false;
            break;
          }
        }
        if (inside) return diam_;
      }
      // rebuild the hull from the old extreme set plus p (monotone chain)
      std::vector<PointId> pts = hull_;
      pts.push_back(p);
      std::sort(pts.begin(), pts.end(), [&](PointId a, PointId b) {
        double ax = X_.coord(a, 0), bx = X_.coord(b, 0);
        if (ax != bx) return ax < bx;
        return X_.coord(a, 1) < X_.coord(b, 1);
      });
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      if (pts.size() <= 2) {
        hull_ = pts;
        return diam_;
      }
      std::vector<PointId> h;
      auto build = [&](auto begin, auto end) {
        size_t base = h.size();
        for (auto it = begin; it != end; ++it) {
          while (h.size() >= base + 2 &&
                 cross(X_.coord(h[h.size() - 2], 0), X_.coord(h[h.size() - 2], 1),
                       X_.coord(h[h.size() - 1], 0), X_.coord(h[h.size() - 1], 1),
                       X_.coord(*it, 0), X_.coord(*it, 1)) <= 0)
            h.pop_back();
          h.push_back(*it);
        }
        h.pop_back();
      };
      build(pts.begin(), pts.end());
      build(pts.rbegin(), pts.rend());
      hull_ = h;
      return diam_;
    }
    case Mode::Generic: {
      for (PointId q : all_) diam_ = std::max(diam_, X_.distance(p, q));
      all_.push_back(p);
      return diam_;
    }
  }
  return diam_;
}

// --- subarc diameter / quasi-arc constant -----------------------------------

double subarc_diameter(const Arc& A, int i, int j, const FiniteMetricSpace& X) {
  if (i < 0 || j >= A.size() || i > j) throw std::out_of_range("subarc_diameter indices");
  DiameterSweep sweep(X);
  sweep.reset(A[i]);
  for (int k = i + 1; k <= j; ++k) sweep.add(A[k]);
  return sweep.current();
}

QuasiArcReport quasiarc_constant(const Arc& A, const FiniteMetricSpace& X, double eps) {
  if (A.size() < 2) throw std::invalid_argument("quasiarc_constant: degenerate arc");
  QuasiArcReport rep;
  rep.lambda = 0.0;
  DiameterSweep sweep(X);
  for (int i = 0; i + 1 < A.size(); ++i) {
    sweep.reset(A[i]);
    for (int j = i + 1; j < A.size(); ++j) {
      double diam = sweep.add(A[j]);
      double d = X.distance(A[i], A[j]);
      if (d <= 0.0 || d > eps) continue;
      double ratio = diam / d;
      if (ratio > rep.lambda) {
        rep.lambda = ratio;
        rep.worst_i = i;
        rep.worst_j = j;
        rep.worst_d = d;
      }
    }
  }
  rep.lambda = std::max(rep.lambda, 1.0);
  return rep;
}

// --- follows ----------------------------------------------------------------

namespace {

// min over monotone assignments of max displacement, with backtracking
struct FollowsDP {
  double value;
  std::vector<int> assignment;  // per B vertex
};

FollowsDP follows_dp(const Arc& B, const Arc& A, const FiniteMetricSpace& X) {
  // one-sided: p maps follower indices monotonically into A and need not
  // cover A, so a follower that shortcuts a detour of A still scores well
  int nb = B.size(), na = A.size();
  std::vector<double> prev(static_cast<size_t>(na)), cur(static_cast<size_t>(na));
  std::vector<int> from(static_cast<size_t>(nb) * na);  // predecessor column
  for (int j = 0; j < na; ++j) {
    prev[static_cast<size_t>(j)] = X.distance(B[0], A[j]);
    from[static_cast<size_t>(j)] = -1;
  }
  for (int i = 1; i < nb; ++i) {
    double run = prev[0];  // min of prev[0..j]
    int arg = 0;
    for (int j = 0; j < na; ++j) {
      if (prev[static_cast<size_t>(j)] < run) {
        run = prev[static_cast<size_t>(j)];
        arg = j;
      }
      cur[static_cast<size_t>(j)] = std::max(run, X.distance(B[i], A[j]));
      from[static_cast<size_t>(i) * na + j] = arg;
    }
    std::swap(prev, cur);
  }
  FollowsDP out;
  int j = 0;
  for (int k = 1; k < na; ++k)
    if (prev[static_cast<size_t>(k)] < prev[static_cast<size_t>(j)]) j = k;
  out.value = prev[static_cast<size_t>(j)];
  out.assignment.assign(static_cast<size_t>(nb), 0);
  for (int i = nb - 1; i >= 0; --i) {
    out.assignment[static_cast<size_t>(i)] = j;
    j = i > 0 ? from[static_cast<size_t>(i) * na + j] : j;
  }
  return out;
}

}  // namespace

double follows_slack(const Arc& B, const Arc& A, const FiniteMetricSpace& X) {
  return follows_dp(B, A, X).value;
}

FollowsCertificate check_follows(const Arc& B, const Arc& A, const FiniteMetricSpace& X,
                                 double eps) {
  if (B.size() == 0 || A.size() == 0) throw std::invalid_argument("check_follows: empty arc");
  auto dp = follows_dp(B, A, X);
  FollowsCertificate cert;
  cert.p = std::move(dp.assignment);
  cert.slack = dp.value;
  cert.ok = dp.value <= eps;
  if (!cert.ok) {
    // the follower vertex with the largest unavoidable displacement
    double worst = -1.0;
    for (int i = 0; i < B.size(); ++i) {
      double d = X.distance(B[i], A[cert.p[static_cast<size_t>(i)]]);
      if (d > worst) {
        worst = d;
        cert.violating_index = i;
      }
    }
  }
  return cert;
}

bool FollowsCertificate::verify(const Arc& B, const Arc& A, const FiniteMetricSpace& X,
                                double eps) const {
  if (static_cast<int>(p.size()) != B.size()) return false;
  int last = 0;
  for (int i = 0; i < B.size(); ++i) {
    int j = p[static_cast<size_t>(i)];
    if (j < 0 || j >= A.size() || j < last) return false;  // monotone into A
    last = j;
    if (X.distance(B[i], A[j]) > eps) return false;
  }
  return true;
}

}  // namespace confdim
