#include "confdim/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

namespace confdim {

namespace {

long count_boxes_grid(const FiniteMetricSpace& X, double s) {
  // half-open grid cover of the bounding box, anchored at the data minimum;
  // the top edge is clamped into the last box so a closed supremum does not
  // spawn a spurious extra box
  int dim = X.dim();
  std::vector<double> lo(dim, 1e300), hi(dim, -1e300);
  for (PointId p = 0; p < X.size(); ++p)
    for (int k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], X.coord(p, k));
      hi[k] = std::max(hi[k], X.coord(p, k));
    }
  std::unordered_set<long long> occ;
  for (PointId p = 0; p < X.size(); ++p) {
    long long key = 0;
    for (int k = 0; k < dim; ++k) {
      long long top = std::max<long long>(
          0, static_cast<long long>(std::ceil((hi[k] - lo[k]) / s)) - 1);
      long long ix = static_cast<long long>(std::floor((X.coord(p, k) - lo[k]) / s));
      ix = std::clamp(ix, 0LL, top);
      key = key * (1LL << 21) + ix;
    }
    occ.insert(key);
  }
  return static_cast<long>(occ.size());
}

long count_net_greedy(const FiniteMetricSpace& X, double s) {
  // greedy s-net: first-fit maximal s-separated subset
  std::vector<PointId> net;
  for (PointId p = 0; p < X.size(); ++p) {
    bool covered = false;
    for (PointId q : net)
      if (X.distance(p, q) <= s) {
        covered = true;
        break;
      }
    if (!covered) net.push_back(p);
  }
  return static_cast<long>(net.size());
}

}  // namespace

std::vector<double> default_scales(const FiniteMetricSpace& X) {
  // triadic ladder s = 3^p in the trimmed range [8h, diam/4]; powers of 1/3
  // track the natural scales of the self-similar test spaces, avoiding the
  // log-periodic wobble a mismatched ladder induces in the regression. When
  // the range is too narrow, extend down toward the 4h hard floor.
  double h = X.resolution();
  double lo = std::max(8.0 * h, 1e-12);
  double top = X.diameter() / 4.0;
  int p = static_cast<int>(std::floor(std::log(top) / std::log(3.0)));
  std::vector<double> scales;
  for (double s = std::pow(3.0, p); s >= lo; s /= 3.0) scales.push_back(s);
  double hard = std::max(4.0 * h, 1e-12);
  while (scales.size() < 4) {
    double s = scales.empty() ? std::pow(3.0, p) : scales.back() / 3.0;
    if (s < hard) break;
    scales.push_back(s);
  }
  if (scales.size() < 4) {
    // shallow space: halve the ladder ratio to sqrt(3) to regain rungs
    scales.clear();
    for (double s = std::pow(3.0, p); s >= hard; s /= std::sqrt(3.0)) scales.push_back(s);
  }
  return scales;
}

DimensionEstimate box_counting_dimension(const FiniteMetricSpace& X,
                                         const std::vector<double>& scales) {
  double h = X.resolution();
  double diam = X.diameter();
  DimensionEstimate est;
  for (double s : scales)
    if (s >= 4.0 * h - 1e-15 && s <= diam / 2.0 + 1e-15) est.scales.push_back(s);
  std::sort(est.scales.rbegin(), est.scales.rend());
  if (est.scales.size() < 4)
    throw std::invalid_argument("box_counting_dimension: fewer than 4 usable scales");

  for (double s : est.scales)
    est.counts.push_back(X.has_coords() ? count_boxes_grid(X, s) : count_net_greedy(X, s));

  // least squares of log N against log(1/s)
  const std::size_t n = est.scales.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::log(1.0 / est.scales[i]);
    double y = std::log(static_cast<double>(est.counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  est.tau = (n * sxy - sx * sy) / denom;
  double intercept = (sy - est.tau * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = std::log(1.0 / est.scales[i]);
    double y = std::log(static_cast<double>(est.counts[i]));
    double r = y - (est.tau * x + intercept);
    ss += r * r;
  }
  est.residual = std::sqrt(ss / n);
  est.tau = std::max(est.tau, 0.0);
  return est;
}

double pansu_bound(double sigma, double tau) {
  if (sigma < 0.0) throw std::invalid_argument("pansu_bound: sigma must be >= 0");
  if (tau <= sigma) throw std::invalid_argument("pansu_bound: inconsistent estimates (tau <= sigma)");
  return 1.0 + sigma / (tau - sigma);
}

BoundResult bound_from_family(const CantorFamily& fam, const FiniteMetricSpace& X,
                              const BoundOptions& opts) {
  BoundResult res;
  res.sigma = fam.sigma;
  res.A = std::pow(4.0, fam.sigma);

  if (!fam.certified()) {
    res.reason = "uncertified: family certificate audit failed";
    return res;
  }

  // hit-measure audit on random balls before trusting sigma
  if (fam.depth > 0) {
    std::mt19937_64 rng(opts.seed);
    std::uniform_int_distribution<PointId> pick(0, X.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double rmin = std::pow(fam.beta, fam.depth);
    double rmax = X.diameter() / 2.0;
    for (int i = 0; i < opts.hit_samples; ++i) {
      Ball b{pick(rng), rmin * std::pow(rmax / rmin, unit(rng))};
      ++res.hit_checks;
      if (!hit_measure(fam, b, X).within) ++res.hit_violations;
    }
    if (res.hit_violations > 0) {
      res.reason = "uncertified: hit-measure bound violated";
      return res;
    }
  }

  res.tau_estimate = box_counting_dimension(X, default_scales(X));
  res.tau = res.tau_estimate.tau;
  if (res.tau <= res.sigma) {
    res.reason = "uncertified: inconsistent estimates (tau <= sigma)";
    return res;
  }
  res.bound = pansu_bound(res.sigma, res.tau);
  res.certified = true;
  return res;
}

}  // namespace confdim
