#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "confdim/connectivity.hpp"
#include "confdim/dimension.hpp"
#include "confdim/family.hpp"
#include "confdim/split.hpp"
#include "confdim/straighten.hpp"
#include "common.hpp"

using namespace confdim;
using namespace confdim::tests;

namespace {

const double kSigma3 = std::log(2.0) / std::log(3.0);

std::string word_of(int bits, int len) {
  std::string w(len, '0');
  for (int k = 0; k < len; ++k)
    if (bits & (1 << (len - 1 - k))) w[k] = '1';
  return w;
}

// One carpet(4) depth-2 family shared by the heavier cases: built the same
// way the pipeline builds it (measured L, seed quasi-arc between the
// farthest pair, delta* measured by a diam/4 scale split).
struct CarpetFixture {
  FiniteMetricSpace X;
  NeighborGraph G;
  CantorFamily fam;
  Arc seed_arc;
  CarpetFixture() : X(make_space(SpaceKind::Carpet, 4)), G(graph_at_2h(X)) {
    ConnectivityOptions co;
    co.sample_budget = 64;
    ConnectivityReport cr = annular_constant(G, co);
    double L = std::max(1.0, cr.L_linear);
    auto [a, b] = farthest_pair(X);
    StraightenResult sr = find_quasiarc(a, b, 3.0, G);
    seed_arc = sr.arc;
    ScaleSplitResult split =
        scale_split(seed_arc, X.diameter() / 4.0, G, {3.0, L, sr.alpha});
    FamilyConstants fc;
    fc.lambda = 3.0;
    fc.L = L;
    fc.alpha = sr.alpha;
    fc.delta_star = split.delta;
    BuildFamilyOptions bo;
    bo.depth = 2;
    fam = build_family(G, seed_arc, fc, bo);
  }
};

const CarpetFixture& carpet_fixture() {
  static CarpetFixture fx;
  return fx;
}

}  // namespace

TEST_CASE("ultrametric: formula values and error cases") {
  CHECK(ultrametric("0101", "0101", 1.0) == 0.0);
  CHECK(ultrametric("0", "1", 1.0) == doctest::Approx(0.5));
  // first difference at the third letter, sigma = log2/log3: exp(-3 log 3)
  CHECK(ultrametric("000", "001", kSigma3) == doctest::Approx(1.0 / 27.0).epsilon(1e-12));
  CHECK_THROWS((void)ultrametric("01", "011", 1.0));
}

TEST_CASE("ultrametric inequality holds exhaustively at depth 8") {
  const int n = 256;
  std::vector<double> d(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      d[static_cast<std::size_t>(a) * n + b] =
          ultrametric(word_of(a, 8), word_of(b, 8), kSigma3);
  long violations = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (d[static_cast<std::size_t>(a) * n + c] >
            std::max(d[static_cast<std::size_t>(a) * n + b],
                     d[static_cast<std::size_t>(b) * n + c]) + 1e-15)
          ++violations;
  CHECK(violations == 0);
}

TEST_CASE("cantor_measure: cylinder weights halve with each letter") {
  CHECK(cantor_measure("") == 1.0);
  CHECK(cantor_measure("0") == 0.5);
  CHECK(cantor_measure("1") == 0.5);
  CHECK(cantor_measure("0110") == doctest::Approx(1.0 / 16.0));
}

TEST_CASE("nu_sigma ball bounds hold on 500 sampled balls at depth 8") {
  const int n = 256, depth = 8;
  double sigma = kSigma3;
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> pick(0, n - 1);
  // the two-sided regularity estimate is stated for the unit-diameter
  // normalization of d_sigma (first-letter difference at distance 1), so
  // ball membership rescales the formula metric by 2^(-1/sigma)
  double rmin = std::pow(2.0, -static_cast<double>(depth) / sigma);
  double norm = std::pow(2.0, -1.0 / sigma);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0;
  for (int s = 0; s < 500; ++s) {
    std::string z = word_of(pick(rng), depth);
    double r = rmin * std::pow(1.0 / rmin, unit(rng));
    int inside = 0;
    for (int a = 0; a < n; ++a)
      if (ultrametric(z, word_of(a, depth), sigma) <= r * norm) ++inside;
    double nu = static_cast<double>(inside) / n;
    double rs = std::pow(r, sigma);
    if (nu < 0.5 * rs - 1e-12 || nu > rs + 1e-12) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("build_family depth 0 is the straightened seed alone") {
  FiniteMetricSpace X = make_space(SpaceKind::Carpet, 3);
  NeighborGraph G = graph_at_2h(X);
  auto [a, b] = farthest_pair(X);
  Arc seed = find_quasiarc(a, b, 3.0, G).arc;
  BuildFamilyOptions bo;
  bo.depth = 0;
  CantorFamily fam = build_family(G, seed, {3.0, 4.0, 1.0, 0.1}, bo);
  CHECK(fam.depth == 0);
  CHECK(fam.arcs.size() == 1);
  CHECK(fam.arcs.count("") == 1);
  CHECK(fam.sigma == 0.0);
  CHECK(fam.certified());
}

TEST_CASE("carpet depth-2 family: certificates re-verify from scratch") {
  const CarpetFixture& fx = carpet_fixture();
  const CantorFamily& fam = fx.fam;
  const FiniteMetricSpace& X = fx.X;

  REQUIRE(fam.depth == 2);
  CHECK(fam.leaves().size() == 4);
  CHECK(fam.certified());

  // beta bookkeeping: the formula value obeys the theory caps, and sigma
  // matches the ratio actually used
  CHECK(fam.beta_formula <= 1.0 / 32.0 + 1e-15);
  CHECK(fam.beta_formula < std::min(1.0 / (4.0 + 2.0 * fam.lambda), 0.1));
  CHECK(fam.sigma == doctest::Approx(-std::log(2.0) / std::log(fam.beta)));

  // separation ledger re-measured here, not trusted from the build
  for (int n = 1; n <= fam.depth; ++n) {
    double need = std::pow(fam.beta, n) * (1.0 - fam.separation_tol);
    std::vector<std::string> level;
    for (const auto& [w, a] : fam.arcs)
      if (static_cast<int>(w.size()) == n) level.push_back(w);
    for (std::size_t i = 0; i < level.size(); ++i)
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        double sep = set_distance(fam.arcs.at(level[i]).verts, fam.arcs.at(level[j]).verts, X);
        CHECK(sep >= need - 1e-12);
      }
  }

  // follows: child tracks its parent with slack <= beta^(parent level)
  for (const auto& [w, a] : fam.arcs) {
    if (w.empty()) continue;
    std::string parent = w.substr(0, w.size() - 1);
    double slack = follows_slack(a, fam.arcs.at(parent), X);
    CHECK(slack <= std::pow(fam.beta, w.size() - 1) + 1e-12);
  }

  // cauchy: d_H(child, parent) <= lambda * beta^(parent level), the
  // geometric-series premise of the limit argument; diameters >= seed/2
  double seed_diam = fam.arcs.at("").diameter(X);
  for (const auto& [w, a] : fam.arcs) {
    CHECK(a.diameter(X) >= seed_diam / 2.0 - 1e-12);
    if (w.empty()) continue;
    std::string parent = w.substr(0, w.size() - 1);
    double dh = hausdorff_distance(a.verts, fam.arcs.at(parent).verts, X);
    CHECK(dh <= fam.lambda * std::pow(fam.beta, w.size() - 1) + 1e-12);
  }
}

TEST_CASE("carpet depth-2 family: embedding inequalities have zero violations") {
  const CarpetFixture& fx = carpet_fixture();
  EmbeddingReport er = embedding_check(fx.fam, fx.X);
  CHECK(er.pairs == 6);  // C(4,2)
  CHECK(er.lower_violations == 0);
  CHECK(er.upper_violations == 0);
  CHECK(er.comparability_violations == 0);
  CHECK(er.ok());
}

TEST_CASE("embedding_check flags an injected fault") {
  const CarpetFixture& fx = carpet_fixture();
  CantorFamily broken = fx.fam;
  auto leaves = broken.leaves();
  REQUIRE(leaves.size() >= 2);
  // collapse two leaves onto the same arc: d_H = 0 < d_sigma/2
  broken.arcs.at(leaves[0]) = broken.arcs.at(leaves[1]);
  EmbeddingReport er = embedding_check(broken, fx.X);
  CHECK(er.lower_violations > 0);
  CHECK_FALSE(er.ok());
}

TEST_CASE("hit_measure: trivial balls and the random-ball audit") {
  const CarpetFixture& fx = carpet_fixture();
  const CantorFamily& fam = fx.fam;
  const FiniteMetricSpace& X = fx.X;

  SUBCASE("ball containing the whole space has measure 1") {
    HitMeasureResult r = hit_measure(fam, Ball{0, X.diameter() + 1.0}, X);
    CHECK(r.mu == 1.0);
    CHECK(r.leaves_hit == 4);
    CHECK(r.within);
  }

  SUBCASE("ball missing every leaf has measure 0") {
    auto leaves = fam.leaves();
    PointId far = 0;
    double best = -1.0;
    for (PointId p = 0; p < X.size(); ++p) {
      double d = 1e300;
      for (const auto& w : leaves)
        d = std::min(d, point_set_distance(p, fam.arcs.at(w).verts, X));
      if (d > best) {
        best = d;
        far = p;
      }
    }
    REQUIRE(best > 0.0);
    HitMeasureResult r = hit_measure(fam, Ball{far, best / 2.0}, X);
    CHECK(r.mu == 0.0);
    CHECK(r.within);
  }

  SUBCASE("1000 seeded random balls never exceed the 4^sigma r^sigma bound") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<PointId> pick(0, X.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double rmin = std::pow(fam.beta, fam.depth), rmax = X.diameter() / 2.0;
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
      Ball b{pick(rng), rmin * std::pow(rmax / rmin, unit(rng))};
      if (!hit_measure(fam, b, X).within) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("sigma consistency: empirical hit exponent is not far below sigma") {
  // needs a family deep enough that the measure is not truncation-dominated
  // over the regression's radius range; the depth-4 product family is the
  // deepest certified one the suite builds
  FiniteMetricSpace X = make_space(SpaceKind::CantorProduct, 4, 81);
  NeighborGraph G = graph_at_2h(X);
  CantorFamily fam = make_product_family(G, 4);
  double expo = hit_measure_exponent(fam, X, 400, 1);
  CHECK(expo >= fam.sigma - 0.1);
}

TEST_CASE("bound_from_family refuses to certify a faulted family") {
  const CarpetFixture& fx = carpet_fixture();
  CantorFamily broken = fx.fam;
  broken.separation_ok = false;
  BoundResult r = bound_from_family(broken, fx.X);
  CHECK_FALSE(r.certified);
  CHECK(r.bound == 1.0);
  CHECK(r.reason.find("uncertified") != std::string::npos);
}

TEST_CASE("bound_from_family certifies the healthy carpet family with bound > 1") {
  const CarpetFixture& fx = carpet_fixture();
  BoundOptions bo;
  bo.hit_samples = 300;
  BoundResult r = bound_from_family(fx.fam, fx.X, bo);
  CHECK(r.certified);
  CHECK(r.hit_violations == 0);
  CHECK(r.tau > r.sigma);
  CHECK(r.bound > 1.0);
}

TEST_CASE("build_family without the beta override reports resolution exhaustion") {
  const CarpetFixture& fx = carpet_fixture();
  BuildFamilyOptions bo;
  bo.depth = 2;
  bo.allow_beta_override = false;
  FamilyConstants fc;
  fc.lambda = 3.0;
  fc.L = 4.0;
  fc.alpha = 1.0;
  fc.delta_star = 0.1;
  CHECK_THROWS_AS((void)build_family(fx.G, fx.seed_arc, fc, bo), ResolutionExhaustedError);
}

TEST_CASE("product family: exact beta = 1/3 and the known hit exponent") {
  FiniteMetricSpace X = make_space(SpaceKind::CantorProduct, 4, 81);
  NeighborGraph G = graph_at_2h(X);
  CantorFamily fam = make_product_family(G, 4);
  CHECK(fam.depth == 4);
  CHECK(fam.beta == doctest::Approx(1.0 / 3.0));
  CHECK(fam.sigma == doctest::Approx(kSigma3));
  CHECK(fam.certified());
  CHECK(fam.leaves().size() == 16);
  double expo = hit_measure_exponent(fam, X, 300, 1);
  CHECK(expo == doctest::Approx(kSigma3).epsilon(0.25));
}
