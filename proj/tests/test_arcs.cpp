#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "confdim/straighten.hpp"
#include "common.hpp"

using namespace confdim;
using namespace confdim::tests;

namespace {

// U-shape with legs of length 1 and a gap of 0.1 between the ends, as a
// standalone coordinate space; vertices step by 0.1 along the walk.
struct UShape {
  FiniteMetricSpace X;
  Arc A;
  UShape() {
    std::vector<double> coords;
    auto add = [&](double x, double y) { coords.insert(coords.end(), {x, y}); };
    for (int i = 0; i <= 10; ++i) add(0.0, i / 10.0);   // left leg up
    add(0.1, 1.0);                                      // rung
    for (int i = 9; i >= 0; --i) add(0.1, i / 10.0);    // right leg down
    X = FiniteMetricSpace::from_coords(coords, 2, MetricKind::Euclidean, 0.0);
    A.scale = 0.11;
    for (PointId p = 0; p < X.size(); ++p) A.verts.push_back(p);
  }
};

Arc row_arc(const FiniteMetricSpace& X, int grid, int row) {
  Arc A;
  A.scale = 2.0 * X.resolution();
  for (int j = 0; j < grid; ++j) A.verts.push_back(row * grid + j);
  return A;
}

}  // namespace

TEST_CASE("subarc_diameter: trivial and hand-checked values") {
  UShape u;
  CHECK(subarc_diameter(u.A, 3, 3, u.X) == 0.0);
  // straight 11-point leg, ends at distance 1
  CHECK(subarc_diameter(u.A, 0, 10, u.X) == doctest::Approx(1.0));
  // whole U: the extreme pair is (0,0) against (0.1,1)
  CHECK(subarc_diameter(u.A, 0, u.A.size() - 1, u.X) ==
        doctest::Approx(std::sqrt(1.01)).epsilon(1e-12));
  CHECK_THROWS_AS((void)subarc_diameter(u.A, 0, u.A.size(), u.X), std::out_of_range);
}

TEST_CASE("quasiarc_constant: segment 1, L-shape 1, U-shape >= 10") {
  FiniteMetricSpace seg = FiniteMetricSpace::from_coords(
      {0, 0.25, 0.5, 0.75, 1.0}, 1, MetricKind::Euclidean, 0.0);
  Arc s{{0, 1, 2, 3, 4}, 0.3};
  CHECK(quasiarc_constant(s, seg).lambda == doctest::Approx(1.0));

  // L-shape (0,0) -> (1,0) -> (1,1): every subarc diameter is realized by
  // its endpoints, so the constant stays 1
  std::vector<double> coords;
  for (int i = 0; i <= 4; ++i) coords.insert(coords.end(), {i / 4.0, 0.0});
  for (int i = 1; i <= 4; ++i) coords.insert(coords.end(), {1.0, i / 4.0});
  FiniteMetricSpace L = FiniteMetricSpace::from_coords(coords, 2, MetricKind::Euclidean, 0.0);
  Arc l{{0, 1, 2, 3, 4, 5, 6, 7, 8}, 0.3};
  CHECK(quasiarc_constant(l, L).lambda == doctest::Approx(1.0));

  UShape u;
  QuasiArcReport r = quasiarc_constant(u.A, u.X);
  CHECK(r.lambda >= 10.0);
  // restricted to short pairs the gap is invisible below its distance
  CHECK(quasiarc_constant(u.A, u.X, 0.05).lambda == doctest::Approx(1.0));
}

TEST_CASE("check_follows: identity, one-cell shift, and reversal") {
  FiniteMetricSpace X = make_space(SpaceKind::Square, 0, 11);
  double h = X.resolution();
  Arc A = row_arc(X, 11, 5);

  SUBCASE("B = A gives a zero-slack certificate") {
    FollowsCertificate c = check_follows(A, A, X, 0.0);
    CHECK(c.ok);
    CHECK(c.slack == 0.0);
    CHECK(c.verify(A, A, X, 0.0));
  }

  SUBCASE("B shifted by one grid cell follows within 2h") {
    Arc B = row_arc(X, 11, 6);
    FollowsCertificate c = check_follows(B, A, X, 2.0 * h);
    CHECK(c.ok);
    CHECK(c.slack <= 2.0 * h);
    CHECK(c.verify(B, A, X, 2.0 * h));
  }

  SUBCASE("reversal of a long arc cannot follow at small slack") {
    Arc B = A.reversed();
    FollowsCertificate c = check_follows(B, A, X, 0.2);
    CHECK_FALSE(c.ok);
    CHECK(c.violating_index >= 0);
  }
}

TEST_CASE("follows_slack is the optimum the certificate thresholds against") {
  FiniteMetricSpace X = make_space(SpaceKind::Square, 0, 11);
  Arc A = row_arc(X, 11, 5);
  Arc B = row_arc(X, 11, 7);
  double opt = follows_slack(B, A, X);
  CHECK(opt == doctest::Approx(0.2));
  CHECK(check_follows(B, A, X, opt).ok);
  CHECK_FALSE(check_follows(B, A, X, opt * 0.9).ok);
}

TEST_CASE("straighten: U-shape inside the full square grid") {
  FiniteMetricSpace X = make_space(SpaceKind::Square, 0, 11);
  NeighborGraph G = graph_at_2h(X);
  double h = X.resolution();
  // the U of the grid: up column 0, across the top, down column 1
  Arc A;
  A.scale = G.scale();
  for (int j = 0; j <= 10; ++j) A.verts.push_back(0 * 11 + j);
  for (int j = 9; j >= 0; --j) A.verts.push_back(1 * 11 + j);
  REQUIRE(A.valid_in(G));

  StraightenResult r = straighten(A, 0.5, 2.0, G);
  CHECK(r.arc.front() == A.front());
  CHECK(r.arc.back() == A.back());
  CHECK(r.arc.valid_in(G));
  CHECK(r.follows.verify(r.arc, A, X, 0.5));
  QuasiArcReport q = quasiarc_constant(r.arc, X, r.alpha * 0.5);
  CHECK(q.lambda <= 2.0 + 2.0 * h / std::max(q.worst_d, h) + 1e-9);
  // potential strictly decreases at every accepted shortcut
  for (std::size_t i = 1; i < r.potential.size(); ++i)
    CHECK(r.potential[i] < r.potential[i - 1]);
  CHECK(r.iterations >= 1);  // the U is far from straight at eps = 0.5
}

TEST_CASE("straighten: an already-straight arc is a fixpoint") {
  FiniteMetricSpace X = make_space(SpaceKind::Square, 0, 11);
  NeighborGraph G = graph_at_2h(X);
  Arc A = row_arc(X, 11, 5);
  StraightenResult r = straighten(A, 0.4, 2.0, G);
  CHECK(r.iterations == 0);
  CHECK(r.arc.verts == A.verts);
}

TEST_CASE("straighten contract on seeded zigzags in the carpet") {
  FiniteMetricSpace X = make_space(SpaceKind::Carpet, 3);
  NeighborGraph G = graph_at_2h(X);
  double h = X.resolution();
  double eps = 0.3;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Arc A = random_zigzag(G, seed, 120);
    StraightenResult r = straighten(A, eps, 3.0, G);
    CHECK(r.arc.front() == A.front());
    CHECK(r.arc.back() == A.back());
    CHECK(r.arc.valid_in(G));
    CHECK(r.follows.verify(r.arc, A, X, eps));
    CHECK(r.alpha > 0.0);
    CHECK(r.alpha <= 1.0);
    QuasiArcReport q = quasiarc_constant(r.arc, X, r.alpha * eps);
    CHECK(q.lambda <= 3.0 + 2.0 * h / std::max(q.worst_d, h) + 1e-9);
    for (std::size_t i = 1; i < r.potential.size(); ++i)
      CHECK(r.potential[i] < r.potential[i - 1]);
  }
}

TEST_CASE("find_quasiarc: edge, carpet corners, disconnected pair") {
  FiniteMetricSpace X = make_space(SpaceKind::Carpet, 3);
  NeighborGraph G = graph_at_2h(X);

  SUBCASE("adjacent points give the edge") {
    PointId x = 0;
    PointId y = G.neighbors(0).front();
    StraightenResult r = find_quasiarc(x, y, 3.0, G);
    CHECK(r.arc.size() == 2);
    CHECK(r.arc.front() == x);
    CHECK(r.arc.back() == y);
  }

  SUBCASE("carpet corners give a certified quasi-arc") {
    auto [a, b] = farthest_pair(X);
    StraightenResult r = find_quasiarc(a, b, 3.0, G);
    CHECK(r.arc.front() == a);
    CHECK(r.arc.back() == b);
    CHECK(r.arc.valid_in(G));
    // re-check at the final cascade scale 4h: the shortcut acceptance
    // threshold is lambda_target*d + 2h, hence the 2h/d tolerance term
    QuasiArcReport q = quasiarc_constant(r.arc, X, r.alpha * 4.0 * X.resolution());
    CHECK(q.lambda <= 3.0 + 2.0 * X.resolution() / std::max(q.worst_d, X.resolution()) + 1e-9);
  }

  SUBCASE("disconnected pair throws") {
    FiniteMetricSpace C = make_space(SpaceKind::ThirdCantor, 3);
    NeighborGraph GC = graph_at_2h(C);
    CHECK_THROWS((void)find_quasiarc(0, C.size() - 1, 3.0, GC));
  }
}

TEST_CASE("subarc images under bounded-distortion maps stay near the target subarc") {
  FiniteMetricSpace X = make_space(SpaceKind::Carpet, 3);
  NeighborGraph G = graph_at_2h(X);
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<PointId> pt(0, X.size() - 1);
  // a small pool of certified quasi-arcs to draw (A, A') pairs from
  std::vector<Arc> pool;
  while (pool.size() < 6) {
    PointId x = pt(rng), y = pt(rng);
    if (x == y) continue;
    pool.push_back(find_quasiarc(x, y, 3.0, G).arc);
  }
  int violations = 0;
  for (int t = 0; t < 20; ++t) {
    const Arc& A = pool[t % pool.size()];
    const Arc& Ap = pool[(t + 1 + t / 6) % pool.size()];
    violations += subarc_image_violations(A, Ap, X, 1000 + t, 20);
  }
  CHECK(violations == 0);
}

TEST_CASE("arc helpers: reversal, subarc, validity") {
  FiniteMetricSpace X = make_space(SpaceKind::Square, 0, 5);
  NeighborGraph G = graph_at_2h(X);
  Arc A = row_arc(X, 5, 2);
  CHECK(A.is_simple());
  CHECK(A.valid_in(G));
  Arc R = A.reversed();
  CHECK(R.front() == A.back());
  CHECK(R.back() == A.front());
  Arc S = A.subarc(1, 3);
  CHECK(S.size() == 3);
  CHECK(S.front() == A[1]);
  Arc broken{{0, 7}, G.scale()};  // not neighbors at 2h
  CHECK_FALSE(broken.valid_in(G));
}
