#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ein/diamonds.hpp"
#include "ein/random.hpp"

using namespace ein;

namespace {

const Vec e1 = basis_vector(3, 0);
const Vec e2 = basis_vector(3, 1);

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Diamond dia(const Vec& xp, double tp, const Vec& xf, double tf) {
  return Diamond::make(UniPoint(xp, tp), UniPoint(xf, tf));
}

}  // namespace

TEST_CASE("taxonomy examples") {
  CHECK(classify_diamond(dia(e1, 0.0, e1, kTwoPi)) == DiamondKind::AffineChart);
  CHECK(classify_diamond(dia(e1, 0.0, e1, kPi)) == DiamondKind::MinkowskiLike);
  CHECK(classify_diamond(dia(e1, 0.0, e1, 2.5 * kPi)) == DiamondKind::ConjugateCylinder);
  CHECK(classify_diamond(dia(e1, 0.0, e2, 1.5 * kPi)) == DiamondKind::NullHalfSpace);
  CHECK(classify_diamond(dia(e1, 0.0, e2, kPi / 2)) == DiamondKind::EmptyInterior);
  CHECK(classify_diamond(dia(e1, 0.0, e1, 0.0)) == DiamondKind::EmptyInterior);
  CHECK(to_string(DiamondKind::NullHalfSpace) == "NullHalfSpace");
}

TEST_CASE("taxonomy thresholds are band-aware") {
  CHECK(classify_diamond(dia(e1, 0.0, e1, kTwoPi + 5e-7)) == DiamondKind::AffineChart);
  CHECK(classify_diamond(dia(e1, 0.0, e1, kTwoPi + 5e-6)) == DiamondKind::ConjugateCylinder);
  CHECK(classify_diamond(dia(e1, 0.0, e1, kTwoPi - 5e-6)) == DiamondKind::MinkowskiLike);
  CHECK(classify_diamond(dia(e1, 0.0, e2, kPi / 2 + 5e-7)) == DiamondKind::EmptyInterior);
  CHECK(classify_diamond(dia(e1, 0.0, e2, kPi / 2 + 5e-6)) == DiamondKind::MinkowskiLike);
}

TEST_CASE("cylinder witness") {
  const Diamond d = dia(e1, 0.0, e1, 2.5 * kPi);
  const UniPoint r(e2, 0.75 * kPi);
  CHECK(diamond_contains(d, r, Openness::Open));
  CHECK(diamond_contains(d, deck_sigma(r, 1), Openness::Open));
  const auto pair = find_conjugate_pair(d, 16);
  REQUIRE(pair.has_value());
  CHECK(is_conjugate(pair->first, pair->second) == 1);
  CHECK(diamond_contains(d, pair->first, Openness::Open));
  CHECK(diamond_contains(d, pair->second, Openness::Open));
}

TEST_CASE("oracle searches") {
  CHECK_FALSE(find_conjugate_pair(dia(e1, 0.0, e1, kTwoPi), 16).has_value());
  CHECK_FALSE(find_conjugate_pair(dia(e1, 0.0, e2, kPi / 2), 16).has_value());
  CHECK_FALSE(find_conjugate_pair(dia(e1, 0.0, e2, 1.5 * kPi), 16).has_value());
  const auto photon = contains_complete_photon(dia(e1, 0.0, e1, kTwoPi), 16);
  REQUIRE(photon.has_value());
  CHECK(is_complete_segment(*photon));
  CHECK(contains_complete_photon(dia(e1, 0.0, e2, 1.5 * kPi), 16).has_value());
  CHECK_FALSE(contains_complete_photon(dia(e1, 0.0, e1, kPi / 2), 16).has_value());
  CHECK_FALSE(contains_complete_photon(dia(e1, 0.0, e1, kPi), 16).has_value());
}

TEST_CASE("property: deck invariance of the taxonomy") {
  Rng rng(11);
  for (int i = 0; i < 500; ++i) {
    const UniPoint past(rng.unit_vector(3), rng.uniform(-2.0, 2.0));
    const Vec xf = rng.unit_vector(3);
    const double tf = past.t() + sphere_distance(past.x(), xf) + rng.uniform(0.0, 5.0);
    const Diamond d = Diamond::make(past, UniPoint(xf, tf));
    const DiamondKind k = classify_diamond(d);
    for (int s : {-3, -1, 1, 2}) {
      CHECK(classify_diamond(Diamond::make(deck_sigma(d.past, s), deck_sigma(d.future, s))) == k);
    }
  }
}

TEST_CASE("diamonds from a sphere") {
  const ChartFrame f = frame_for(UniPoint(e1, 0.0));
  const SphereDiamonds s = diamonds_from_sphere(1.0, f);
  CHECK(s.in_inner(vec({0, 0, 0})));
  CHECK(s.in_outer(vec({2, 0, 0.5})));
  CHECK_FALSE(s.in_inner(vec({1, 0, 0})));
  CHECK_FALSE(s.in_outer(vec({1, 0, 0})));
  CHECK_FALSE(s.in_inner(vec({0, 0, 1})));

  Rng rng(12);
  // Oracle for D': the spatial distance to the closed ball, minimized over samples.
  std::vector<Vec> ball;
  for (int i = 0; i < 4000; ++i) {
    const double rad = std::sqrt(rng.uniform());
    ball.push_back(rad * rng.unit_vector(2));
  }
  for (int i = 0; i < 2000; ++i) {
    const Vec w = rng.uniform_box(3, 3.0);
    double nearest = 1e300;
    for (const Vec& b : ball) nearest = std::min(nearest, (w.head(2) - b).norm());
    const double t = std::abs(w[2]);
    if (std::abs(nearest - t) < 0.05) continue;
    CHECK(s.in_outer(w) == (nearest > t));
    // D through the universal cover.
    if (std::abs(w.head(2).norm() + t - 1.0) > 1e-6) {
      CHECK(s.in_inner(w) == diamond_contains(s.inner_diamond(), lift_to_chart(f, w), Openness::Open));
    }
  }
  // The time-zero slice minus the sphere splits into the two pieces.
  for (int i = 0; i < 2000; ++i) {
    Vec w = rng.uniform_box(3, 3.0);
    w[2] = 0.0;
    if (std::abs(w.head(2).norm() - 1.0) < 1e-9) continue;
    CHECK(s.in_inner(w) != s.in_outer(w));
    CHECK(s.in_inner(w) == (w.head(2).norm() < 1.0));
  }
}

TEST_CASE("loxodromic examples and errors") {
  const Loxodromic g = loxodromic(2.0, 3);
  const Vec image = Loxodromic::to_null(g.apply(Loxodromic::from_null(vec({0, 1, 1}))));
  CHECK((image - vec({0, 0.5, 2})).norm() < 1e-15);
  CHECK(Loxodromic::to_null(vec({1, 2, 3})).isApprox(vec({1, 5, -1})));
  CHECK(Loxodromic::from_null(Loxodromic::to_null(vec({1, 2, 3}))).isApprox(vec({1, 2, 3})));
  CHECK_THROWS_AS(loxodromic(1.0, 3), PreconditionError);
  CHECK_THROWS_AS(loxodromic(0.5, 3), PreconditionError);
  CHECK_THROWS_AS(loxodromic(2.0, 1), PreconditionError);
  CHECK_THROWS_AS(g.apply(vec({1, 2})), PreconditionError);
}

TEST_CASE("property: loxodromic preserves the form and fixes the x-plane") {
  Rng rng(13);
  for (int n : {2, 3, 5}) {
    const Loxodromic g = loxodromic(2.0, n);
    for (int i = 0; i < 1000; ++i) {
      const Vec w = rng.uniform_box(n, 10.0);
      CHECK(mink_q(g.apply(w)) == doctest::Approx(mink_q(w)).epsilon(1e-10).scale(1.0));
    }
    Vec x = Vec::Zero(n);
    x.head(n - 2) = rng.normal_vec(n - 2);
    CHECK((g.apply(x) - x).norm() < 1e-15);
    CHECK(g.power(1).matrix() == g.matrix());
    for (int k = 1; k <= 5; ++k) {
      CHECK((g.power(k).matrix() - loxodromic(std::pow(2.0, k), n).matrix()).norm() < 1e-12 * std::pow(2.0, k));
    }
    CHECK_THROWS_AS(g.power(0), PreconditionError);
  }
}

TEST_CASE("counterexample slices") {
  CounterexampleScene sc;
  for (int k = 0; k <= 6; ++k) {
    sc.k = k;
    const SliceVerdicts v = counterexample_slices(sc);
    CHECK(v.xplane_inner == doctest::Approx(0.5));
    CHECK(v.xplane_outer == doctest::Approx(1.0));
    CHECK(v.xplane_nonempty);
    CHECK(v.xplane_fixed_residual < 1e-12);
    CHECK(v.yz_plane_empty == (std::pow(2.0, -k) <= 0.5));
    // Oracle: the (y, z) plane on a grid, pulled back through gamma_k.
    const Mat inv = k == 0 ? Mat::Identity(3, 3) : Mat(loxodromic(2.0, 3).power(k).matrix().inverse());
    const SphereDiamonds outer = diamonds_from_sphere(0.5, frame_for(UniPoint(e1, 0.0)));
    bool hit = false;
    for (int i = -200; i <= 200 && !hit; ++i) {
      for (int j = -200; j <= 200 && !hit; ++j) {
        const Vec w = vec({0.0, 0.01 * i, 0.01 * j});
        const Vec back = inv * w;
        hit = back.head(2).norm() < 1.0 - std::abs(back[2]) && outer.in_outer(w);
      }
    }
    CHECK(hit == !v.yz_plane_empty);
  }
  sc.r_inner = 1.0;
  CHECK_THROWS_AS(counterexample_slices(sc), PreconditionError);
  sc.r_inner = 0.5;
  sc.lambda = 1.0;
  CHECK_THROWS_AS(counterexample_slices(sc), PreconditionError);
  sc.lambda = 2.0;
  sc.n = 2;
  CHECK_THROWS_AS(counterexample_slices(sc), PreconditionError);
}

TEST_CASE("counterexample clouds") {
  CounterexampleScene sc;
  sc.samples = 5000;
  sc.k = 0;
  const CounterexampleReport r0 = counterexample_scene(sc);
  CHECK_FALSE(r0.degenerate);
  CHECK(r0.components.count == 1);
  sc.k = 3;
  const CounterexampleReport r3 = counterexample_scene(sc);
  CHECK_FALSE(r3.degenerate);
  CHECK(r3.components.count == 2);
  CHECK(r3.components.labels.size() == r3.cloud.points.size());
  // Every cloud point is in gamma_k D and D'.
  const Mat inv = loxodromic(2.0, 3).power(3).matrix().inverse();
  for (const Vec& w : r3.cloud.points) {
    const Vec back = inv * w;
    CHECK(back.head(2).norm() < 1.0 - std::abs(back[2]));
    CHECK(w.head(2).norm() > 0.5 + std::abs(w[2]));
  }
  // The two components lie on either side of the (y, z) plane.
  for (std::size_t i = 0; i < r3.cloud.points.size(); ++i) {
    const bool same_side = (r3.cloud.points[i][0] > 0.0) == (r3.cloud.points[0][0] > 0.0);
    CHECK(same_side == (r3.components.labels[i] == r3.components.labels[0]));
  }
  const CounterexampleReport again = counterexample_scene(sc);
  CHECK(again.cloud.points.size() == r3.cloud.points.size());
  CHECK(again.cloud.points.back() == r3.cloud.points.back());
  sc.samples = 50;
  CHECK(counterexample_scene(sc).degenerate);
}

TEST_CASE("shared vertex intersections") {
  const UniPoint p(e1, 0.0);
  const UniPoint q(e1, -1.0);
  const SharedVertexReport same = shared_vertex_intersection_check(p, q, q, 50, 1);
  CHECK(same.verdict == IntersectionVerdict::Convex);
  CHECK(same.pairs_tested == 50);
  CHECK(same.failures == 0);

  Rng rng(14);
  for (int i = 0; i < 20; ++i) {
    auto below = [&]() {
      const Vec x = rng.unit_vector(3);
      return UniPoint(x, -sphere_distance(x, p.x()) - rng.uniform(0.1, 1.5));
    };
    const SharedVertexReport r = shared_vertex_intersection_check(p, below(), below(), 100, 100 + i);
    CHECK(r.verdict == IntersectionVerdict::Convex);
  }
  const UniPoint far(-e1, 0.0);
  CHECK(shared_vertex_intersection_check(p, q, far, 10, 2).verdict == IntersectionVerdict::EmptyIntersection);
  CHECK_THROWS_AS(shared_vertex_intersection_check(p, q, UniPoint(e1, -7.0), 10, 3), PreconditionError);
  CHECK_THROWS_AS(shared_vertex_intersection_check(p, q, q, 0, 3), PreconditionError);
  CHECK(to_string(IntersectionVerdict::EmptyIntersection) == "EmptyIntersection");
}
