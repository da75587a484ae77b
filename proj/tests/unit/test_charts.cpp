#include <doctest.h>

#include <cmath>
#include <vector>

#include "ein/charts.hpp"
#include "ein/random.hpp"

using namespace ein;

namespace {

const Vec e1 = basis_vector(3, 0);

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Vec random_null(Rng& rng, int n) {
  Vec w(n);
  w << rng.unit_vector(n - 1), 1.0;
  return w * rng.uniform(0.5, 2.0);
}

}  // namespace

TEST_CASE("frame_for invariants") {
  const ChartFrame f = frame_for(UniPoint(e1, 0.0));
  CHECK(f.xi_inf().isApprox(vec({1, 0, 1, 0, 0})));
  CHECK(q2n(f.xi_zero()) == doctest::Approx(0.0));
  CHECK(dot2n(f.xi_inf(), f.xi_zero()) == doctest::Approx(-0.5));
  CHECK(f.dim() == 3);
  // Mink_+(p) and Mink_-(p) are the charts of sigma(p) and sigma^{-1}(p).
  const UniPoint p(e1, 0.4);
  CHECK(same_point(project(frame_for(deck_sigma(p, 1)).center()), project(deck_sigma(p, 1))));
  CHECK(frame_for(deck_sigma(p, -1)).center().t() == doctest::Approx(0.4 - kPi));
}

TEST_CASE("ChartFrame constructor rejects broken data") {
  const ChartFrame f = frame_for(UniPoint(e1, 0.0));
  CHECK_THROWS_AS(ChartFrame(f.xi_inf(), 2.0 * f.xi_zero(), f.block(), f.center()), PreconditionError);
  Mat bad = f.block();
  bad.col(0) *= 2.0;
  CHECK_THROWS_AS(ChartFrame(f.xi_inf(), f.xi_zero(), bad, f.center()), PreconditionError);
  CHECK_THROWS_AS(ChartFrame(f.xi_inf(), f.xi_zero(), f.block(), UniPoint(e1, 1.0)), PreconditionError);
  CHECK_NOTHROW(ChartFrame(f.xi_inf(), f.xi_zero(), f.block(), f.center()));
}

TEST_CASE("embed examples") {
  const ChartFrame f = frame_for(UniPoint(e1, 0.0));
  CHECK(same_point(embed(f, Vec::Zero(3)), EinPoint::from_ambient(f.xi_zero())));
  const Vec X = vec({0.6, 0.8, 1.0});
  CHECK((embed_ambient(f, X) - (f.xi_zero() + f.to_ambient(X))).norm() < 1e-15);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Vec Y = rng.uniform_box(3, 5.0);
    const Vec a = embed_ambient(f, Y);
    CHECK(std::abs(q2n(a)) <= 1e-10 * a.squaredNorm());
    CHECK(dot2n(a, f.xi_inf()) == doctest::Approx(-0.5));
  }
}

TEST_CASE("chart_coords round trip and errors") {
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const ChartFrame f = frame_for(UniPoint(rng.unit_vector(3), rng.uniform(-3.0, 3.0)));
    const Vec X = rng.uniform_box(3, 5.0);
    CHECK((chart_coords(f, embed(f, X)) - X).norm() <= 1e-10);
  }
  const UniPoint p(e1, 0.0);
  const ChartFrame f = frame_for(p);
  // A point on the lightcone of the center.
  CHECK_THROWS_AS(chart_coords(f, project(UniPoint(basis_vector(3, 1), kPi / 2))), NotInChart);
  // The conjugate of the center lies in the other chart of the double cover.
  CHECK_THROWS_AS(chart_coords(f, project(deck_sigma(p, 1))), NotInChart);
  CHECK_THROWS_AS(chart_coords(f, project(UniPoint(basis_vector(2, 0), 0.0))), PreconditionError);
}

TEST_CASE("lift_to_chart window") {
  const UniPoint p(e1, 0.0);
  const ChartFrame f = frame_for(p);
  const UniPoint origin = lift_to_chart(f, Vec::Zero(3));
  CHECK(std::abs(origin.t()) < kPi);
  CHECK(origin.x().isApprox(-e1));
  CHECK(classify(p, origin).tag == Relation::Spacelike);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const UniPoint c(rng.unit_vector(3), rng.uniform(-10.0, 10.0));
    const ChartFrame g = frame_for(c);
    const UniPoint u = lift_to_chart(g, rng.uniform_box(3, 4.0));
    // Exactly one branch u.t + 2 pi k lies in the window.
    const double d = sphere_distance(u.x(), c.x());
    int inside = 0;
    for (int k = -3; k <= 3; ++k) inside += std::abs(u.t() + kTwoPi * k - c.t()) < d ? 1 : 0;
    CHECK(inside == 1);
    CHECK(std::abs(u.t() - c.t()) < d);
    // Strictly inside the diamond between the conjugates of the center.
    const Diamond chart = Diamond::make(deck_sigma(c, -1), deck_sigma(c, 1));
    CHECK(diamond_contains(chart, u, Openness::Open));
  }
}

TEST_CASE("flat relation") {
  CHECK(flat_relation(vec({0, 0, 0}), vec({0, 0, 1})).tag == Relation::ChronoFuture);
  CHECK(flat_relation(vec({0, 0, 0}), vec({1, 0, 1})).tag == Relation::NullFuture);
  CHECK(flat_relation(vec({0, 0, 0}), vec({1, 0, 0.5})).tag == Relation::Spacelike);
  CHECK(flat_relation(vec({0, 0, 0}), vec({0, 0, -1})).tag == Relation::ChronoPast);
  CHECK(flat_relation(vec({0, 0, 0}), vec({0, 0, 0})).tag == Relation::Equal);
  CHECK(mink_q(vec({1, 2, 3})) == doctest::Approx(-4.0));
}

TEST_CASE("property: conformality and causal equivalence") {
  Rng rng(4);
  const ChartFrame f = frame_for(UniPoint(rng.unit_vector(3), 0.7));
  for (int i = 0; i < 100; ++i) {
    const ConformalityCheck c = conformality_at(f, rng.uniform_box(3, 3.0));
    CHECK(c.omega2 > 0.0);
    CHECK(c.residual < 1e-5);
  }
  CHECK_THROWS_AS(conformality_at(f, Vec::Zero(2)), PreconditionError);
  CHECK_THROWS_AS(conformality_at(f, Vec::Zero(3), 0.0), PreconditionError);
  for (int i = 0; i < 1000; ++i) {
    const Vec X = rng.uniform_box(3, 3.0);
    const Vec Y = rng.uniform_box(3, 3.0);
    const auto flat = flat_relation(X, Y);
    const auto uni = classify(lift_to_chart(f, X), lift_to_chart(f, Y));
    if (flat.on_boundary || uni.on_boundary) continue;
    CHECK(flat.tag == uni.tag);
  }
}

TEST_CASE("property: the three charts of a point tile its diamond") {
  Rng rng(5);
  const UniPoint p(rng.unit_vector(3), 0.3);
  const Diamond slab = Diamond::make(deck_delta(p, -1), deck_delta(p, 1));
  int tested = 0;
  for (int i = 0; i < 10000; ++i) {
    const UniPoint r(rng.unit_vector(3), p.t() + rng.uniform(-kTwoPi, kTwoPi));
    const auto rel = classify(p, r);
    const auto rel_plus = classify(deck_sigma(p, 1), r);
    const auto rel_minus = classify(deck_sigma(p, -1), r);
    if (rel.on_boundary || rel_plus.on_boundary || rel_minus.on_boundary) continue;
    const bool in_zero = rel.tag == Relation::Spacelike;
    const bool in_plus = rel_plus.tag == Relation::Spacelike;
    const bool in_minus = rel_minus.tag == Relation::Spacelike;
    const int pieces = int(in_zero) + int(in_plus) + int(in_minus);
    if (diamond_contains(slab, r, Openness::Open)) {
      ++tested;
      // Outside the charts the point is on a lightcone of p, excluded above.
      CHECK(pieces == 1);
    } else {
      CHECK(pieces <= 1);
    }
  }
  CHECK(tested > 1000);
}

TEST_CASE("photon_endpoint") {
  Rng rng(6);
  const ChartFrame f = frame_for(UniPoint(e1, 0.0));
  const Vec w = vec({0.6, 0.8, 1.0});
  CHECK(same_point(photon_endpoint(f, Vec::Zero(3), w), EinPoint::from_ambient(f.to_ambient(w))));
  CHECK_THROWS_AS(photon_endpoint(f, Vec::Zero(3), vec({1, 0, 0.5})), PreconditionError);
  CHECK_THROWS_AS(photon_endpoint(f, Vec::Zero(3), Vec::Zero(3)), PreconditionError);
  for (int i = 0; i < 200; ++i) {
    const Vec X0 = rng.uniform_box(3, 2.0);
    const Vec v = random_null(rng, 3);
    const EinPoint end = photon_endpoint(f, X0, v);
    CHECK(std::abs(dot2n(end.rep(), f.xi_inf())) < 1e-12);
    CHECK(angular_gap(end, embed(f, X0 + 1e8 * v)) < 1e-6);
    // Constant along the ray; depends on X0 only through <X0, w>.
    CHECK(same_point(end, photon_endpoint(f, X0 + 3.7 * v, v), Tolerance{1e-12, 1e-6}));
    Vec shift = rng.normal_vec(3);
    shift -= mink_dot(shift, v) / mink_dot(vec({0, 0, 1}), v) * vec({0, 0, 1});
    CHECK(std::abs(mink_dot(shift, v)) < 1e-12);
    CHECK(same_point(end, photon_endpoint(f, X0 + shift, v), Tolerance{1e-11, 1e-6}));
  }
}

TEST_CASE("boundary hyperplanes") {
  Rng rng(7);
  const ChartFrame f = frame_for(UniPoint(rng.unit_vector(3), 1.1));
  const Vec w = vec({0.6, 0.8, 1.0}) * 2.0;
  const BoundaryHyperplane h = boundary_to_hyperplane(f, photon_endpoint(f, Vec::Zero(3), w));
  CHECK(h.sheet == Sheet::Future);
  CHECK(h.plane.s == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(h.plane.v.isApprox(w / 2.0));
  // Oracle: points on the hyperplane are exactly those null-related to... the photons they launch
  // in direction v, which all end at the same boundary point.
  for (int i = 0; i < 50; ++i) {
    const Vec X0 = rng.uniform_box(3, 2.0);
    const Vec v = normalize_null(random_null(rng, 3));
    const BoundaryHyperplane b = boundary_to_hyperplane(f, photon_endpoint(f, X0, v));
    CHECK(b.plane.v.isApprox(v, 1e-10));
    CHECK(b.plane.s == doctest::Approx(-mink_dot(X0, v)).epsilon(1e-10));
    const EinPoint back = hyperplane_to_boundary(f, b);
    CHECK(same_point(back, photon_endpoint(f, X0, v), Tolerance{1e-10, 1e-6}));
    // Parallel family along one boundary photon.
    const BoundaryHyperplane later = boundary_to_hyperplane(f, photon_endpoint(f, X0 + 0.5 * vec({0, 0, 1}), v));
    CHECK(later.plane.v.isApprox(v, 1e-10));
    CHECK(later.plane.s == doctest::Approx(b.plane.s + 0.5).epsilon(1e-10));
    // Past sheet: endpoint of a past photon.
    const BoundaryHyperplane past = boundary_to_hyperplane(f, photon_endpoint(f, X0, -v));
    CHECK(past.sheet == Sheet::Past);
    CHECK(same_point(hyperplane_to_boundary(f, past), photon_endpoint(f, X0, -v), Tolerance{1e-10, 1e-6}));
  }
  CHECK_THROWS_AS(boundary_to_hyperplane(f, EinPoint::from_ambient(f.xi_inf())), PreconditionError);
  CHECK_THROWS_AS(boundary_to_hyperplane(f, embed(f, Vec::Zero(3))), PreconditionError);
  CHECK_THROWS_AS(normalize_null(vec({1, 0, -1})), PreconditionError);
  CHECK_THROWS_AS(normalize_null(vec({1, 1, 1})), PreconditionError);
}

TEST_CASE("section_to_point") {
  Rng rng(8);
  const Vec q = vec({0.3, -0.7, 0.25});
  std::vector<NullHyperplane> samples;
  for (int i = 0; i < 32; ++i) {
    const Vec v = normalize_null(random_null(rng, 3));
    samples.push_back({v, -mink_dot(q, v)});
  }
  const auto fit = section_to_point(samples);
  REQUIRE(fit.has_value());
  CHECK((*fit - q).norm() < 1e-8);
  for (auto& s : samples) s.s = -mink_dot(Vec::Zero(3), s.v);
  CHECK(section_to_point(samples)->norm() < 1e-12);
  for (std::size_t i = 0; i < samples.size(); ++i) samples[i].s = 1.0 + (i % 2 ? 0.1 : -0.1);
  CHECK_FALSE(section_to_point(samples).has_value());
  std::vector<NullHyperplane> same(5, samples.front());
  CHECK_THROWS_AS(section_to_point(same), PreconditionError);
  CHECK_THROWS_AS(section_to_point(std::vector<NullHyperplane>{}), PreconditionError);
  CHECK_THROWS_AS(section_to_point(std::vector<NullHyperplane>(samples.begin(), samples.begin() + 2)),
                  PreconditionError);
}

TEST_CASE("sphere-chart intersections") {
  const ChartFrame f = frame_for(UniPoint(e1, 0.0));
  // Through the center: spanned by xi_inf, xi_zero and a spacelike block vector.
  Mat P(5, 3);
  P << f.xi_inf(), f.xi_zero(), f.block().col(0);
  const QuadricSlice a = sphere_chart_intersection(f, P);
  REQUIRE(std::holds_alternative<SpacelikePlane>(a));
  const auto& plane = std::get<SpacelikePlane>(a);
  CHECK(plane.basis.cols() == 1);
  CHECK(plane.point.norm() < 1e-12);
  for (const Vec& Z : sample_sphere_in_chart(f, P, 20, 1)) {
    CHECK(std::abs(Z[1]) < 1e-9);
    CHECK(std::abs(Z[2]) < 1e-9);
  }
  // The hyperboloid q(Z) = -1.
  Mat H(5, 4);
  H << f.xi_zero() - f.xi_inf(), f.block();
  const QuadricSlice b = sphere_chart_intersection(f, H);
  REQUIRE(std::holds_alternative<HyperboloidSheet>(b));
  const auto& sheet = std::get<HyperboloidSheet>(b);
  CHECK(sheet.center.norm() < 1e-12);
  for (const Vec& Z : sample_sphere_in_chart(f, H, 50, 2)) {
    CHECK(mink_q(Z) == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(mink_q((Z - sheet.center) / sheet.scale) == doctest::Approx(-1.0).epsilon(1e-8));
  }
  // A round sphere in the time-zero slice.
  Mat S(5, 3);
  S << f.xi_zero() + f.xi_inf(), f.block().col(0), f.block().col(1);
  const QuadricSlice c = sphere_chart_intersection(f, S);
  REQUIRE(std::holds_alternative<SpacelikeSphere>(c));
  const auto& round = std::get<SpacelikeSphere>(c);
  CHECK(round.center.norm() < 1e-12);
  for (const Vec& Z : sample_sphere_in_chart(f, S, 50, 3)) {
    CHECK(std::abs(Z[2]) < 1e-12);
    CHECK(Z.head(2).norm() == doctest::Approx(round.radius));
  }
  Mat bad(5, 2);
  bad << f.block().col(0), f.block().col(1);
  CHECK_THROWS_AS(sphere_chart_intersection(f, bad), PreconditionError);
  CHECK_THROWS_AS(sphere_chart_intersection(f, Mat::Identity(4, 2)), PreconditionError);
}

TEST_CASE("oracle: closure of another chart's spacelike line is a hyperboloid branch") {
  Rng rng(9);
  const ChartFrame f = frame_for(UniPoint(e1, 0.0));
  const ChartFrame g = frame_for(UniPoint(rng.unit_vector(3), 0.9));
  // Spacelike line of g through Y0 with direction u; its closure is the sphere of
  // span(iota_g(Y0), g-block u, xi_inf(g)).
  const Vec Y0 = vec({0.2, 0.1, -0.3});
  const Vec u = vec({1.0, 0.3, 0.2});
  Mat P(5, 3);
  P << embed_ambient(g, Y0), g.to_ambient(u), g.xi_inf();
  const QuadricSlice s = sphere_chart_intersection(f, P);
  REQUIRE(std::holds_alternative<HyperboloidSheet>(s));
  const auto& sheet = std::get<HyperboloidSheet>(s);
  for (int i = -20; i <= 20; ++i) {
    const EinPoint e = embed(g, Y0 + 0.25 * i * u);
    if (dot2n(e.rep(), f.xi_inf()) > -1e-6) continue;
    const Vec Z = chart_coords(f, e);
    CHECK(mink_q((Z - sheet.center) / sheet.scale) == doctest::Approx(-1.0).epsilon(1e-8));
  }
}
