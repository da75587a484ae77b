#include "ein/diamonds.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ein/random.hpp"

namespace ein {

std::string_view to_string(DiamondKind k) {
  switch (k) {
    case DiamondKind::EmptyInterior: return "EmptyInterior";
    case DiamondKind::MinkowskiLike: return "MinkowskiLike";
    case DiamondKind::NullHalfSpace: return "NullHalfSpace";
    case DiamondKind::AffineChart: return "AffineChart";
    case DiamondKind::ConjugateCylinder: return "ConjugateCylinder";
  }
  return "?";
}

DiamondKind classify_diamond(const Diamond& d, const Tolerance& tol) {
  const double dist = sphere_distance(d.past.x(), d.future.x(), tol);
  const double dt = d.future.t() - d.past.t();
  if (dt <= dist + tol.band) return DiamondKind::EmptyInterior;
  if (dt > kTwoPi - dist + tol.band) return DiamondKind::ConjugateCylinder;
  if (std::abs(dt - kTwoPi) <= tol.band && dist <= tol.band) return DiamondKind::AffineChart;
  if (std::abs(dt - (kTwoPi - dist)) <= tol.band && dist > tol.band) return DiamondKind::NullHalfSpace;
  return DiamondKind::MinkowskiLike;
}

namespace {

// Orthonormal frame e1 = past.x, e2 in the plane of both vertices, then the rest.
Mat adapted_frame(const Diamond& d) {
  const int n = d.past.dim();
  Mat A(n, n + 1);
  A.col(0) = d.past.x();
  A.col(1) = d.future.x();
  A.rightCols(n - 1) = Mat::Identity(n, n - 1);
  // Drop the second column when the vertices are (anti)parallel.
  Vec rest = d.future.x() - d.future.x().dot(d.past.x()) * d.past.x();
  Mat B(n, n);
  B.col(0) = d.past.x();
  int filled = 1;
  auto push = [&](Vec v) {
    for (int j = 0; j < filled; ++j) v -= v.dot(B.col(j)) * B.col(j);
    const double norm = v.norm();
    if (norm > 1e-8 && filled < n) B.col(filled++) = v / norm;
  };
  push(rest);
  for (int i = 0; i < n && filled < n; ++i) push(basis_vector(n, i));
  return B;
}

// Grid of angles on [0, 2 pi) with the special values that matter for the vertices.
std::vector<double> alpha_grid(int density, double dist) {
  std::vector<double> a;
  for (int i = 0; i < density; ++i) a.push_back(kTwoPi * i / density);
  for (double s : {0.0, dist, kPi, kPi + dist, kTwoPi - 0.5 * (kPi - dist)}) a.push_back(s);
  return a;
}

std::vector<double> beta_grid(int n, int density) {
  if (n < 3) return {0.0};
  std::vector<double> b{0.0};
  const int half = std::max(1, density / 2);
  for (int j = 1; j < half; ++j) {
    const double beta = -0.5 * kPi + kPi * j / half;
    if (std::abs(beta) > 1e-15) b.push_back(beta);
  }
  return b;
}

Vec grid_direction(const Mat& B, double alpha, double beta) {
  Vec y = std::cos(beta) * (std::cos(alpha) * B.col(0) + std::sin(alpha) * B.col(1));
  if (B.cols() > 2) y += std::sin(beta) * B.col(2);
  return y.normalized();
}

}  // namespace

std::optional<std::pair<UniPoint, UniPoint>> find_conjugate_pair(const Diamond& d, int density,
                                                                 const Tolerance& tol) {
  if (density < 1) throw PreconditionError("grid density must be positive");
  const Mat B = adapted_frame(d);
  const double dist = sphere_distance(d.past.x(), d.future.x(), tol);
  for (double beta : beta_grid(d.past.dim(), density)) {
    for (double alpha : alpha_grid(density, dist)) {
      const Vec y = grid_direction(B, alpha, beta);
      const double dp = sphere_distance(d.past.x(), y, tol);
      const double df = sphere_distance(y, d.future.x(), tol);
      // r = (y, s) and sigma(r) both chronologically inside.
      const double lo = d.past.t() + dp;
      const double hi = d.future.t() - kTwoPi + df;
      if (!(hi > lo)) continue;
      const UniPoint r(y, 0.5 * (lo + hi), tol);
      const UniPoint sr = deck_sigma(r, 1);
      if (diamond_contains(d, r, Openness::Open, tol) && diamond_contains(d, sr, Openness::Open, tol)) {
        return std::make_pair(r, sr);
      }
    }
  }
  return std::nullopt;
}

namespace {

std::vector<Vec> tangent_candidates(const Vec& y, const Diamond& d, int density) {
  const int n = static_cast<int>(y.size());
  std::vector<Vec> out;
  auto add = [&](Vec u) {
    u -= u.dot(y) * y;
    const double norm = u.norm();
    if (norm > 1e-8) out.push_back(u / norm);
  };
  add(d.past.x());
  add(d.future.x());
  add(-d.past.x());
  add(-d.future.x());
  const Mat Q = Eigen::HouseholderQR<Mat>(Mat(y)).householderQ() * Mat::Identity(n, n);
  const int count = std::max(4, density);
  for (int i = 0; i < count; ++i) {
    const double a = kTwoPi * i / count;
    Vec u = std::cos(a) * Q.col(1);
    if (n > 2) u += std::sin(a) * Q.col(2);
    add(u);
  }
  for (int j = 3; j < n; ++j) {
    add(Q.col(j));
    add(-Q.col(j));
  }
  return out;
}

}  // namespace

std::optional<PhotonSegment> contains_complete_photon(const Diamond& d, int density,
                                                      const Tolerance& tol) {
  if (density < 1) throw PreconditionError("grid density must be positive");
  const Mat B = adapted_frame(d);
  const double dist = sphere_distance(d.past.x(), d.future.x(), tol);
  const int samples = std::max(8, density);
  for (double beta : beta_grid(d.past.dim(), density)) {
    for (double alpha : alpha_grid(density, dist)) {
      const Vec y = grid_direction(B, alpha, beta);
      const UniPoint r(y, d.past.t() + sphere_distance(d.past.x(), y, tol), tol);
      const UniPoint sr = deck_sigma(r, 1);
      // sigma(r) must reach the future vertex: cheap, independent of the tangent.
      if (d.future.t() - sr.t() - sphere_distance(sr.x(), d.future.x(), tol) < -tol.band) continue;
      if (!diamond_contains(d, r, Openness::Closed, tol) ||
          !diamond_contains(d, sr, Openness::Closed, tol)) {
        continue;
      }
      for (const Vec& u : tangent_candidates(y, d, density)) {
        const PhotonSegment seg = photon_through(r, u, TimeOrientation::Future, 0.0, kPi, tol);
        bool inside = true;
        for (int k = 1; k <= samples && inside; ++k) {
          inside = diamond_contains(d, seg.at(kPi * k / (samples + 1)), Openness::Open, tol);
        }
        if (inside) return seg;
      }
    }
  }
  return std::nullopt;
}

SphereDiamonds::SphereDiamonds(double radius, ChartFrame frame)
    : radius_(radius), frame_(std::move(frame)) {
  if (!(radius_ > 0.0) || !std::isfinite(radius_)) throw PreconditionError("sphere radius must be positive");
}

bool SphereDiamonds::in_inner(const Vec& w) const {
  const auto m = w.size() - 1;
  return w.head(m).norm() < radius_ - std::abs(w[m]);
}

bool SphereDiamonds::in_outer(const Vec& w) const {
  const auto m = w.size() - 1;
  return w.head(m).norm() > radius_ + std::abs(w[m]);
}

Diamond SphereDiamonds::inner_diamond() const {
  const Vec top = radius_ * basis_vector(frame_.dim(), frame_.dim() - 1);
  return Diamond::make(lift_to_chart(frame_, -top), lift_to_chart(frame_, top), frame_.tolerance());
}

SphereDiamonds diamonds_from_sphere(double radius, const ChartFrame& frame) {
  return SphereDiamonds(radius, frame);
}

Loxodromic::Loxodromic(double lambda, int n) : lambda_(lambda), n_(n) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) throw PreconditionError("loxodromic requires lambda > 1");
  if (n < 2) throw PreconditionError("loxodromic requires n >= 2");
}

Mat Loxodromic::matrix() const {
  Mat M = Mat::Identity(n_, n_);
  const double inv = 1.0 / lambda_;
  const int y = n_ - 2;
  const int z = n_ - 1;
  M(y, y) = 0.5 * (inv + lambda_);
  M(y, z) = 0.5 * (inv - lambda_);
  M(z, y) = 0.5 * (inv - lambda_);
  M(z, z) = 0.5 * (inv + lambda_);
  return M;
}

Vec Loxodromic::to_null(const Vec& w) {
  Vec out = w;
  const auto m = w.size();
  out[m - 2] = w[m - 2] + w[m - 1];
  out[m - 1] = w[m - 2] - w[m - 1];
  return out;
}

Vec Loxodromic::from_null(const Vec& w) {
  Vec out = w;
  const auto m = w.size();
  out[m - 2] = 0.5 * (w[m - 2] + w[m - 1]);
  out[m - 1] = 0.5 * (w[m - 2] - w[m - 1]);
  return out;
}

Vec Loxodromic::apply(const Vec& w) const {
  if (w.size() != n_) throw PreconditionError("loxodromic: dimension mismatch");
  Vec ab = to_null(w);
  ab[n_ - 2] /= lambda_;
  ab[n_ - 1] *= lambda_;
  return from_null(ab);
}

Loxodromic Loxodromic::power(int k) const {
  if (k < 1) throw PreconditionError("loxodromic power must be >= 1");
  return Loxodromic(std::pow(lambda_, k), n_);
}

Loxodromic loxodromic(double lambda, int n) { return Loxodromic(lambda, n); }

void CounterexampleScene::validate() const {
  if (n < 3) throw PreconditionError("scene: n must be >= 3");
  if (!(lambda > 1.0) || !std::isfinite(lambda)) throw PreconditionError("scene: lambda must be > 1");
  if (k < 0) throw PreconditionError("scene: k must be >= 0");
  if (!(r_inner > 0.0 && r_inner < 1.0)) throw PreconditionError("scene: r_inner must lie in (0, 1)");
  if (samples < 1) throw PreconditionError("scene: samples must be positive");
  if (knn < 1) throw PreconditionError("scene: knn must be >= 1");
}

namespace {

Mat gamma_matrix(const CounterexampleScene& sc) {
  return sc.k == 0 ? Mat::Identity(sc.n, sc.n) : Loxodromic(sc.lambda, sc.n).power(sc.k).matrix();
}

}  // namespace

SliceVerdicts counterexample_slices(const CounterexampleScene& sc) {
  sc.validate();
  const Mat M = gamma_matrix(sc);
  SliceVerdicts out;
  // x-plane: gamma_k is the identity there, so the slice is D cap D' itself.
  for (int i = 0; i < sc.n - 2; ++i) {
    const Vec e = basis_vector(sc.n, i);
    out.xplane_fixed_residual = std::max(out.xplane_fixed_residual, (M * e - e).cwiseAbs().maxCoeff());
  }
  out.xplane_inner = sc.r_inner;
  out.xplane_outer = 1.0;
  out.xplane_nonempty = out.xplane_inner < out.xplane_outer;
  // (y, z)-plane: D is max(|a|, |b|) < 1 and gamma_k rescales each null axis.
  Vec ea = Vec::Zero(sc.n);
  ea[sc.n - 2] = 1.0;
  Vec eb = Vec::Zero(sc.n);
  eb[sc.n - 1] = 1.0;
  out.yz_a_extent = std::abs(Loxodromic::to_null(M * Loxodromic::from_null(ea))[sc.n - 2]);
  out.yz_b_extent = std::abs(Loxodromic::to_null(M * Loxodromic::from_null(eb))[sc.n - 1]);
  // D' there is {ab > 0, min(|a|, |b|) > r_inner}.
  out.yz_plane_empty = std::min(out.yz_a_extent, out.yz_b_extent) <= sc.r_inner;
  return out;
}

CounterexampleReport counterexample_scene(const CounterexampleScene& sc) {
  CounterexampleReport rep;
  rep.scene = sc;
  rep.slices = counterexample_slices(sc);
  const Mat M = gamma_matrix(sc);

  Rng rng(sc.seed);
  const std::size_t cap = static_cast<std::size_t>(sc.samples) * 1000;
  int accepted = 0;
  while (accepted < sc.samples) {
    if (rep.drawn >= cap) throw PreconditionError("counterexample: rejection sampling exhausted");
    ++rep.drawn;
    const Vec w = rng.uniform_box(sc.n, 1.0);
    const auto m = w.size() - 1;
    if (!(w.head(m).norm() < 1.0 - std::abs(w[m]))) continue;
    ++accepted;
    const Vec image = M * w;
    if (image.head(m).norm() > sc.r_inner + std::abs(image[m])) rep.cloud.points.push_back(image);
  }
  rep.cloud.seed = sc.seed;
  std::ostringstream meta;
  meta << "counterexample n=" << sc.n << " lambda=" << sc.lambda << " k=" << sc.k
       << " r_inner=" << sc.r_inner << " samples=" << sc.samples << " seed=" << sc.seed;
  rep.cloud.meta = meta.str();
  rep.degenerate = rep.cloud.points.size() < 100;
  if (!rep.cloud.points.empty()) {
    rep.components = components(rep.cloud, sc.knn, KnnGraph::Symmetric);
    rep.mutual_components = components(rep.cloud, sc.knn, KnnGraph::Mutual).count;
  }
  return rep;
}

std::string_view to_string(IntersectionVerdict v) {
  switch (v) {
    case IntersectionVerdict::Convex: return "Convex";
    case IntersectionVerdict::NotConvex: return "NotConvex";
    case IntersectionVerdict::EmptyIntersection: return "EmptyIntersection";
  }
  return "?";
}

SharedVertexReport shared_vertex_intersection_check(const UniPoint& p, const UniPoint& q1,
                                                    const UniPoint& q2, int probes,
                                                    std::uint64_t seed, const Tolerance& tol) {
  if (probes < 1) throw PreconditionError("probes must be positive");
  if (p.dim() != q1.dim() || p.dim() != q2.dim()) throw PreconditionError("dimension mismatch");
  SharedVertexReport rep;
  if (classify(q1, p, tol).tag != Relation::ChronoFuture ||
      classify(q2, p, tol).tag != Relation::ChronoFuture) {
    return rep;
  }
  const Diamond d1 = Diamond::make(q1, p, tol);
  const Diamond d2 = Diamond::make(q2, p, tol);
  if (classify_diamond(d1, tol) == DiamondKind::ConjugateCylinder ||
      classify_diamond(d2, tol) == DiamondKind::ConjugateCylinder) {
    throw PreconditionError("diamond contains conjugate points");
  }
  // Mink_-(p): both diamonds are future cones there.
  const ChartFrame frame = frame_for(deck_sigma(p, -1), tol);
  const double t_lo = std::max(q1.t(), q2.t());
  const int n = p.dim();
  constexpr double kMargin = 1e-4;

  Rng rng(seed);
  auto draw = [&]() -> std::optional<Vec> {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      const double t = rng.uniform(t_lo, p.t());
      const double rho = std::min(kPi, p.t() - t);
      Vec u = rng.normal_vec(n);
      u -= u.dot(p.x()) * p.x();
      if (u.norm() < 1e-12) continue;
      u.normalize();
      const double theta = rho * rng.uniform();
      const UniPoint r((std::cos(theta) * p.x() + std::sin(theta) * u).normalized(), t, tol);
      if (classify(r, p, tol).margin <= kMargin) continue;
      const auto m1 = classify(q1, r, tol);
      const auto m2 = classify(q2, r, tol);
      if (m1.tag != Relation::ChronoFuture || m2.tag != Relation::ChronoFuture) continue;
      if (m1.margin <= kMargin || m2.margin <= kMargin) continue;
      return chart_coords(frame, project(r));
    }
    return std::nullopt;
  };

  for (int i = 0; i < probes; ++i) {
    const auto a = draw();
    const auto b = draw();
    if (!a || !b) break;
    ++rep.pairs_tested;
    const UniPoint mid = lift_to_chart(frame, 0.5 * (*a + *b));
    if (!diamond_contains(d1, mid, Openness::Open, tol) || !diamond_contains(d2, mid, Openness::Open, tol)) {
      ++rep.failures;
    }
  }
  if (rep.pairs_tested == 0) return rep;
  rep.verdict = rep.failures == 0 ? IntersectionVerdict::Convex : IntersectionVerdict::NotConvex;
  return rep;
}

}  // namespace ein
