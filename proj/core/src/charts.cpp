#include "ein/charts.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "ein/random.hpp"

namespace ein {

namespace {

// Gram matrix of the columns of A for the (2, n) form.
Mat gram2n(const Mat& A) {
  Mat JA = A;
  JA.row(0) *= -1.0;
  JA.row(1) *= -1.0;
  return A.transpose() * JA;
}

Vec apply_j(Vec a) {
  a[0] = -a[0];
  a[1] = -a[1];
  return a;
}

// Chart components of an ambient vector lying in the block span.
Vec block_coords(const ChartFrame& f, const Vec& w) {
  Vec X = f.block().transpose() * apply_j(w);
  X[X.size() - 1] = -X[X.size() - 1];
  return X;
}

Vec eta(Vec v) {
  v[v.size() - 1] = -v[v.size() - 1];
  return v;
}

}  // namespace

double mink_dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size() || a.size() < 2) throw PreconditionError("mink_dot: dimension mismatch");
  const auto m = a.size() - 1;
  return a.head(m).dot(b.head(m)) - a[m] * b[m];
}

double mink_q(const Vec& a) { return mink_dot(a, a); }

CausalRelation flat_relation(const Vec& x, const Vec& y, const Tolerance& tol) {
  if (x.size() != y.size() || x.size() < 2) throw PreconditionError("flat_relation: dimension mismatch");
  const auto m = x.size() - 1;
  const double dt = y[m] - x[m];
  const double dx = (y.head(m) - x.head(m)).norm();
  const double margin = std::abs(dt) - dx;
  if (dx <= tol.tau && std::abs(dt) <= tol.tau) return {Relation::Equal, margin, false};
  if (std::abs(margin) <= tol.band) {
    return {dt >= 0.0 ? Relation::NullFuture : Relation::NullPast, margin, true};
  }
  if (margin > 0.0) return {dt > 0.0 ? Relation::ChronoFuture : Relation::ChronoPast, margin, false};
  return {Relation::Spacelike, margin, false};
}

ChartFrame::ChartFrame(Vec xi_inf, Vec xi_zero, Mat block, UniPoint center, Tolerance tol)
    : xi_inf_(std::move(xi_inf)),
      xi_zero_(std::move(xi_zero)),
      block_(std::move(block)),
      center_(std::move(center)),
      tol_(tol) {
  tol_.validate();
  const int n = center_.dim();
  if (xi_inf_.size() != n + 2 || xi_zero_.size() != n + 2 || block_.rows() != n + 2 ||
      block_.cols() != n) {
    throw PreconditionError("chart frame: inconsistent dimensions");
  }
  if (std::abs(q2n(xi_inf_)) > tol_.tau || std::abs(q2n(xi_zero_)) > tol_.tau) {
    throw PreconditionError("chart frame: xi_inf and xi_zero must be null");
  }
  if (std::abs(dot2n(xi_inf_, xi_zero_) + 0.5) > tol_.tau) {
    throw PreconditionError("chart frame: <xi_inf, xi_zero> must be -1/2");
  }
  if ((project(center_).rep() - xi_inf_).norm() > tol_.tau) {
    throw PreconditionError("chart frame: xi_inf does not represent the center");
  }
  Mat expected = Mat::Identity(n, n);
  expected(n - 1, n - 1) = -1.0;
  if ((gram2n(block_) - expected).cwiseAbs().maxCoeff() > tol_.tau) {
    throw PreconditionError("chart frame: block basis is not pseudo-orthonormal");
  }
  for (int i = 0; i < n; ++i) {
    if (std::abs(dot2n(block_.col(i), xi_inf_)) > tol_.tau ||
        std::abs(dot2n(block_.col(i), xi_zero_)) > tol_.tau) {
      throw PreconditionError("chart frame: block basis is not orthogonal to the null pair");
    }
  }
}

Vec ChartFrame::to_ambient(const Vec& X) const {
  if (X.size() != dim()) throw PreconditionError("chart point has the wrong dimension");
  return block_ * X;
}

ChartFrame frame_for(const UniPoint& p, const Tolerance& tol) {
  const int n = p.dim();
  const double c = std::cos(p.t());
  const double s = std::sin(p.t());
  Vec xi_inf(n + 2);
  xi_inf << c, s, p.x();
  Vec xi_zero(n + 2);
  xi_zero << c, s, -p.x();
  xi_zero /= 4.0;

  // Orthonormal basis of x^perp: trailing columns of a Householder QR of x.
  const Mat Q = Eigen::HouseholderQR<Mat>(Mat(p.x())).householderQ() * Mat::Identity(n, n);
  Mat block = Mat::Zero(n + 2, n);
  for (int i = 0; i < n - 1; ++i) block.block(2, i, n, 1) = Q.col(i + 1);
  block(0, n - 1) = -s;
  block(1, n - 1) = c;
  return ChartFrame(std::move(xi_inf), std::move(xi_zero), std::move(block), p, tol);
}

Vec embed_ambient(const ChartFrame& frame, const Vec& X) {
  return frame.xi_zero() + frame.to_ambient(X) + mink_q(X) * frame.xi_inf();
}

EinPoint embed(const ChartFrame& frame, const Vec& X) {
  return EinPoint::from_ambient(embed_ambient(frame, X), frame.tolerance());
}

Vec chart_coords(const ChartFrame& frame, const EinPoint& e) {
  if (e.dim() + 2 != frame.xi_inf().size()) throw PreconditionError("chart_coords: dimension mismatch");
  const double a = dot2n(e.rep(), frame.xi_inf());
  if (a >= -frame.tolerance().tau) throw NotInChart("point is not in the affine chart");
  const Vec y = e.rep() * (-0.5 / a);
  return block_coords(frame, y);
}

UniPoint lift_to_chart(const ChartFrame& frame, const Vec& X) {
  return lift_near(embed(frame, X), frame.center().t());
}

EinPoint photon_endpoint(const ChartFrame& frame, const Vec& X0, const Vec& w) {
  if (w.size() != frame.dim() || X0.size() != frame.dim()) {
    throw PreconditionError("photon_endpoint: dimension mismatch");
  }
  const double scale = w.squaredNorm();
  if (scale == 0.0) throw PreconditionError("photon_endpoint: zero direction");
  if (std::abs(mink_q(w)) > frame.tolerance().tau * scale) {
    throw PreconditionError("photon_endpoint: direction is not null");
  }
  return EinPoint::from_ambient(frame.to_ambient(w) + 2.0 * mink_dot(X0, w) * frame.xi_inf(),
                                frame.tolerance());
}

Vec normalize_null(const Vec& v, const Tolerance& tol) {
  if (v.size() < 2) throw PreconditionError("null direction too short");
  const double vt = v[v.size() - 1];
  if (!(vt > tol.tau)) throw PreconditionError("null direction must be future-directed");
  const Vec out = v / vt;
  if (std::abs(mink_q(out)) > tol.tau * out.squaredNorm()) {
    throw PreconditionError("direction is not null");
  }
  return out;
}

BoundaryHyperplane boundary_to_hyperplane(const ChartFrame& frame, const EinPoint& y) {
  const Tolerance& tol = frame.tolerance();
  if (y.dim() != frame.dim()) throw PreconditionError("boundary point dimension mismatch");
  const Vec& r = y.rep();
  if (std::abs(dot2n(r, frame.xi_inf())) > tol.tau) {
    throw PreconditionError("point is not on the lightcone of the chart center");
  }
  const double alpha = -2.0 * dot2n(r, frame.xi_zero());
  const double beta = -2.0 * dot2n(r, frame.xi_inf());
  const Vec W = r - alpha * frame.xi_inf() - beta * frame.xi_zero();
  const Vec Wc = block_coords(frame, W);
  const double wt = Wc[Wc.size() - 1];
  if (std::abs(wt) <= tol.tau) {
    throw PreconditionError("singular point of the lightcone: the chart center or its antipode");
  }
  BoundaryHyperplane h;
  h.plane.v = Wc / wt;
  h.plane.s = -alpha / (2.0 * wt);
  h.sheet = wt > 0.0 ? Sheet::Future : Sheet::Past;
  return h;
}

EinPoint hyperplane_to_boundary(const ChartFrame& frame, const BoundaryHyperplane& h) {
  const Vec v = normalize_null(h.plane.v, frame.tolerance());
  Vec y = frame.to_ambient(v) - 2.0 * h.plane.s * frame.xi_inf();
  if (h.sheet == Sheet::Past) y = -y;
  return EinPoint::from_ambient(y, frame.tolerance());
}

std::optional<Vec> section_to_point(std::span<const NullHyperplane> samples, const Tolerance& tol) {
  if (samples.empty()) throw PreconditionError("section_to_point: no samples");
  const auto n = samples.front().v.size();
  if (samples.size() < static_cast<std::size_t>(n)) {
    throw PreconditionError("section_to_point: fewer samples than the dimension");
  }
  Mat A(samples.size(), n);
  Vec b(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (samples[j].v.size() != n) throw PreconditionError("section_to_point: mixed dimensions");
    A.row(static_cast<Eigen::Index>(j)) = -eta(samples[j].v).transpose();
    b[static_cast<Eigen::Index>(j)] = samples[j].s;
  }
  const Mat N = A.transpose() * A;
  const Eigen::SelfAdjointEigenSolver<Mat> es(N);
  const double top = es.eigenvalues().maxCoeff();
  if (!(top > 0.0) || es.eigenvalues().minCoeff() <= tol.tau * top) {
    throw PreconditionError("section_to_point: rank-deficient sample set");
  }
  const Vec q = N.ldlt().solve(A.transpose() * b);
  if ((A * q - b).cwiseAbs().maxCoeff() > tol.band) return std::nullopt;
  return q;
}

namespace {

struct PseudoBasis {
  Vec f0;  // unit timelike
  Mat f;   // unit spacelike columns
};

PseudoBasis pseudo_orthonormal(const Mat& P, const Tolerance& tol) {
  const Eigen::SelfAdjointEigenSolver<Mat> es(gram2n(P));
  const Vec& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  int negatives = 0;
  for (int i = 0; i < ev.size(); ++i) {
    if (std::abs(ev[i]) <= tol.tau * std::max(scale, 1.0)) {
      throw PreconditionError("plane is degenerate for q_{2,n}");
    }
    if (ev[i] < 0.0) ++negatives;
  }
  if (negatives != 1 || ev.size() < 2) throw PreconditionError("plane is not Lorentzian");
  PseudoBasis out;
  out.f = Mat(P.rows(), ev.size() - 1);
  // Eigenvalues ascend, so the single negative one comes first.
  out.f0 = P * es.eigenvectors().col(0) / std::sqrt(-ev[0]);
  for (int i = 1; i < ev.size(); ++i) {
    out.f.col(i - 1) = P * es.eigenvectors().col(i) / std::sqrt(ev[i]);
  }
  return out;
}

void check_plane(const ChartFrame& frame, const Mat& P) {
  if (P.rows() != frame.xi_inf().size() || P.cols() < 2) {
    throw PreconditionError("plane basis has the wrong shape");
  }
}

}  // namespace

QuadricSlice sphere_chart_intersection(const ChartFrame& frame, const Mat& P) {
  check_plane(frame, P);
  const Tolerance& tol = frame.tolerance();
  pseudo_orthonormal(P, tol);
  const Mat M = gram2n(P);
  const Vec& x = frame.xi_inf();

  const Eigen::ColPivHouseholderQR<Mat> qr(P);
  const Vec euclid = P * qr.solve(x);
  if ((x - euclid).norm() <= tol.tau * x.norm()) {
    // Through the center: the constraints <iota(Z), m> = 0, m in P^perp, are affine.
    Mat PtJ = P.transpose();
    PtJ.col(0) *= -1.0;
    PtJ.col(1) *= -1.0;
    const Eigen::JacobiSVD<Mat> svd(PtJ, Eigen::ComputeFullV);
    const auto rank = svd.rank();
    const Mat perp = svd.matrixV().rightCols(P.rows() - rank);
    const auto m = perp.cols();
    Mat R(m, frame.dim());
    Vec rhs(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      const Vec mj = perp.col(j);
      const Vec cj = block_coords(frame, mj - (-2.0 * dot2n(mj, frame.xi_zero())) * x);
      R.row(j) = eta(cj).transpose();
      rhs[j] = -dot2n(frame.xi_zero(), mj);
    }
    const Eigen::CompleteOrthogonalDecomposition<Mat> cod(R);
    SpacelikePlane plane;
    plane.point = cod.solve(rhs);
    const Eigen::JacobiSVD<Mat> rsvd(R, Eigen::ComputeFullV);
    const Mat dirs = rsvd.matrixV().rightCols(frame.dim() - rsvd.rank());
    // Gram-Schmidt for the flat form (positive definite on these directions).
    plane.basis = Mat(frame.dim(), dirs.cols());
    for (Eigen::Index i = 0; i < dirs.cols(); ++i) {
      Vec u = dirs.col(i);
      for (Eigen::Index j = 0; j < i; ++j) u -= mink_dot(u, plane.basis.col(j)) * plane.basis.col(j);
      const double qn = mink_q(u);
      if (qn <= tol.tau) throw PreconditionError("slice direction is not spacelike");
      plane.basis.col(i) = u / std::sqrt(qn);
    }
    return plane;
  }

  // Avoiding the center: y spans the orthogonal of P inside P + span(xi_inf).
  const Vec proj = P * M.fullPivLu().solve(P.transpose() * apply_j(x));
  Vec y = x - proj;
  const double yy = q2n(y);
  if (std::abs(yy) <= tol.tau) throw PreconditionError("plane complement is degenerate");
  const double eps = yy < 0.0 ? -1.0 : 1.0;
  y /= std::sqrt(std::abs(yy));
  if (dot2n(y, x) > 0.0) y = -y;
  const double c = -1.0 / (2.0 * dot2n(x, y));
  const Vec center = chart_coords(frame, EinPoint::from_ambient(y + eps * c * x, tol));
  if (eps > 0.0) return SpacelikeSphere{center, c};

  HyperboloidSheet sheet;
  sheet.center = center;
  sheet.scale = c;
  const auto pts = sample_sphere_in_chart(frame, P, 1, 0);
  if (pts.empty()) throw PreconditionError("sphere does not meet the chart");
  sheet.time_sign = pts.front()[frame.dim() - 1] >= center[frame.dim() - 1] ? 1 : -1;
  return sheet;
}

std::vector<Vec> sample_sphere_in_chart(const ChartFrame& frame, const Mat& P, int count,
                                        std::uint64_t seed) {
  check_plane(frame, P);
  if (count < 0) throw PreconditionError("negative sample count");
  const Tolerance& tol = frame.tolerance();
  const PseudoBasis basis = pseudo_orthonormal(P, tol);
  const auto k = basis.f.cols();
  Rng rng(seed);
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  const int max_draws = 64 * std::max(count, 1) + 1024;
  for (int draw = 0; draw < max_draws && static_cast<int>(out.size()) < count; ++draw) {
    const Vec u = rng.unit_vector(static_cast<int>(k) < 2 ? 1 : static_cast<int>(k));
    Vec w = basis.f0;
    if (k == 1) {
      w += (rng.uniform() < 0.5 ? -1.0 : 1.0) * basis.f.col(0);
    } else {
      w += basis.f * u;
    }
    const double a = dot2n(w, frame.xi_inf());
    if (std::abs(a) <= 1e-6 * w.norm()) continue;
    if (a > 0.0) w = -w;
    out.push_back(chart_coords(frame, EinPoint::from_ambient(w, tol)));
  }
  return out;
}

ConformalityCheck conformality_at(const ChartFrame& frame, const Vec& X, double h) {
  const int n = frame.dim();
  if (X.size() != n) throw PreconditionError("conformality_at: dimension mismatch");
  if (!(h > 0.0)) throw PreconditionError("conformality_at: step must be positive");
  const UniPoint base = lift_to_chart(frame, X);
  auto local = [&](const Vec& Y) {
    const UniPoint u = lift_near(embed(frame, Y), base.t());
    Vec out(n + 1);
    out << u.x(), u.t();
    return out;
  };
  Mat J(n + 1, n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = h;
    J.col(i) = (local(X + e) - local(X - e)) / (2.0 * h);
  }
  Vec g = Vec::Ones(n + 1);
  g[n] = -1.0;
  const Mat pull = J.transpose() * g.asDiagonal() * J;
  Vec e = Vec::Ones(n);
  e[n - 1] = -1.0;
  const double omega2 = (e.asDiagonal() * pull).trace() / n;
  const Mat eta_m = e.asDiagonal();
  const double residual = (pull - omega2 * eta_m).norm() / pull.norm();
  return {omega2, residual};
}

}  // namespace ein
