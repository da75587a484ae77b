#include "ein/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ein/random.hpp"

namespace ein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double orientation_sign(Orientation o) { return o == Orientation::FutureRegular ? 1.0 : -1.0; }

void check_plane(const NullHyperplane& h, int dim, const Tolerance& tol) {
  if (h.v.size() != dim) throw PreconditionError("plane direction has the wrong dimension");
  if (!h.v.allFinite() || !std::isfinite(h.s)) throw PreconditionError("plane has non-finite data");
  if (std::abs(h.v[dim - 1] - 1.0) > tol.tau) throw PreconditionError("plane direction is not normalized: <v, v0> != -1");
  if (std::abs(mink_q(h.v)) > tol.tau * h.v.squaredNorm()) throw PreconditionError("plane direction is not null");
}

Verdict verdict_of(double margin, const Tolerance& tol) {
  if (margin > tol.tau) return Verdict::Interior;
  if (margin >= -tol.tau) return Verdict::Boundary;
  return Verdict::Exterior;
}

}  // namespace

std::string_view to_string(Orientation o) {
  return o == Orientation::FutureRegular ? "FutureRegular" : "PastRegular";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Interior: return "Interior";
    case Verdict::Boundary: return "Boundary";
    case Verdict::Exterior: return "Exterior";
  }
  return "?";
}

void BoundaryData::validate(const Tolerance& tol) const {
  if (dim < 2) throw PreconditionError("boundary data: dimension must be >= 2");
  for (const auto& h : planes) check_plane(h, dim, tol);
}

double support(const Vec& q, const Vec& v, const Tolerance& tol) {
  if (q.size() != v.size()) throw PreconditionError("support: dimension mismatch");
  check_plane(NullHyperplane{v, 0.0}, static_cast<int>(v.size()), tol);
  return -mink_dot(q, v);
}

bool shadow_contains(const Vec& q, const NullHyperplane& plane, Orientation orientation,
                     const Tolerance& tol) {
  const double phi = support(q, plane.v, tol);
  return orientation == Orientation::FutureRegular ? plane.s >= phi - tol.tau : plane.s <= phi + tol.tau;
}

RegularityVerdict is_regular(const BoundaryData& data) {
  RegularityVerdict out;
  out.regular = true;
  const double sign = orientation_sign(data.orientation);
  Vec witness = Vec::Zero(data.dim);
  if (!data.planes.empty()) {
    double bound = data.planes.front().s;
    for (const auto& h : data.planes) bound = sign > 0 ? std::max(bound, h.s) : std::min(bound, h.s);
    out.bound = bound;
    // phi_{c v0}(v) = c for every normalized v.
    witness[data.dim - 1] = bound + sign;
  }
  out.witness = witness;
  return out;
}

RegularityVerdict is_regular(const SampledBoundary& family) {
  RegularityVerdict out;
  if (family.declared_unbounded) return out;
  BoundaryData data;
  data.orientation = family.orientation;
  data.dim = family.dim;
  data.planes.reserve(family.truncation);
  for (std::size_t j = 0; j < family.truncation; ++j) data.planes.push_back(family.plane(j));
  data.validate();
  return is_regular(data);
}

RegularDomain::RegularDomain(BoundaryData data, const Tolerance& tol)
    : data_(std::move(data)), tol_(tol) {
  tol_.validate();
  data_.validate(tol_);
  proper_ = is_proper(data_, tol_);
}

Membership member(const RegularDomain& omega, const Vec& q) {
  const auto& data = omega.data();
  if (q.size() != data.dim) throw PreconditionError("member: dimension mismatch");
  const double sign = orientation_sign(data.orientation);
  double margin = kInf;
  for (const auto& h : data.planes) margin = std::min(margin, sign * (-mink_dot(q, h.v) - h.s));
  return {verdict_of(margin, omega.tolerance()), margin};
}

bool is_proper(const BoundaryData& data, const Tolerance& tol) {
  for (std::size_t i = 0; i < data.planes.size(); ++i) {
    for (std::size_t j = i + 1; j < data.planes.size(); ++j) {
      if ((data.planes[i].v - data.planes[j].v).norm() > tol.band) return true;
    }
  }
  return false;
}

RegularDomain misner(const Vec& v1, const Vec& v2, double s1, double s2, Orientation orientation,
                     const Tolerance& tol) {
  if (v1.size() != v2.size()) throw PreconditionError("misner: dimension mismatch");
  const Vec a = normalize_null(v1, tol);
  const Vec b = normalize_null(v2, tol);
  if ((a - b).norm() <= tol.band) throw PreconditionError("misner: directions are parallel");
  BoundaryData data;
  data.planes = {{a, s1}, {b, s2}};
  data.orientation = orientation;
  data.dim = static_cast<int>(a.size());
  return RegularDomain(std::move(data), tol);
}

std::vector<Vec> direction_grid(int n, int count) {
  if (n < 2) throw PreconditionError("direction_grid: n must be >= 2");
  if (count < 2) throw PreconditionError("direction_grid: count must be >= 2");
  const int m = n - 1;
  std::vector<Vec> out;
  if (m == 1) {
    out.push_back(Vec::Constant(1, 1.0));
    out.push_back(Vec::Constant(1, -1.0));
    return out;
  }
  if (m == 2) {
    for (int i = 0; i < count; ++i) {
      const double a = kTwoPi * i / count;
      Vec u(2);
      u << std::cos(a), std::sin(a);
      out.push_back(u);
    }
    return out;
  }
  const int half = (count + 1) / 2;
  if (m == 3) {
    // Fibonacci spiral on the upper half, mirrored.
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < half; ++i) {
      const double z = 1.0 - (i + 0.5) / half;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec u(3);
      u << r * std::cos(golden * i), r * std::sin(golden * i), z;
      out.push_back(u);
    }
  } else {
    Rng rng(0x5eedULL + static_cast<std::uint64_t>(m));
    for (int i = 0; i < half; ++i) out.push_back(rng.unit_vector(m));
  }
  const std::size_t upper = out.size();
  for (std::size_t i = 0; i < upper; ++i) out.push_back(-out[i]);
  return out;
}

RegularDomain polyhedral_cone(const std::vector<Vec>& dirs, double level, const Tolerance& tol) {
  if (dirs.empty()) throw PreconditionError("polyhedral_cone: no directions");
  BoundaryData data;
  data.dim = static_cast<int>(dirs.front().size()) + 1;
  for (const auto& u : dirs) {
    if (u.size() + 1 != data.dim) throw PreconditionError("polyhedral_cone: mixed dimensions");
    Vec v(data.dim);
    v << u.normalized(), 1.0;
    data.planes.push_back({v, level});
  }
  return RegularDomain(std::move(data), tol);
}

ExitRay exit_along(const RegularDomain& omega, const Vec& p, const Vec& w) {
  const auto& data = omega.data();
  if (p.size() != data.dim || w.size() != data.dim) throw PreconditionError("exit_along: dimension mismatch");
  const double sign = orientation_sign(data.orientation);
  const double tau = omega.tolerance().tau;
  ExitRay out;
  out.direction = w;
  double best = kInf;
  for (std::size_t i = 0; i < data.planes.size(); ++i) {
    const auto& h = data.planes[i];
    // margin(s) = m0 - s * rate is affine in s.
    const double m0 = sign * (-mink_dot(p, h.v) - h.s);
    const double rate = sign * mink_dot(w, h.v);
    if (rate <= tau * w.norm()) continue;
    const double root = m0 / rate;
    if (root > 0.0 && root < best) {
      best = root;
      out.plane = static_cast<int>(i);
    }
  }
  if (out.plane >= 0) {
    out.parameter = best;
    out.point = p + best * w;
  }
  return out;
}

std::vector<ExitRay> lambda_minus(const RegularDomain& omega, const Vec& p, int directions) {
  if (member(omega, p).verdict != Verdict::Interior) throw PreconditionError("lambda_minus: p is not interior");
  const double sign = orientation_sign(omega.data().orientation);
  std::vector<ExitRay> out;
  for (const Vec& u : direction_grid(omega.dim(), directions)) {
    Vec w(omega.dim());
    w << u, 1.0;
    out.push_back(exit_along(omega, p, -sign * w));
  }
  return out;
}

PipReport pip_reconstruction_check(const RegularDomain& omega, const Vec& p, int probes,
                                   std::uint64_t seed, const PipOptions& opts) {
  if (probes < 1) throw PreconditionError("probes must be positive");
  const Tolerance& tol = omega.tolerance();
  const auto exits = lambda_minus(omega, p, opts.directions);
  const auto& data = omega.data();
  const int n = omega.dim();
  const double sign = orientation_sign(data.orientation);

  PipReport rep;
  rep.probes = probes;
  for (int i = 0; i < probes; ++i) {
    Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
    const Vec q = p + rng.uniform_box(n, opts.box_half_width);
    const Membership mq = member(omega, q);
    const CausalRelation to_p = flat_relation(q, p, tol);
    bool band_hit = std::abs(mq.margin) <= tol.band || to_p.on_boundary || to_p.tag == Relation::Equal;
    const bool before_p = to_p.tag == Relation::ChronoFuture;

    // Exit points: the sampled ones plus, per plane, the ray closest to q's cone.
    std::vector<Vec> points;
    for (const auto& e : exits) {
      if (e.parameter) points.push_back(e.point);
    }
    const Vec delta = p - q;
    for (std::size_t j = 0; j < data.planes.size() && before_p; ++j) {
      const auto& h = data.planes[j];
      const double m = sign * (-mink_dot(p, h.v) - h.s);
      const Vec u = 2.0 * m * delta + mink_q(delta) * h.v;
      const Vec ubar = u.head(n - 1);
      if (ubar.norm() <= tol.tau) continue;
      Vec w(n);
      w << ubar.normalized(), 1.0;
      const ExitRay e = exit_along(omega, p, -sign * w);
      if (e.parameter) points.push_back(e.point);
    }
    bool related = false;
    for (const auto& e : points) {
      const CausalRelation r = flat_relation(q, e, tol);
      if (r.on_boundary) band_hit = true;
      if (r.tag != Relation::Spacelike) related = true;
    }
    if (band_hit) {
      ++rep.excluded;
      continue;
    }
    const bool a = before_p && mq.verdict == Verdict::Interior;
    const bool b = before_p && !related;
    if (a != b) {
      ++rep.mismatches;
    } else if (a) {
      ++rep.inside;
    } else {
      ++rep.outside;
    }
  }
  return rep;
}

Region as_region(const RegularDomain& omega) {
  return [omega](const Vec& q) { return member(omega, q); };
}

Region chronological_future_region(const Vec& p0, const Tolerance& tol) {
  return [p0, tol](const Vec& q) {
    const auto m = q.size() - 1;
    const double margin = (q[m] - p0[m]) - (q.head(m) - p0.head(m)).norm();
    return Membership{verdict_of(margin, tol), margin};
  };
}

Region chronological_past_region(const Vec& p, const Tolerance& tol) {
  return [p, tol](const Vec& q) {
    const auto m = q.size() - 1;
    const double margin = (p[m] - q[m]) - (q.head(m) - p.head(m)).norm();
    return Membership{verdict_of(margin, tol), margin};
  };
}

Region intersect(Region a, Region b) {
  return [a = std::move(a), b = std::move(b)](const Vec& q) {
    const Membership x = a(q);
    const Membership y = b(q);
    Verdict v = Verdict::Boundary;
    if (x.verdict == Verdict::Exterior || y.verdict == Verdict::Exterior) {
      v = Verdict::Exterior;
    } else if (x.verdict == Verdict::Interior && y.verdict == Verdict::Interior) {
      v = Verdict::Interior;
    }
    return Membership{v, std::min(x.margin, y.margin)};
  };
}

std::optional<std::pair<Vec, Vec>> strict_convexity_witness(const Region& region, int dim, int trials,
                                                            std::uint64_t seed,
                                                            const ConvexityOptions& opts,
                                                            const Tolerance& tol) {
  if (dim < 2 || trials < 0) throw PreconditionError("strict_convexity_witness: bad arguments");
  const Vec center = opts.box_center.size() == dim ? opts.box_center : Vec(Vec::Zero(dim));
  Rng rng(seed);

  std::vector<Vec> interior;
  for (int i = 0; i < opts.anchor_probes; ++i) {
    const Vec z = center + rng.uniform_box(dim, opts.box_half_width);
    if (region(z).verdict == Verdict::Interior) interior.push_back(z);
  }
  if (interior.empty()) throw PreconditionError("strict_convexity_witness: no interior point in the box");
  Vec anchor = Vec::Zero(dim);
  for (const auto& z : interior) anchor += z;
  anchor /= static_cast<double>(interior.size());
  if (region(anchor).verdict != Verdict::Interior) {
    anchor = *std::min_element(interior.begin(), interior.end(), [&](const Vec& a, const Vec& b) {
      return (a - anchor).squaredNorm() < (b - anchor).squaredNorm();
    });
  }

  auto boundary_along = [&](const Vec& dir) -> std::optional<Vec> {
    double lo = 0.0;
    double hi = 1.0;
    while (region(anchor + hi * dir).verdict == Verdict::Interior) {
      lo = hi;
      hi *= 2.0;
      if (hi > opts.max_ray_length) return std::nullopt;
    }
    while (hi - lo > opts.bisection_tol) {
      const double mid = 0.5 * (lo + hi);
      if (region(anchor + mid * dir).verdict == Verdict::Interior) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (mid == lo && mid == hi) break;
    }
    return Vec(anchor + hi * dir);
  };

  for (int t = 0; t < trials; ++t) {
    const auto a = boundary_along(rng.unit_vector(dim));
    const auto b = boundary_along(rng.unit_vector(dim));
    if (!a || !b) continue;
    if (mink_q(*a - *b) <= tol.band) continue;
    const Membership mid = region(0.5 * (*a + *b));
    if (std::abs(mid.margin) <= tol.tau) return std::make_pair(*a, *b);
  }
  return std::nullopt;
}

std::optional<EinPoint> causal_endpoint(const std::vector<UniPoint>& curve, TimeOrientation direction,
                                        const Tolerance& tol) {
  if (curve.size() < 4) throw PreconditionError("causal_endpoint: need at least four samples");
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const Relation r = classify(curve[i], curve[i + 1], tol).tag;
    const bool ok = direction == TimeOrientation::Future ? is_causal_future(r) : is_causal_past(r);
    if (!ok) throw PreconditionError("causal_endpoint: samples are not causally ordered");
  }
  const int n = curve.front().dim();
  auto coords = [&](std::size_t i) {
    Vec y(n + 1);
    y << curve[i].x(), curve[i].t();
    return y;
  };
  // Index doubling on the tail: gaps g0 = |y_N - y_N/2|, g1 = |y_N/2 - y_N/4|.
  const std::size_t last = curve.size() - 1;
  const Vec y0 = coords(last);
  const Vec y1 = coords(last / 2);
  const Vec y2 = coords(last / 4);
  const double g0 = (y0 - y1).norm();
  const double g1 = (y1 - y2).norm();
  Vec limit = y0;
  if (g0 > 0.0) {
    if (!(g1 > 0.0)) return std::nullopt;
    const double rho = g0 / g1;
    if (rho >= 1.0) return std::nullopt;
    limit = y0 + (y0 - y1) * (rho / (1.0 - rho));
  }
  Vec x = limit.head(n);
  if (std::abs(x.norm() - 1.0) > tol.band) return std::nullopt;
  return project(UniPoint(x.normalized(), limit[n], tol));
}

}  // namespace ein
