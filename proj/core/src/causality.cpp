#include "ein/causality.hpp"

#include <cmath>

namespace ein {

namespace {

void require_unit(const Vec& x, const Tolerance& tol) {
  if (std::abs(x.norm() - 1.0) > tol.tau) {
    throw PreconditionError("sphere_distance expects unit vectors");
  }
}

}  // namespace

double sphere_distance(const Vec& x, const Vec& y, const Tolerance& tol) {
  if (x.size() != y.size()) throw PreconditionError("sphere_distance: dimension mismatch");
  require_unit(x, tol);
  require_unit(y, tol);
  return 2.0 * std::atan2((x - y).norm(), (x + y).norm());
}

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Equal: return "Equal";
    case Relation::ChronoFuture: return "ChronoFuture";
    case Relation::ChronoPast: return "ChronoPast";
    case Relation::NullFuture: return "NullFuture";
    case Relation::NullPast: return "NullPast";
    case Relation::Spacelike: return "Spacelike";
  }
  return "?";
}

Relation time_reverse(Relation r) {
  switch (r) {
    case Relation::ChronoFuture: return Relation::ChronoPast;
    case Relation::ChronoPast: return Relation::ChronoFuture;
    case Relation::NullFuture: return Relation::NullPast;
    case Relation::NullPast: return Relation::NullFuture;
    default: return r;
  }
}

bool is_causal_future(Relation r) {
  return r == Relation::ChronoFuture || r == Relation::NullFuture || r == Relation::Equal;
}

bool is_causal_past(Relation r) {
  return r == Relation::ChronoPast || r == Relation::NullPast || r == Relation::Equal;
}

CausalRelation classify(const UniPoint& p, const UniPoint& q, const Tolerance& tol) {
  const double d = sphere_distance(p.x(), q.x(), tol);
  const double dt = q.t() - p.t();
  const double margin = std::abs(dt) - d;
  if (d <= tol.tau && std::abs(dt) <= tol.tau) return {Relation::Equal, margin, false};
  if (std::abs(margin) <= tol.band) {
    return {dt >= 0.0 ? Relation::NullFuture : Relation::NullPast, margin, true};
  }
  if (margin > 0.0) return {dt > 0.0 ? Relation::ChronoFuture : Relation::ChronoPast, margin, false};
  return {Relation::Spacelike, margin, false};
}

Diamond Diamond::make(UniPoint past, UniPoint future, const Tolerance& tol) {
  if (past.dim() != future.dim()) throw PreconditionError("diamond vertices differ in dimension");
  if (!is_causal_future(classify(past, future, tol).tag)) {
    throw PreconditionError("diamond future vertex is not causally after the past vertex");
  }
  return Diamond{std::move(past), std::move(future)};
}

bool diamond_contains(const Diamond& d, const UniPoint& r, Openness openness, const Tolerance& tol) {
  const Relation from_past = classify(d.past, r, tol).tag;
  const Relation to_future = classify(r, d.future, tol).tag;
  if (openness == Openness::Open) {
    return from_past == Relation::ChronoFuture && to_future == Relation::ChronoFuture;
  }
  return is_causal_future(from_past) && is_causal_future(to_future);
}

UniPoint PhotonSegment::at(double s) const {
  const double sign = orientation == TimeOrientation::Future ? 1.0 : -1.0;
  Vec x = std::cos(s) * base.x() + std::sin(s) * tangent;
  x.normalize();
  return UniPoint(std::move(x), base.t() + sign * s);
}

PhotonSegment photon_through(const UniPoint& p, const Vec& u, TimeOrientation orientation,
                             double s_lo, double s_hi, const Tolerance& tol) {
  if (u.size() != p.dim()) throw PreconditionError("photon tangent has the wrong dimension");
  if (std::abs(u.norm() - 1.0) > tol.tau || std::abs(u.dot(p.x())) > tol.tau) {
    throw PreconditionError("photon tangent must be a unit vector orthogonal to the base point");
  }
  if (!(s_lo >= 0.0 && s_hi >= s_lo)) throw PreconditionError("photon parameter range is invalid");
  return PhotonSegment{p, u, s_lo, s_hi, orientation};
}

bool is_complete_segment(const PhotonSegment& seg, const Tolerance& tol) {
  return std::abs((seg.s_hi - seg.s_lo) - kPi) <= tol.tau;
}

}  // namespace ein
