#include "ein/models.hpp"

#include <cmath>
#include <string>

namespace ein {

void Tolerance::validate() const {
  if (!(tau > 0.0 && tau < band && band < 1.0)) {
    throw PreconditionError("tolerance requires 0 < tau < band < 1");
  }
}

double q2n(const Vec& a) { return dot2n(a, a); }

double dot2n(const Vec& a, const Vec& b) {
  if (a.size() != b.size() || a.size() < 4) {
    throw PreconditionError("ambient vectors must share a dimension n + 2 >= 4");
  }
  const auto n = a.size() - 2;
  return -a[0] * b[0] - a[1] * b[1] + a.tail(n).dot(b.tail(n));
}

EinPoint EinPoint::from_ambient(const Vec& rep, const Tolerance& tol) {
  if (rep.size() < 4) throw PreconditionError("ambient vector needs n + 2 >= 4 entries");
  if (!rep.allFinite()) throw PreconditionError("ambient vector has non-finite entries");
  const auto n = rep.size() - 2;
  const double time_norm = rep.head(2).norm();
  const double space_norm = rep.tail(n).norm();
  if (time_norm <= 0.0 || space_norm <= 0.0) {
    throw PreconditionError("not a null ray: zero time or space part");
  }
  if (std::abs(time_norm - space_norm) > tol.tau * std::max(time_norm, space_norm)) {
    throw PreconditionError("not a null ray: q_{2,n} = " + std::to_string(q2n(rep)));
  }
  Vec out(rep.size());
  out.head(2) = rep.head(2) / time_norm;
  out.tail(n) = rep.tail(n) / space_norm;
  return EinPoint(std::move(out));
}

bool same_point(const EinPoint& a, const EinPoint& b, const Tolerance& tol) {
  return a.dim() == b.dim() && (a.rep() - b.rep()).norm() <= tol.tau;
}

bool same_projective_point(const EinPoint& a, const EinPoint& b, const Tolerance& tol) {
  return a.dim() == b.dim() &&
         std::min((a.rep() - b.rep()).norm(), (a.rep() + b.rep()).norm()) <= tol.tau;
}

double angular_gap(const EinPoint& a, const EinPoint& b) {
  const Vec ua = a.rep().normalized();
  const Vec ub = b.rep().normalized();
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

UniPoint::UniPoint(Vec x, double t, const Tolerance& tol) : x_(std::move(x)), t_(t) {
  if (x_.size() < 2) throw PreconditionError("sphere dimension n must be >= 2");
  if (!x_.allFinite() || !std::isfinite(t_)) throw PreconditionError("non-finite point");
  if (std::abs(x_.norm() - 1.0) > tol.tau) {
    throw PreconditionError("spatial part of a universal-cover point must be a unit vector");
  }
}

Vec basis_vector(int n, int i) {
  Vec e = Vec::Zero(n);
  e[i] = 1.0;
  return e;
}

EinPoint project(const UniPoint& p) {
  Vec rep(p.dim() + 2);
  rep[0] = std::cos(p.t());
  rep[1] = std::sin(p.t());
  rep.tail(p.dim()) = p.x();
  return EinPoint::from_ambient(rep);
}

UniPoint lift_near(const EinPoint& e, double t_hint) {
  const Vec& rep = e.rep();
  const double theta = std::atan2(rep[1], rep[0]);
  // Largest branch theta + 2 pi k that does not exceed t_hint + pi.
  const double k = std::floor((t_hint + kPi - theta) / kTwoPi);
  double t = theta + kTwoPi * k;
  if (t <= t_hint - kPi) t += kTwoPi;
  if (t > t_hint + kPi) t -= kTwoPi;
  return UniPoint(rep.tail(e.dim()), t);
}

UniPoint deck_sigma(const UniPoint& p, int k) {
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return UniPoint(sign * p.x(), p.t() + k * kPi);
}

UniPoint deck_delta(const UniPoint& p, int k) { return UniPoint(p.x(), p.t() + k * kTwoPi); }

std::optional<int> is_conjugate(const UniPoint& p, const UniPoint& q, const Tolerance& tol) {
  if (p.dim() != q.dim()) return std::nullopt;
  const double steps = std::round((q.t() - p.t()) / kPi);
  if (steps == 0.0 || std::abs(steps) > 1e9) return std::nullopt;
  const int k = static_cast<int>(steps);
  if (std::abs(q.t() - p.t() - k * kPi) > tol.tau) return std::nullopt;
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  if ((q.x() - sign * p.x()).norm() > tol.tau) return std::nullopt;
  return k;
}

}  // namespace ein
