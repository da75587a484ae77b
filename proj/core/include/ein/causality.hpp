#pragma once

#include <string_view>

#include "ein/models.hpp"

namespace ein {

/// Great-circle distance on S^{n-1}, in [0, pi].
double sphere_distance(const Vec& x, const Vec& y, const Tolerance& tol = {});

enum class Relation { Equal, ChronoFuture, ChronoPast, NullFuture, NullPast, Spacelike };

std::string_view to_string(Relation r);
/// Relation of (q, p) given the relation of (p, q).
Relation time_reverse(Relation r);
bool is_causal_future(Relation r);  // ChronoFuture, NullFuture or Equal
bool is_causal_past(Relation r);

struct CausalRelation {
  Relation tag;
  /// |dt| - d: positive inside the cones, negative outside.
  double margin;
  /// Set when the call was decided inside the classification band.
  bool on_boundary;
};

/// Causal relation of q as seen from p, in the universal cover.
CausalRelation classify(const UniPoint& p, const UniPoint& q, const Tolerance& tol = {});

/// Vertex pair of a diamond J(future, past) = J^+(past) cap J^-(future).
struct Diamond {
  UniPoint past;
  UniPoint future;

  /// Throws PreconditionError unless future is causally after past.
  static Diamond make(UniPoint past, UniPoint future, const Tolerance& tol = {});
};

enum class Openness { Open, Closed };

bool diamond_contains(const Diamond& d, const UniPoint& r, Openness openness,
                      const Tolerance& tol = {});

enum class TimeOrientation { Future, Past };

/// Null geodesic s -> (cos s * x + sin s * u, t +/- s), s in [s_lo, s_hi].
struct PhotonSegment {
  UniPoint base;
  Vec tangent;
  double s_lo = 0.0;
  double s_hi = kPi;
  TimeOrientation orientation = TimeOrientation::Future;

  UniPoint at(double s) const;
};

/// Throws PreconditionError unless u is a unit vector orthogonal to p.x.
PhotonSegment photon_through(const UniPoint& p, const Vec& u, TimeOrientation orientation,
                             double s_lo = 0.0, double s_hi = kPi, const Tolerance& tol = {});

/// A segment is complete when it joins two conjugate points, i.e. has length pi.
bool is_complete_segment(const PhotonSegment& seg, const Tolerance& tol = {});

}  // namespace ein
