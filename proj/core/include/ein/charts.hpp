#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ein/causality.hpp"
#include "ein/models.hpp"

namespace ein {

// Flat Minkowski space R^{1,n-1}; coordinates are listed with time LAST,
// so the form is q(X) = X_0^2 + ... + X_{n-2}^2 - X_{n-1}^2.
double mink_dot(const Vec& a, const Vec& b);
double mink_q(const Vec& a);

/// Flat causal relation of Y as seen from X (same tags and band semantics as
/// `classify`; the margin is (dt - |dx|) signed by the time direction).
CausalRelation flat_relation(const Vec& x, const Vec& y, const Tolerance& tol = {});

/// Affine chart Mink_0(center) of the universal cover.
///
/// xi_inf represents the center (the point at infinity of the chart), xi_zero
/// the chart origin, and the block columns an orthonormal basis of
/// span(xi_inf, xi_zero)^perp with signature (+, ..., +, -): spatial vectors
/// first, the future unit timelike vector v0 last.
class ChartFrame {
 public:
  /// Builds a frame from explicit data and checks every invariant.
  ChartFrame(Vec xi_inf, Vec xi_zero, Mat block, UniPoint center, Tolerance tol = {});

  const Vec& xi_inf() const { return xi_inf_; }
  const Vec& xi_zero() const { return xi_zero_; }
  const Mat& block() const { return block_; }
  Vec v0() const { return block_.col(block_.cols() - 1); }
  const UniPoint& center() const { return center_; }
  const Tolerance& tolerance() const { return tol_; }
  int dim() const { return static_cast<int>(block_.cols()); }

  /// Ambient vector sum_i X_i * block_i.
  Vec to_ambient(const Vec& X) const;

 private:
  Vec xi_inf_;
  Vec xi_zero_;
  Mat block_;
  UniPoint center_;
  Tolerance tol_;
};

/// Canonical frame of Mink_0(p): xi_inf = project(p), origin at (-p.x, p.t).
ChartFrame frame_for(const UniPoint& p, const Tolerance& tol = {});

/// Unnormalized embedding xi_zero + X + q(X) xi_inf (pairs to -1/2 with xi_inf).
Vec embed_ambient(const ChartFrame& frame, const Vec& X);
EinPoint embed(const ChartFrame& frame, const Vec& X);

/// Inverse of `embed`. Throws NotInChart when <e, xi_inf> >= -tau.
Vec chart_coords(const ChartFrame& frame, const EinPoint& e);

/// The lift of embed(X) inside Mink_0(center).
UniPoint lift_to_chart(const ChartFrame& frame, const Vec& X);

/// Limit of embed(X0 + s w) as s -> +infinity, for a null chart vector w.
EinPoint photon_endpoint(const ChartFrame& frame, const Vec& X0, const Vec& w);

/// Degenerate affine hyperplane {Z : -<Z - p0, v> = s} with p0 the chart
/// origin and v a future null vector normalized by <v, v0> = -1. The plane
/// (v, s) is the translate of the one through p0 by s * v0.
struct NullHyperplane {
  Vec v;
  double s = 0.0;
};

/// Normalizes a future null direction to <v, v0> = -1. Throws on non-null or
/// past-directed input.
Vec normalize_null(const Vec& v, const Tolerance& tol = {});

/// Which component of the Penrose boundary a point lies on.
enum class Sheet { Future, Past };

struct BoundaryHyperplane {
  NullHyperplane plane;
  Sheet sheet;
};

/// Chart trace of the lightcone of a regular Penrose-boundary point.
BoundaryHyperplane boundary_to_hyperplane(const ChartFrame& frame, const EinPoint& y);
EinPoint hyperplane_to_boundary(const ChartFrame& frame, const BoundaryHyperplane& h);

/// Point q with s_j = -<q - p0, v_j> for every sample (least squares, normal
/// equations). Empty when the best fit leaves a residual above band. Throws
/// PreconditionError on a rank-deficient sample set.
std::optional<Vec> section_to_point(std::span<const NullHyperplane> samples,
                                    const Tolerance& tol = {});

struct SpacelikePlane {
  Vec point;
  Mat basis;  // columns orthonormal for the flat form
};

struct HyperboloidSheet {
  Vec center;
  /// Ratio between the construction's representative x' and xi_inf: sheet
  /// points satisfy q((Z - center) / scale) = -1.
  double scale = 1.0;
  /// +1 when the sheet lies in the future of its center, -1 in the past.
  int time_sign = 1;
};

/// A sphere avoiding the center that never meets its lightcone: points satisfy
/// q(Z - center) = radius^2 inside a spacelike affine plane.
struct SpacelikeSphere {
  Vec center;
  double radius = 1.0;
};

using QuadricSlice = std::variant<SpacelikePlane, HyperboloidSheet, SpacelikeSphere>;

/// Intersection of the chart with the conformal sphere cut out by the span of
/// `plane_basis` (columns), which must have signature (1, k). Spheres through
/// the center give a plane; the others a hyperboloid sheet when the
/// orthogonal of P in P + span(xi_inf) is timelike, a round sphere when it is
/// spacelike. A degenerate complement is rejected.
QuadricSlice sphere_chart_intersection(const ChartFrame& frame, const Mat& plane_basis);

/// Null rays of span(plane_basis) that fall in the chart, in chart
/// coordinates: the chart part of the conformal sphere, sampled.
std::vector<Vec> sample_sphere_in_chart(const ChartFrame& frame, const Mat& plane_basis,
                                        int count, std::uint64_t seed);

struct ConformalityCheck {
  double omega2;    // conformal factor of the pullback
  double residual;  // |J^T G J - omega2 eta| / |J^T G J|
};

/// Finite-difference pullback of the universal-cover metric through
/// lift_to_chart at X.
ConformalityCheck conformality_at(const ChartFrame& frame, const Vec& X, double h = 1e-5);

}  // namespace ein
