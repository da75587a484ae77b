#pragma once

#include <Eigen/Dense>

#include <numbers>
#include <optional>

#include "ein/error.hpp"
#include "ein/tolerance.hpp"

namespace ein {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Quadratic form of R^{2,n}: q(u, v, x) = -u^2 - v^2 + |x|^2.
double q2n(const Vec& a);
/// Polar bilinear form of q2n.
double dot2n(const Vec& a, const Vec& b);

/// Point of the double cover Ein_{1,n-1}: a null ray of R^{2,n}.
///
/// The representative is normalized so that u^2 + v^2 = 1 and |x| = 1.
/// Rays keep their sign; `same_projective_point` compares up to sign.
class EinPoint {
 public:
  /// Normalizes `rep` by a positive scalar. Throws PreconditionError if
  /// `rep` is not null (relative to its size) or too short.
  static EinPoint from_ambient(const Vec& rep, const Tolerance& tol = {});

  const Vec& rep() const { return rep_; }
  /// Spatial dimension n (the sphere is S^{n-1}).
  int dim() const { return static_cast<int>(rep_.size()) - 2; }

 private:
  explicit EinPoint(Vec rep) : rep_(std::move(rep)) {}
  Vec rep_;
};

bool same_point(const EinPoint& a, const EinPoint& b, const Tolerance& tol = {});
bool same_projective_point(const EinPoint& a, const EinPoint& b, const Tolerance& tol = {});
/// Angle between the normalized representatives, as unit vectors of R^{n+2}.
double angular_gap(const EinPoint& a, const EinPoint& b);

/// Point (x, t) of the universal cover S^{n-1} x R.
class UniPoint {
 public:
  /// Throws PreconditionError when |x| differs from 1 by more than tau.
  UniPoint(Vec x, double t, const Tolerance& tol = {});

  const Vec& x() const { return x_; }
  double t() const { return t_; }
  int dim() const { return static_cast<int>(x_.size()); }

 private:
  Vec x_;
  double t_;
};

/// Unit basis vector e_i (0-based) of R^n.
Vec basis_vector(int n, int i);

EinPoint project(const UniPoint& p);

/// The lift of `e` whose time lies in the half-open window
/// (t_hint - pi, t_hint + pi].
UniPoint lift_near(const EinPoint& e, double t_hint);

/// sigma^k(x, t) = ((-1)^k x, t + k pi).
UniPoint deck_sigma(const UniPoint& p, int k);
/// delta^k(x, t) = (x, t + 2 k pi).
UniPoint deck_delta(const UniPoint& p, int k);

/// Returns k != 0 with q = sigma^k(p) within tau, if any.
std::optional<int> is_conjugate(const UniPoint& p, const UniPoint& q, const Tolerance& tol = {});

}  // namespace ein
