#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>

#include "ein/causality.hpp"
#include "ein/charts.hpp"
#include "ein/connectivity.hpp"

namespace ein {

enum class DiamondKind { EmptyInterior, MinkowskiLike, NullHalfSpace, AffineChart, ConjugateCylinder };

std::string_view to_string(DiamondKind k);

/// Taxonomy of a diamond from its vertex separation: with d the sphere
/// distance of the vertices and dt their time gap, the interior is empty for
/// dt <= d, contains a conjugate pair for dt > 2 pi - d, and at dt = 2 pi - d
/// is an affine chart (d = 0) or a null half-space of one (d > 0).
DiamondKind classify_diamond(const Diamond& d, const Tolerance& tol = {});

/// Brute-force search for a pair (r, sigma(r)) inside the open diamond.
/// Directions run over a density x density grid adapted to the vertices; the
/// admissible times for each direction come from the chronological
/// inequalities, and every candidate is confirmed with diamond_contains.
std::optional<std::pair<UniPoint, UniPoint>> find_conjugate_pair(const Diamond& d, int grid_density,
                                                                 const Tolerance& tol = {});

/// Brute-force search for a length-pi photon whose endpoints lie in the
/// closed diamond (within band) and whose interior lies in the open diamond.
/// Base points run over the past cone of the past vertex.
std::optional<PhotonSegment> contains_complete_photon(const Diamond& d, int grid_density,
                                                      const Tolerance& tol = {});

/// The two diamonds cut out by the boundary sphere of the ball of radius r in
/// the {time = 0} slice of a chart.
class SphereDiamonds {
 public:
  SphereDiamonds(double radius, ChartFrame frame);

  double radius() const { return radius_; }
  const ChartFrame& frame() const { return frame_; }
  /// Cauchy development of the open ball: |w_spatial| < r - |w_time|.
  bool in_inner(const Vec& w) const;
  /// Points not causally related to the closed ball: |w_spatial| > r + |w_time|.
  bool in_outer(const Vec& w) const;
  /// The inner diamond as a vertex pair of the universal cover.
  Diamond inner_diamond() const;

 private:
  double radius_;
  ChartFrame frame_;
};

SphereDiamonds diamonds_from_sphere(double radius, const ChartFrame& frame);

/// Boost diag(I, 1/lambda, lambda) in null coordinates a = y + z, b = y - z,
/// acting on chart coordinates (x_1 .. x_{n-2}, y, z).
class Loxodromic {
 public:
  Loxodromic(double lambda, int n);

  double lambda() const { return lambda_; }
  int dim() const { return n_; }
  Mat matrix() const;
  Vec apply(const Vec& w) const;
  Loxodromic power(int k) const;

  static Vec to_null(const Vec& w);    // (x, y, z) -> (x, a, b)
  static Vec from_null(const Vec& w);  // (x, a, b) -> (x, y, z)

 private:
  double lambda_;
  int n_;
};

Loxodromic loxodromic(double lambda, int n);

struct CounterexampleScene {
  int n = 3;
  double lambda = 2.0;
  int k = 3;
  double r_inner = 0.5;
  int samples = 20000;
  std::uint64_t seed = 42;
  int knn = 10;

  void validate() const;
};

struct SliceVerdicts {
  /// {y = z = 0} slice of gamma_k D cap D' as an annulus inner < |x| < outer.
  double xplane_inner = 0.0;
  double xplane_outer = 0.0;
  bool xplane_nonempty = false;
  /// max deviation of gamma_k from the identity on the x-plane.
  double xplane_fixed_residual = 0.0;
  /// (y, z)-plane slice in null coordinates is {|a| < amax, |b| < bmax} cap
  /// {ab > 0, min(|a|, |b|) > r_inner}.
  double yz_a_extent = 0.0;
  double yz_b_extent = 0.0;
  bool yz_plane_empty = false;
};

struct CounterexampleReport {
  CounterexampleScene scene;
  SliceVerdicts slices;
  SampleCloud cloud;        // gamma_k D cap D', sampled
  Components components;    // symmetric kNN graph
  std::size_t mutual_components = 0;
  std::size_t drawn = 0;    // rejection draws used to fill D
  bool degenerate = false;  // fewer than 100 points survived the filter
};

SliceVerdicts counterexample_slices(const CounterexampleScene& sc);
CounterexampleReport counterexample_scene(const CounterexampleScene& sc);

enum class IntersectionVerdict { Convex, NotConvex, EmptyIntersection };

std::string_view to_string(IntersectionVerdict v);

struct SharedVertexReport {
  IntersectionVerdict verdict = IntersectionVerdict::EmptyIntersection;
  int pairs_tested = 0;
  int failures = 0;
};

/// Midpoint-closure check of I(p, q1) cap I(p, q2) in the chart Mink_-(p).
/// Throws PreconditionError if either diamond contains conjugate points.
SharedVertexReport shared_vertex_intersection_check(const UniPoint& p, const UniPoint& q1,
                                                    const UniPoint& q2, int probes,
                                                    std::uint64_t seed, const Tolerance& tol = {});

}  // namespace ein
