#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ein/charts.hpp"

namespace ein {

// Regular domains are handled in chart coordinates of an affine chart with
// origin p0 = 0 and unit timelike v0 = e_{n-1}; boundary data are null
// hyperplanes (v, s) of that chart.

enum class Orientation { FutureRegular, PastRegular };

std::string_view to_string(Orientation o);

struct BoundaryData {
  std::vector<NullHyperplane> planes;
  Orientation orientation = Orientation::FutureRegular;
  int dim = 3;

  /// Throws PreconditionError on a non-normalized plane or wrong dimension.
  void validate(const Tolerance& tol = {}) const;
};

/// phi_q(v) = -<q - p0, v>: level of the hyperplane of direction v through q.
double support(const Vec& q, const Vec& v, const Tolerance& tol = {});

/// True iff the Penrose-boundary point of `plane` is causally related to q.
bool shadow_contains(const Vec& q, const NullHyperplane& plane,
                     Orientation orientation = Orientation::FutureRegular,
                     const Tolerance& tol = {});

enum class Verdict { Interior, Boundary, Exterior };

std::string_view to_string(Verdict v);

struct Membership {
  Verdict verdict;
  /// Smallest signed margin over the boundary pieces (+inf when there are none).
  double margin;
};

struct RegularityVerdict {
  bool regular = false;
  /// sup s (future-regular) or inf s (past-regular) of the boundary data.
  std::optional<double> bound;
  /// A point whose shadow misses every plane, when regular.
  std::optional<Vec> witness;
};

/// Finite-plane criterion: always regular, with bound max s (resp. min s).
RegularityVerdict is_regular(const BoundaryData& data);

/// A boundary family indexed by 0..truncation-1, known only through samples.
struct SampledBoundary {
  std::function<NullHyperplane(std::size_t)> plane;
  std::size_t truncation = 0;
  Orientation orientation = Orientation::FutureRegular;
  int dim = 3;
  /// Declared by the producer: the s values have no finite bound.
  bool declared_unbounded = false;
};

RegularityVerdict is_regular(const SampledBoundary& family);

class RegularDomain {
 public:
  /// Throws PreconditionError when the data fail validation.
  explicit RegularDomain(BoundaryData data, const Tolerance& tol = {});

  const BoundaryData& data() const { return data_; }
  const Tolerance& tolerance() const { return tol_; }
  int dim() const { return data_.dim; }
  bool proper() const { return proper_; }

 private:
  BoundaryData data_;
  Tolerance tol_;
  bool proper_;
};

Membership member(const RegularDomain& omega, const Vec& q);

/// At least two pairwise non-parallel planes.
bool is_proper(const BoundaryData& data, const Tolerance& tol = {});

/// Two-plane proper domain. Throws PreconditionError on parallel directions.
RegularDomain misner(const Vec& v1, const Vec& v2, double s1, double s2,
                     Orientation orientation = Orientation::FutureRegular,
                     const Tolerance& tol = {});

/// Unit vectors of S^{n-2}: `count` equally spaced angles when n = 3,
/// otherwise a spiral set closed under the antipodal map.
std::vector<Vec> direction_grid(int n, int count);

/// Future-regular domain bounded by the planes (u, level) for u in `dirs`.
RegularDomain polyhedral_cone(const std::vector<Vec>& dirs, double level = 0.0,
                              const Tolerance& tol = {});

struct ExitRay {
  Vec direction;                   // null chart vector with time component -1 (or +1)
  std::optional<double> parameter; // empty when the ray never leaves the domain
  Vec point;                       // p + parameter * direction, when bounded
  int plane = -1;                  // index of the plane reached first
};

/// Exit point of the null ray p + s * w, s > 0 (exact affine root).
ExitRay exit_along(const RegularDomain& omega, const Vec& p, const Vec& w);

/// Exit points along the null rays from p toward the boundary side of the
/// domain (the past for future-regular domains). Throws PreconditionError
/// unless p is interior.
std::vector<ExitRay> lambda_minus(const RegularDomain& omega, const Vec& p, int directions);

struct PipReport {
  int probes = 0;
  int excluded = 0;    // probes inside a tolerance band
  int mismatches = 0;
  int inside = 0;      // verdict A true and agreed
  int outside = 0;     // verdict A false and agreed
};

struct PipOptions {
  int directions = 64;
  double box_half_width = 2.0;
};

/// Compares I^-(p) cap Omega with the set of q << p that are not causally
/// related to the exit points of lambda_minus.
PipReport pip_reconstruction_check(const RegularDomain& omega, const Vec& p, int probes,
                                   std::uint64_t seed, const PipOptions& opts = {});

/// Ternary membership oracle for an open region of the chart.
using Region = std::function<Membership(const Vec&)>;

Region as_region(const RegularDomain& omega);
Region chronological_future_region(const Vec& p0, const Tolerance& tol = {});
Region chronological_past_region(const Vec& p, const Tolerance& tol = {});
Region intersect(Region a, Region b);

struct ConvexityOptions {
  Vec box_center;               // defaults to the origin
  double box_half_width = 2.0;  // where anchor probes are drawn
  int anchor_probes = 4096;
  double max_ray_length = 1e3;
  double bisection_tol = 1e-12;
};

/// Pair of boundary points whose chord is spacelike and whose midpoint is
/// again on the boundary, if one is found within `trials` random chords.
std::optional<std::pair<Vec, Vec>> strict_convexity_witness(const Region& region, int dim,
                                                            int trials, std::uint64_t seed,
                                                            const ConvexityOptions& opts = {},
                                                            const Tolerance& tol = {});

/// Endpoint in the double cover of a causal curve given by ordered samples.
/// Throws PreconditionError when consecutive samples are not causally
/// ordered in the given direction. Empty when the tail does not converge.
std::optional<EinPoint> causal_endpoint(const std::vector<UniPoint>& curve,
                                        TimeOrientation direction = TimeOrientation::Future,
                                        const Tolerance& tol = {});

}  // namespace ein
