#pragma once

#include "minkops/geometry.hpp"
#include "minkops/json_io.hpp"

namespace minkops {

/// A line through the origin, stored as the unit vector whose last nonzero
/// coordinate is positive. `u` and `-u` give the same LineDir.
class LineDir {
 public:
  /// Throws GeometryError for the zero vector.
  explicit LineDir(const Vec& v);

  const Vec& u() const { return u_; }
  int dim() const { return static_cast<int>(u_.size()); }

 private:
  Vec u_;
};

inline LineDir canonicalize(const Vec& v) { return LineDir(v); }

/// Planar line at angle theta (mod pi).
LineDir line_at(double theta);
/// Angle of a planar line in [0, pi).
double line_angle(const LineDir& e);

/// k-dimensional subspace of R^n with an orthonormal basis (n x k).
class Subspace {
 public:
  /// Orthonormalizes the columns of `spanning`; throws if they are dependent.
  explicit Subspace(const Mat& spanning);

  const Mat& basis() const { return basis_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  /// Orthonormal basis of the orthogonal complement.
  Mat complement_basis() const;
  /// Coordinates of x in the basis.
  Vec coordinates(const Vec& x) const { return basis_.transpose() * x; }

 private:
  Mat basis_;
};

/// 2 sin(alpha / 2), alpha in [0, pi/2] the angle between the lines.
double dist_lines(const LineDir& e, const LineDir& f);

/// Largest principal angle theta, returned as 2 sin(theta / 2).
double dist_subspaces(const Subspace& f1, const Subspace& f2);

/// The two-unit-segment quantities for lines spanned by v1, v2.
struct TwoSegmentGeometry {
  double alpha;  // angle in (0, pi/2]
  double d;      // 2 sin(alpha / 2)
  double area;   // V_2([-v1,v1] + [-v2,v2]) = 4 sin(alpha)
  double ratio;  // d / area, in [1/4, sqrt(2)/4]
};

/// Throws GeometryError for parallel inputs.
TwoSegmentGeometry two_segment_geometry(const Vec& v1, const Vec& v2);

Json line_to_json(const LineDir& e);
LineDir line_from_json(const Json& j);
/// Subspaces serialize as a list of basis vectors.
Json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j);

}  // namespace minkops
