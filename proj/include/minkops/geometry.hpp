#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "minkops/config.hpp"

namespace minkops {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;

/// Raised on precondition violations (dimension mismatch, invalid input).
class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Validates a coordinate vector: length >= 2, finite entries.
void check_vec(const Vec& v, const char* what = "vector");

// ---------------------------------------------------------------------------
// Shapes
// ---------------------------------------------------------------------------

struct Point {
  Vec p;
};

/// Closed segment [a, b].
struct Segment {
  Vec a;
  Vec b;
};

/// Convex polygon in the plane, counterclockwise.
///
/// Normalized on construction: vertices closer than `vertex_merge` are merged,
/// collinear vertices dropped, and the cycle starts at the lexicographically
/// smallest vertex. One vertex is a point, two a segment.
class Polygon2 {
 public:
  Polygon2() = default;

  /// Throws GeometryError if the cycle is not convex and counterclockwise.
  static Polygon2 from_ccw(std::vector<Vec2> vertices);
  /// Convex hull of an arbitrary point set (monotone chain).
  static Polygon2 hull(std::vector<Vec2> points);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

  /// Edge vectors v_{i+1} - v_i in cyclic order (empty for a point).
  std::vector<Vec2> edges() const;

 private:
  explicit Polygon2(std::vector<Vec2> normalized) : vertices_(std::move(normalized)) {}
  std::vector<Vec2> vertices_;
};

/// Zonotope c + sum_i [-g_i, g_i].
///
/// Generators are stored with canonical sign (last nonzero coordinate
/// positive); zero generators are dropped and parallel ones merged.
class Zonotope {
 public:
  Zonotope() = default;
  Zonotope(Vec center, const std::vector<Vec>& generators);

  const Vec& center() const { return center_; }
  const std::vector<Vec>& generators() const { return generators_; }
  int dim() const { return static_cast<int>(center_.size()); }
  /// Generators as columns of an n x m matrix.
  Mat generator_matrix() const;

 private:
  Vec center_;
  std::vector<Vec> generators_;
};

/// Uniform operand: a point, a segment, a convex polygon, or a zonotope.
class Body {
 public:
  using Shape = std::variant<Point, Segment, Polygon2, Zonotope>;

  Body(Point p);
  Body(Segment s);
  Body(Polygon2 poly);
  Body(Zonotope z);

  const Shape& shape() const { return shape_; }
  int ambient_dim() const { return ambient_dim_; }

  bool is_point() const { return std::holds_alternative<Point>(shape_); }
  bool is_segment() const { return std::holds_alternative<Segment>(shape_); }
  bool is_polygon() const { return std::holds_alternative<Polygon2>(shape_); }
  bool is_zonotope() const { return std::holds_alternative<Zonotope>(shape_); }
  /// Point, segment or zonotope: admits a generator description.
  bool is_zonotopal() const { return !is_polygon(); }

  /// Type tag used by the JSON schema.
  std::string type_name() const;

 private:
  Shape shape_;
  int ambient_dim_ = 0;
};

// Convenience constructors.
Body make_point(const Vec& p);
Body make_segment(const Vec& a, const Vec& b);
/// Centered segment S_v = [-v, v].
Body make_centered_segment(const Vec& v);
Body make_polygon(std::vector<Vec2> ccw_vertices);
Body make_zonotope(const Vec& center, const std::vector<Vec>& generators);
/// Axis-parallel cube [-r, r]^n as a zonotope.
Body make_cube(int n, double r = 1.0);
/// Regular m-gon inscribed in the circle of radius r (disk approximation).
Body make_regular_polygon(int m, double r = 1.0);

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

/// Generator description of a zonotopal body (throws for polygons).
Zonotope to_zonotope(const Body& k);
/// Vertex description of a planar body; zonotopes are enumerated as zonogons.
Polygon2 to_polygon(const Body& k);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// h(K, u) = max <u, x> over K.
double support(const Body& k, const Vec& u);

/// Exact Minkowski sum. Planar polygons merge edge sequences by angle;
/// zonotopal operands concatenate generators.
Body minkowski_sum(const Body& a, const Body& b);

Body translate(const Body& k, const Vec& t);
/// lambda * K; a negative factor reflects through the origin.
Body scale(const Body& k, double lambda);
Body reflect(const Body& k);

/// n-dimensional volume. Exactly zero when the body is lower dimensional.
double volume(const Body& k);

/// DK = K + (-K), always centered at the origin.
Body difference_body(const Body& k);

/// Diagnostics collected by operations that warn instead of failing.
struct Diagnostics {
  std::vector<std::string> warnings;
};

/// gK. Throws on singular g; warns through `diag` when cond(g) > condition_warn.
Body linear_image(const Mat& g, const Body& k, Diagnostics* diag = nullptr);

/// Steiner point. Closed form on polygons, center for zonotopal bodies.
Vec steiner_point(const Body& k);

/// sup over unit u of |h(A,u) - h(B,u)|. Exact in the plane; for n > 2 the
/// supremum is taken over `hausdorff_directions(n)` plus the generator-derived
/// directions of both bodies.
double hausdorff_distance(const Body& a, const Body& b);

/// Deterministic direction set used by the n > 2 Hausdorff evaluation.
const std::vector<Vec>& hausdorff_directions(int n);

/// Dimension of the affine hull.
int dimension(const Body& k);

/// Largest support value over the unit sphere, max_u |h(K - c, u)| with c the
/// Steiner point; a scale used to normalize residuals.
double radius_about_steiner(const Body& k);

/// Outer unit normals of a planar body paired with edge lengths.
struct EdgeNormal {
  Vec2 normal;
  double length;
};
std::vector<EdgeNormal> edge_normals(const Polygon2& poly);

/// Canonical sign: last nonzero coordinate positive (zero vector unchanged).
Vec canonical_sign(const Vec& v);

/// Numerical rank of the columns of m with relative cutoff `rank`.
int numerical_rank(const Mat& m, double rel_tol = kDefaultTolerances.rank);

/// Unit direction at angle theta.
inline Vec2 unit_at(double theta) { return {std::cos(theta), std::sin(theta)}; }

}  // namespace minkops
