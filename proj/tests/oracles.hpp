// Independent reference computations for the tests. Nothing here calls the
// library's geometry kernels; inputs are raw coordinates.
#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace oracle {

using Vec = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Signed area of a closed polygon.
double shoelace(const std::vector<Vec2>& cycle);

/// Convex hull by gift wrapping, counterclockwise, collinear points dropped.
std::vector<Vec2> gift_wrap(const std::vector<Vec2>& points);

/// All 2^m points c + sum s_i g_i with s_i = +-1.
std::vector<Vec> zonotope_corners(const Vec& center, const std::vector<Vec>& gens);

/// Area of a zonogon from its corner hull.
double zonogon_area(const Vec& center, const std::vector<Vec>& gens);

/// Volume of the convex hull of points in R^3 by facet enumeration over all
/// triples (cone decomposition from the centroid).
double hull_volume_3d(const std::vector<Vec3>& points);

/// Volume of a zonotope in R^2 or R^3 through the hull of its corners.
double zonotope_volume(const Vec& center, const std::vector<Vec>& gens);

/// n! V(S_1..S_n) by inclusion-exclusion over lambda in {0,1}^n of
/// V(sum lambda_i S_i), each volume from the corner hull.
double mixed_volume_segments_polarized(const std::vector<Vec>& gs);

/// Support function of a point set.
double support(const std::vector<Vec>& pts, const Vec& u);

/// Steiner point of a planar vertex set by midpoint quadrature of
/// (1/pi) int u h(K, u) dtheta with `nodes` nodes.
Vec2 steiner_quadrature(const std::vector<Vec2>& vertices, int nodes);

/// max over `nodes` equally spaced planar directions of |h_A - h_B|.
double hausdorff_dense(const std::vector<Vec2>& a, const std::vector<Vec2>& b, int nodes);

/// Largest over x in S(F1) of min over y in S(F2) |x - y|, both spheres
/// sampled with `samples` points (spans given by orthonormal columns).
double maxmin_subspace_distance(const Eigen::MatrixXd& f1, const Eigen::MatrixXd& f2, int samples);

/// Whether some choice of one direction per family gives |det| > tol.
bool has_transversal(const std::vector<std::vector<Vec>>& families, double tol);

/// min and max over a dense sweep of d/dtheta of the angle of g u(theta).
std::pair<double, double> projective_distortion(const Eigen::Matrix2d& g, int nodes);

}  // namespace oracle
