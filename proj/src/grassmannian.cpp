#include "minkops/grassmannian.hpp"

#include <cmath>
#include <numbers>

namespace minkops {

LineDir::LineDir(const Vec& v) {
  check_vec(v, "line direction");
  const double len = v.norm();
  if (len == 0.0) throw GeometryError("canonicalize: zero vector has no direction");
  u_ = canonical_sign(v / len);
}

LineDir line_at(double theta) {
  const Vec2 u = unit_at(theta);
  Vec v(2);
  v << u.x(), u.y();
  return LineDir(v);
}

double line_angle(const LineDir& e) {
  if (e.dim() != 2) throw GeometryError("line_angle: planar lines only");
  // Canonical representatives have y > 0, or y == 0 and x > 0.
  double a = std::atan2(e.u()(1), e.u()(0));
  if (a >= std::numbers::pi) a -= std::numbers::pi;
  if (a < 0.0) a += std::numbers::pi;
  return a;
}

Subspace::Subspace(const Mat& spanning) {
  if (spanning.rows() < 2 || spanning.cols() < 1 || spanning.cols() >= spanning.rows())
    throw GeometryError("subspace: need 1 <= k <= n-1 spanning vectors in R^n, n >= 2");
  if (!spanning.allFinite()) throw GeometryError("subspace: non-finite basis vector");
  if (numerical_rank(spanning) < spanning.cols()) throw GeometryError("subspace: spanning vectors are dependent");
  Eigen::HouseholderQR<Mat> qr(spanning);
  basis_ = qr.householderQ() * Mat::Identity(spanning.rows(), spanning.cols());
}

Mat Subspace::complement_basis() const {
  const auto n = basis_.rows();
  Eigen::HouseholderQR<Mat> qr(basis_);
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - basis_.cols());
}

double dist_lines(const LineDir& e, const LineDir& f) {
  if (e.dim() != f.dim()) throw GeometryError("dist_lines: dimension mismatch");
  // |u - v| with the sign making <u, v> >= 0 equals 2 sin(alpha / 2).
  return std::min((e.u() - f.u()).norm(), (e.u() + f.u()).norm());
}

double dist_subspaces(const Subspace& f1, const Subspace& f2) {
  if (f1.ambient_dim() != f2.ambient_dim() || f1.dim() != f2.dim())
    throw GeometryError("dist_subspaces: subspaces must share n and k");
  // sin(theta_max) is the spectral norm of the part of F2 outside F1.
  const Mat outside = f2.basis() - f1.basis() * (f1.basis().transpose() * f2.basis());
  Eigen::JacobiSVD<Mat> svd(outside);
  const double s = std::min(1.0, svd.singularValues()(0));
  const double c = std::sqrt(std::max(0.0, 1.0 - s * s));
  // 2 sin(theta/2) = sqrt(2 (1 - cos theta)) = sqrt(2 s^2 / (1 + cos theta)).
  return std::sqrt(2.0 * s * s / (1.0 + c));
}

TwoSegmentGeometry two_segment_geometry(const Vec& v1_in, const Vec& v2_in) {
  if (v1_in.size() != v2_in.size()) throw GeometryError("two_segment_geometry: dimension mismatch");
  check_vec(v1_in, "v1");
  check_vec(v2_in, "v2");
  const Vec v1 = v1_in.normalized();
  Vec v2 = v2_in.normalized();
  if (v1.dot(v2) < 0.0) v2 = -v2;
  const double c = std::min(1.0, v1.dot(v2));
  // sin(alpha) from the Gram determinant, accurate near alpha = 0.
  const double s = std::sqrt(std::max(0.0, (v1 - c * v2).squaredNorm()));
  if (s == 0.0) throw GeometryError("two_segment_geometry: parallel lines, ratio undefined");
  TwoSegmentGeometry out{};
  out.alpha = std::atan2(s, c);
  out.d = (v1 - v2).norm();
  out.area = 4.0 * s;
  out.ratio = out.d / out.area;
  return out;
}

Json line_to_json(const LineDir& e) { return Json::array({vec_to_json(e.u())}); }

LineDir line_from_json(const Json& j) {
  if (j.is_array() && !j.empty() && j[0].is_array()) {
    if (j.size() != 1) throw GeometryError("line json: expected one basis vector");
    return LineDir(vec_from_json(j[0]));
  }
  return LineDir(vec_from_json(j));
}

Json subspace_to_json(const Subspace& s) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < s.basis().cols(); ++i) out.push_back(vec_to_json(s.basis().col(i)));
  return out;
}

Subspace subspace_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw GeometryError("subspace json: expected a list of basis vectors");
  std::vector<Vec> cols;
  for (const auto& c : j) cols.push_back(vec_from_json(c));
  Mat m(cols[0].size(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (cols[i].size() != m.rows()) throw GeometryError("subspace json: ragged basis");
    m.col(static_cast<Eigen::Index>(i)) = cols[i];
  }
  return Subspace(m);
}

}  // namespace minkops
