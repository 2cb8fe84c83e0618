#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "minkops/geometry.hpp"
#include "minkops/grassmannian.hpp"
#include "minkops/json_io.hpp"
#include "minkops/measures.hpp"

namespace minkops {

/// Descriptor/dimension mismatches and violated operator preconditions.
class OperatorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Discretized (rho, pi) pair on Gr(2,1).
///
/// Nodes theta_i in [0, pi) carry rho_i > 0 and a lift L_i of pi(theta_i);
/// the lift is strictly monotone with L(theta + pi) = L(theta) +- pi.
/// Between nodes the table is the cone-wise linear map sending
/// u(theta_i) to P_i = rho_i / 2 (cos L_i, sin L_i), which is how rho and pi
/// are interpolated. A linear map of the plane is reproduced exactly.
class RhoPiTable {
 public:
  /// Throws OperatorError when the invariants fail.
  RhoPiTable(std::vector<double> theta, std::vector<double> rho, std::vector<double> pi_lift);

  const std::vector<double>& theta() const { return theta_; }
  const std::vector<double>& rho() const { return rho_; }
  const std::vector<double>& pi_lift() const { return lift_; }
  std::size_t size() const { return theta_.size(); }
  /// +1 when the lift increases (orientation preserving), -1 otherwise.
  int orientation() const { return orientation_; }

  /// Interpolated segment image vector for the line at angle theta; its
  /// length is rho(theta)/2 and it spans pi(theta).
  Vec2 p_at(double theta) const;
  double rho_at(double theta) const { return 2.0 * p_at(theta).norm(); }
  LineDir pi_at(double theta) const;

  /// min and max of rho over the circle (8 samples per cell plus nodes).
  double m_phi() const;
  double big_m_phi() const;
  /// Smallest and largest |dL/dtheta| over the cells, including the wrap cell.
  std::pair<double, double> slope_range() const;

 private:
  std::vector<double> theta_, rho_, lift_;
  std::vector<Vec2> nodes_;
  int orientation_ = 1;
};

Json table_to_json(const RhoPiTable& t);
RhoPiTable table_from_json(const Json& j);
/// "theta,rho,pi_lift" rows.
std::string table_to_csv(const RhoPiTable& t);

/// Canonical segment-image function p: S_v -> S_{p(v)}, extended
/// 1-homogeneously, p(v) = p(-v), values in canonical sign.
class PFunction {
 public:
  /// p(v) = canonical(M v).
  static PFunction linear(const Mat& m);
  /// Planar samples p(u(theta_i)); between samples the direction is
  /// interpolated spherically and the magnitude linearly. Samples of opposite
  /// canonical sign are aligned before interpolating (see sign_ambiguous_cells).
  static PFunction table(std::vector<double> theta, std::vector<Vec2> values);
  /// Not serializable.
  static PFunction custom(int n, std::string name, std::function<Vec(const Vec&)> f);

  /// Throws OperatorError on v = 0 or p(v) = 0.
  Vec operator()(const Vec& v) const;
  int dim() const { return dim_; }
  const std::string& name() const { return name_; }

  /// Cells whose end samples had to be sign-flipped to interpolate, i.e.
  /// where p crosses the boundary of the canonical hemisphere.
  std::vector<std::size_t> sign_ambiguous_cells() const;

  Json to_json() const;
  static PFunction from_json(const Json& j);

 private:
  PFunction() = default;
  int dim_ = 2;
  std::string name_;
  std::optional<Mat> matrix_;
  std::vector<double> theta_;
  std::vector<Vec2> values_;
  std::function<Vec(const Vec&)> custom_;
};

class OperatorDescriptor;
using OperatorPtr = std::shared_ptr<const OperatorDescriptor>;

namespace op {
struct Identity {};    // K - st(K)
struct Reflection {};  // -K + st(K)
struct DiffBody {};    // K + (-K)
struct Blend {         // a (K - st K) + b (-K + st K)
  double a;
  double b;
};
struct Linear {        // g Inner(K)
  Mat g;
  OperatorPtr inner;
};
struct Compose {       // ops[0](ops[1](...(K)))
  std::vector<OperatorPtr> ops;
};
struct FromRhoPi {
  std::shared_ptr<const RhoPiTable> table;
};
struct FromP {
  std::shared_ptr<const PFunction> p;
};
struct Custom {        // arbitrary map, used for foils; not serializable
  std::string name;
  std::function<Body(const Body&)> fn;
};
}  // namespace op

/// Volume-constraint constants c V(K) <= V(Phi K) <= C V(K).
struct VcBracket {
  double c;
  double big_c;
};

/// Immutable description of a Minkowski-additive operator.
class OperatorDescriptor {
 public:
  using Kind = std::variant<op::Identity, op::Reflection, op::DiffBody, op::Blend, op::Linear, op::Compose,
                            op::FromRhoPi, op::FromP, op::Custom>;

  explicit OperatorDescriptor(Kind kind) : kind_(std::move(kind)) {}

  static OperatorDescriptor identity() { return OperatorDescriptor(op::Identity{}); }
  static OperatorDescriptor reflection() { return OperatorDescriptor(op::Reflection{}); }
  static OperatorDescriptor diff_body() { return OperatorDescriptor(op::DiffBody{}); }
  /// Throws OperatorError unless a, b >= 0 and a + b > 0.
  static OperatorDescriptor blend(double a, double b);
  static OperatorDescriptor linear(const Mat& g, const OperatorDescriptor& inner);
  static OperatorDescriptor from_rho_pi(RhoPiTable table);
  static OperatorDescriptor from_p(PFunction p);
  static OperatorDescriptor custom(std::string name, std::function<Body(const Body&)> fn);

  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  /// Constants known in closed form for dimension n (composites multiply).
  std::optional<VcBracket> declared_vc(int n) const;
  /// Structurally even and o-symmetrizing: Phi(-K) = Phi(K) = -Phi(K).
  bool is_even() const;

 private:
  Kind kind_;
};

/// Denotes K -> outer(inner(K)).
OperatorDescriptor compose(const OperatorDescriptor& outer, const OperatorDescriptor& inner);

Json operator_to_json(const OperatorDescriptor& op, std::optional<int> vc_dim = std::nullopt);
OperatorDescriptor operator_from_json(const Json& j);

/// Image of K under the operator. Points map to the origin.
Body apply(const OperatorDescriptor& op, const Body& k);

/// Exact zonotope sum_j S_{p(d_j)/2} over the generators d_j of DK, p given by
/// the table; one generator per edge direction of K.
Zonotope apply_rho_pi(const RhoPiTable& table, const Body& k);

/// Generators g_i of a centered zonotope mapped to p(g_i).
Zonotope apply_p_zonotope(const PFunction& p, const Zonotope& z);

/// w with op(S_v) = S_w, in canonical sign. Throws OperatorError when the image
/// of the segment is not a segment.
Vec p_of(const OperatorDescriptor& op, const Vec& v);
/// V_1(op(E cap B^n)), measured on the image.
double rho1_of(const OperatorDescriptor& op, const LineDir& e);
/// The line containing op(E cap B^n).
LineDir pi1_of(const OperatorDescriptor& op, const LineDir& e);

/// Klain function of K -> h(op K, u) at E from the segment data alone:
/// rho_1(E) |<u, v>| / 4 with v the unit vector spanning pi_1(E), which is
/// rho_1(E) V_1([-u, u] | pi_1(E)) / 8.
double klain_from_segment_data(const OperatorDescriptor& op, const Vec& u, const LineDir& e);

/// Samples rho_1 and pi_1 on theta_i = i pi / grid_size and builds the lift.
/// Throws OperatorError if the operator is not even/o-symmetrizing on a probe
/// body or if the sampled pi_1 is not injective.
RhoPiTable extract_table(const OperatorDescriptor& op, int grid_size);

}  // namespace minkops
