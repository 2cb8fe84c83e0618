#include "minkops/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace minkops {

namespace {

constexpr double kPi = std::numbers::pi;

bool finite_all(const std::vector<double>& xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

// theta reduced into [theta0, theta0 + pi).
double reduce_angle(double theta, double theta0) {
  double t = std::fmod(theta - theta0, kPi);
  if (t < 0.0) t += kPi;
  if (t >= kPi) t = 0.0;
  return theta0 + t;
}

// Cell [lo, hi) containing the reduced angle; index n-1 is the wrap cell.
std::size_t cell_of(const std::vector<double>& theta, double t) {
  auto it = std::upper_bound(theta.begin(), theta.end(), t);
  return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - theta.begin()) - 1));
}

Vec to_vec(const Vec2& v) { return Vec(v); }

std::string num(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// RhoPiTable
// ---------------------------------------------------------------------------

RhoPiTable::RhoPiTable(std::vector<double> theta, std::vector<double> rho, std::vector<double> pi_lift)
    : theta_(std::move(theta)), rho_(std::move(rho)), lift_(std::move(pi_lift)) {
  const std::size_t n = theta_.size();
  if (n < 2) throw OperatorError("rho/pi table: at least two nodes required");
  if (rho_.size() != n || lift_.size() != n) throw OperatorError("rho/pi table: column lengths differ");
  if (!finite_all(theta_) || !finite_all(rho_) || !finite_all(lift_))
    throw OperatorError("rho/pi table: non-finite entry");
  if (theta_.front() < 0.0 || theta_.back() >= kPi) throw OperatorError("rho/pi table: theta outside [0, pi)");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(theta_[i + 1] > theta_[i])) throw OperatorError("rho/pi table: theta not strictly increasing");
  for (double r : rho_)
    if (!(r > 0.0)) throw OperatorError("rho/pi table: rho must be positive");

  orientation_ = lift_[1] > lift_[0] ? 1 : -1;
  const double s = orientation_;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(s * (lift_[i + 1] - lift_[i]) > 0.0))
      throw OperatorError("rho/pi table: pi lift not strictly monotone (pi not injective)");
  if (!(s * (lift_.front() + s * kPi - lift_.back()) > 0.0))
    throw OperatorError("rho/pi table: pi lift does not close up within one half turn");

  nodes_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) nodes_.push_back(0.5 * rho_[i] * unit_at(lift_[i]));
}

Vec2 RhoPiTable::p_at(double theta) const {
  const std::size_t n = theta_.size();
  const double t = reduce_angle(theta, theta_.front());
  const std::size_t i = cell_of(theta_, t);
  const bool wrap = i + 1 == n;
  const double lo = theta_[i];
  const double hi = wrap ? theta_.front() + kPi : theta_[i + 1];
  const Vec2& p_lo = nodes_[i];
  const Vec2 p_hi = wrap ? Vec2(-nodes_.front()) : nodes_[i + 1];
  // u(t) = a u(lo) + b u(hi) exactly.
  const double s = std::sin(hi - lo);
  const double a = std::sin(hi - t) / s;
  const double b = std::sin(t - lo) / s;
  return a * p_lo + b * p_hi;
}

LineDir RhoPiTable::pi_at(double theta) const { return LineDir(to_vec(p_at(theta))); }

namespace {

std::pair<double, double> rho_extremes(const RhoPiTable& t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  const auto& th = t.theta();
  for (std::size_t i = 0; i < th.size(); ++i) {
    const double a = th[i];
    const double b = i + 1 < th.size() ? th[i + 1] : th.front() + kPi;
    for (int k = 0; k < 8; ++k) {
      const double r = t.rho_at(a + (b - a) * k / 8.0);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  return {lo, hi};
}

}  // namespace

double RhoPiTable::m_phi() const { return rho_extremes(*this).first; }
double RhoPiTable::big_m_phi() const { return rho_extremes(*this).second; }

std::pair<double, double> RhoPiTable::slope_range() const {
  const std::size_t n = theta_.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool wrap = i + 1 == n;
    const double dt = (wrap ? theta_.front() + kPi : theta_[i + 1]) - theta_[i];
    const double dl = (wrap ? lift_.front() + orientation_ * kPi : lift_[i + 1]) - lift_[i];
    const double slope = std::abs(dl) / dt;
    lo = std::min(lo, slope);
    hi = std::max(hi, slope);
  }
  return {lo, hi};
}

Json table_to_json(const RhoPiTable& t) {
  Json j;
  j["theta"] = t.theta();
  j["rho"] = t.rho();
  j["pi_lift"] = t.pi_lift();
  return j;
}

RhoPiTable table_from_json(const Json& j) {
  if (!j.is_object()) throw OperatorError("rho/pi table: expected an object");
  for (const char* key : {"theta", "rho", "pi_lift"})
    if (!j.contains(key) || !j.at(key).is_array()) throw OperatorError(std::string("rho/pi table: missing array '") + key + "'");
  return RhoPiTable(j.at("theta").get<std::vector<double>>(), j.at("rho").get<std::vector<double>>(),
                    j.at("pi_lift").get<std::vector<double>>());
}

std::string table_to_csv(const RhoPiTable& t) {
  std::ostringstream out;
  out << "theta,rho,pi_lift\n";
  for (std::size_t i = 0; i < t.size(); ++i)
    out << num(t.theta()[i]) << ',' << num(t.rho()[i]) << ',' << num(t.pi_lift()[i]) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// PFunction
// ---------------------------------------------------------------------------

PFunction PFunction::linear(const Mat& m) {
  if (m.rows() != m.cols() || m.rows() < 2) throw OperatorError("p function: matrix must be square, n >= 2");
  if (!m.allFinite()) throw OperatorError("p function: non-finite matrix");
  if (numerical_rank(m) < m.rows()) throw OperatorError("p function: singular matrix sends a segment to a point");
  PFunction f;
  f.dim_ = static_cast<int>(m.rows());
  f.name_ = "p_linear";
  f.matrix_ = m;
  return f;
}

PFunction PFunction::table(std::vector<double> theta, std::vector<Vec2> values) {
  const std::size_t n = theta.size();
  if (n < 2 || values.size() != n) throw OperatorError("p table: need at least two samples with matching lengths");
  if (!finite_all(theta) || theta.front() < 0.0 || theta.back() >= kPi)
    throw OperatorError("p table: theta outside [0, pi)");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(theta[i + 1] > theta[i])) throw OperatorError("p table: theta not strictly increasing");
  for (auto& v : values) {
    if (!v.allFinite() || v.norm() == 0.0) throw OperatorError("p table: samples must be finite and nonzero");
    v = Vec2(canonical_sign(to_vec(v)));
  }
  PFunction f;
  f.dim_ = 2;
  f.name_ = "p_table";
  f.theta_ = std::move(theta);
  f.values_ = std::move(values);
  return f;
}

PFunction PFunction::custom(int n, std::string name, std::function<Vec(const Vec&)> fn) {
  if (n < 2) throw OperatorError("p function: dimension must be >= 2");
  PFunction f;
  f.dim_ = n;
  f.name_ = std::move(name);
  f.custom_ = std::move(fn);
  return f;
}

Vec PFunction::operator()(const Vec& v) const {
  if (v.size() != dim_) throw OperatorError("p function: dimension mismatch");
  const double len = v.norm();
  if (!(len > 0.0) || !v.allFinite()) throw OperatorError("p function: argument must be a finite nonzero vector");
  Vec out;
  if (matrix_) {
    out = *matrix_ * v;
  } else if (custom_) {
    out = custom_(v);
  } else {
    const std::size_t n = theta_.size();
    const double t = reduce_angle(std::atan2(v(1), v(0)), theta_.front());
    const std::size_t i = cell_of(theta_, t);
    const bool wrap = i + 1 == n;
    const double lo = theta_[i];
    const double hi = wrap ? theta_.front() + kPi : theta_[i + 1];
    const Vec2& pa = values_[i];
    Vec2 pb = wrap ? values_.front() : values_[i + 1];
    if (pa.dot(pb) < 0.0) pb = -pb;
    const double frac = (t - lo) / (hi - lo);
    const double ra = pa.norm();
    const double rb = pb.norm();
    const double a0 = std::atan2(pa.y(), pa.x());
    const double omega = std::atan2(pa.x() * pb.y() - pa.y() * pb.x(), pa.dot(pb));
    const double mag = (1.0 - frac) * ra + frac * rb;
    out = to_vec(len * mag * unit_at(a0 + frac * omega));
  }
  if (out.size() != dim_ || !out.allFinite() || out.norm() == 0.0)
    throw OperatorError("p function: value must be a finite nonzero vector of the same dimension");
  return canonical_sign(out);
}

std::vector<std::size_t> PFunction::sign_ambiguous_cells() const {
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const Vec2& b = i + 1 < values_.size() ? values_[i + 1] : values_.front();
    if (values_[i].dot(b) < 0.0) cells.push_back(i);
  }
  return cells;
}

Json PFunction::to_json() const {
  Json j;
  if (matrix_) {
    j["kind"] = "p_linear";
    j["matrix"] = mat_to_json(*matrix_);
  } else if (!custom_) {
    j["kind"] = "p_table";
    j["theta"] = theta_;
    Json ps = Json::array();
    for (const auto& v : values_) ps.push_back(vec_to_json(to_vec(v)));
    j["p"] = ps;
  } else {
    throw OperatorError("p function '" + name_ + "' is not serializable");
  }
  return j;
}

PFunction PFunction::from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "p_linear") return linear(mat_from_json(j.at("matrix")));
  if (kind == "p_table") {
    std::vector<Vec2> values;
    for (const auto& p : j.at("p")) {
      const Vec v = vec_from_json(p);
      if (v.size() != 2) throw OperatorError("p table: samples must be planar");
      values.emplace_back(v(0), v(1));
    }
    return table(j.at("theta").get<std::vector<double>>(), std::move(values));
  }
  throw OperatorError("unknown p function kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Descriptors
// ---------------------------------------------------------------------------

OperatorDescriptor OperatorDescriptor::blend(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0 || a + b <= 0.0)
    throw OperatorError("blend: weights must satisfy a, b >= 0 and a + b > 0");
  return OperatorDescriptor(op::Blend{a, b});
}

OperatorDescriptor OperatorDescriptor::linear(const Mat& g, const OperatorDescriptor& inner) {
  if (g.rows() != g.cols() || g.rows() < 2) throw OperatorError("linear: matrix must be square, n >= 2");
  if (!g.allFinite()) throw OperatorError("linear: non-finite matrix");
  return OperatorDescriptor(op::Linear{g, std::make_shared<const OperatorDescriptor>(inner)});
}

OperatorDescriptor OperatorDescriptor::from_rho_pi(RhoPiTable table) {
  return OperatorDescriptor(op::FromRhoPi{std::make_shared<const RhoPiTable>(std::move(table))});
}

OperatorDescriptor OperatorDescriptor::from_p(PFunction p) {
  return OperatorDescriptor(op::FromP{std::make_shared<const PFunction>(std::move(p))});
}

OperatorDescriptor OperatorDescriptor::custom(std::string name, std::function<Body(const Body&)> fn) {
  return OperatorDescriptor(op::Custom{std::move(name), std::move(fn)});
}

std::string OperatorDescriptor::kind_name() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, op::Identity>) return "identity";
        else if constexpr (std::is_same_v<T, op::Reflection>) return "reflection";
        else if constexpr (std::is_same_v<T, op::DiffBody>) return "diffbody";
        else if constexpr (std::is_same_v<T, op::Blend>) return "blend";
        else if constexpr (std::is_same_v<T, op::Linear>) return "linear";
        else if constexpr (std::is_same_v<T, op::Compose>) return "compose";
        else if constexpr (std::is_same_v<T, op::FromRhoPi>) return "rho_pi";
        else if constexpr (std::is_same_v<T, op::FromP>) return k.p->name();
        else return "custom:" + k.name;
      },
      kind_);
}

std::optional<VcBracket> OperatorDescriptor::declared_vc(int n) const {
  return std::visit(
      [n](const auto& k) -> std::optional<VcBracket> {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, op::Identity> || std::is_same_v<T, op::Reflection>) {
          return VcBracket{1.0, 1.0};
        } else if constexpr (std::is_same_v<T, op::DiffBody>) {
          // Brunn-Minkowski and Rogers-Shephard.
          double binom = 1.0;
          for (int i = 1; i <= n; ++i) binom = binom * (n + i) / i;
          return VcBracket{std::pow(2.0, n), binom};
        } else if constexpr (std::is_same_v<T, op::Blend>) {
          const double a = k.a, b = k.b;
          if (a == 0.0 || b == 0.0) {
            const double f = std::pow(a + b, n);
            return VcBracket{f, f};
          }
          if (n == 2) return VcBracket{(a + b) * (a + b), a * a + b * b + 4.0 * a * b};
          if (a == b) {
            double binom = 1.0;
            for (int i = 1; i <= n; ++i) binom = binom * (n + i) / i;
            return VcBracket{std::pow(2.0 * a, n), std::pow(a, n) * binom};
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, op::Linear>) {
          if (k.g.rows() != n) return std::nullopt;
          auto inner = k.inner->declared_vc(n);
          if (!inner) return std::nullopt;
          const double det = std::abs(k.g.determinant());
          return VcBracket{inner->c * det, inner->big_c * det};
        } else if constexpr (std::is_same_v<T, op::Compose>) {
          VcBracket acc{1.0, 1.0};
          for (const auto& o : k.ops) {
            auto b = o->declared_vc(n);
            if (!b) return std::nullopt;
            acc.c *= b->c;
            acc.big_c *= b->big_c;
          }
          return acc;
        } else {
          return std::nullopt;
        }
      },
      kind_);
}

bool OperatorDescriptor::is_even() const {
  return std::visit(
      [](const auto& k) -> bool {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, op::DiffBody> || std::is_same_v<T, op::FromRhoPi> ||
                      std::is_same_v<T, op::FromP>) {
          return true;
        } else if constexpr (std::is_same_v<T, op::Blend>) {
          return k.a == k.b;
        } else if constexpr (std::is_same_v<T, op::Linear>) {
          return k.inner->is_even();
        } else if constexpr (std::is_same_v<T, op::Compose>) {
          // Even as soon as the innermost even factor sees K and -K alike and
          // everything after it preserves o-symmetry; linear factors and the
          // listed kinds all map symmetric bodies to symmetric bodies.
          for (const auto& o : k.ops)
            if (std::holds_alternative<op::Custom>(o->kind())) return false;
          return std::any_of(k.ops.begin(), k.ops.end(), [](const OperatorPtr& o) { return o->is_even(); });
        } else {
          return false;
        }
      },
      kind_);
}

OperatorDescriptor compose(const OperatorDescriptor& outer, const OperatorDescriptor& inner) {
  op::Compose c;
  auto append = [&c](const OperatorDescriptor& d) {
    if (const auto* sub = std::get_if<op::Compose>(&d.kind())) {
      c.ops.insert(c.ops.end(), sub->ops.begin(), sub->ops.end());
    } else {
      c.ops.push_back(std::make_shared<const OperatorDescriptor>(d));
    }
  };
  append(outer);
  append(inner);
  return OperatorDescriptor(std::move(c));
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

Json operator_to_json(const OperatorDescriptor& d, std::optional<int> vc_dim) {
  Json j = std::visit(
      [](const auto& k) -> Json {
        using T = std::decay_t<decltype(k)>;
        Json o;
        if constexpr (std::is_same_v<T, op::Identity>) {
          o["kind"] = "identity";
        } else if constexpr (std::is_same_v<T, op::Reflection>) {
          o["kind"] = "reflection";
        } else if constexpr (std::is_same_v<T, op::DiffBody>) {
          o["kind"] = "diffbody";
        } else if constexpr (std::is_same_v<T, op::Blend>) {
          o["kind"] = "blend";
          o["a"] = k.a;
          o["b"] = k.b;
        } else if constexpr (std::is_same_v<T, op::Linear>) {
          o["kind"] = "linear";
          o["matrix"] = mat_to_json(k.g);
          o["inner"] = operator_to_json(*k.inner);
        } else if constexpr (std::is_same_v<T, op::Compose>) {
          o["kind"] = "compose";
          Json ops = Json::array();
          for (const auto& x : k.ops) ops.push_back(operator_to_json(*x));
          o["ops"] = ops;
        } else if constexpr (std::is_same_v<T, op::FromRhoPi>) {
          o["kind"] = "rho_pi";
          const Json table = table_to_json(*k.table);
          for (auto& [key, value] : table.items()) o[key] = value;
        } else if constexpr (std::is_same_v<T, op::FromP>) {
          o = k.p->to_json();
        } else {
          throw OperatorError("operator '" + k.name + "' is not serializable");
        }
        return o;
      },
      d.kind());
  if (vc_dim) {
    if (auto b = d.declared_vc(*vc_dim)) j["vc"] = Json{{"n", *vc_dim}, {"c", b->c}, {"C", b->big_c}};
  }
  return j;
}

OperatorDescriptor operator_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw OperatorError("operator: expected an object with a string 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  try {
    if (kind == "identity") return OperatorDescriptor::identity();
    if (kind == "reflection") return OperatorDescriptor::reflection();
    if (kind == "diffbody") return OperatorDescriptor::diff_body();
    if (kind == "blend") return OperatorDescriptor::blend(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "linear") {
      const OperatorDescriptor inner =
          j.contains("inner") ? operator_from_json(j.at("inner")) : OperatorDescriptor::identity();
      return OperatorDescriptor::linear(mat_from_json(j.at("matrix")), inner);
    }
    if (kind == "compose") {
      const Json& ops = j.at("ops");
      if (!ops.is_array() || ops.empty()) throw OperatorError("compose: 'ops' must be a non-empty array");
      op::Compose c;
      for (const auto& o : ops) c.ops.push_back(std::make_shared<const OperatorDescriptor>(operator_from_json(o)));
      return OperatorDescriptor(std::move(c));
    }
    if (kind == "rho_pi") return OperatorDescriptor::from_rho_pi(table_from_json(j));
    if (kind == "p_linear" || kind == "p_table") return OperatorDescriptor::from_p(PFunction::from_json(j));
  } catch (const Json::exception& e) {
    throw OperatorError("operator '" + kind + "': " + e.what());
  }
  throw OperatorError("unknown operator kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Application
// ---------------------------------------------------------------------------

namespace {

std::vector<Vec> difference_generators(const Body& k) {
  const Body dk = difference_body(k);
  if (dk.is_point()) return {};
  return to_zonotope(dk).generators();
}

}  // namespace

Zonotope apply_rho_pi(const RhoPiTable& table, const Body& k) {
  if (k.ambient_dim() != 2) throw OperatorError("rho/pi operator: defined on planar bodies only");
  std::vector<Vec> gens;
  for (const auto& d : difference_generators(k)) {
    const double len = d.norm();
    gens.push_back(to_vec(0.5 * len * table.p_at(std::atan2(d(1), d(0)))));
  }
  return Zonotope(Vec::Zero(2), gens);
}

Zonotope apply_p_zonotope(const PFunction& p, const Zonotope& z) {
  if (z.dim() != p.dim()) throw OperatorError("p operator: dimension mismatch");
  std::vector<Vec> gens;
  for (const auto& g : z.generators()) gens.push_back(p(g));
  return Zonotope(Vec::Zero(z.dim()), gens);
}

Body apply(const OperatorDescriptor& d, const Body& k) {
  const int n = k.ambient_dim();
  return std::visit(
      [&](const auto& o) -> Body {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, op::Identity>) {
          return translate(k, -steiner_point(k));
        } else if constexpr (std::is_same_v<T, op::Reflection>) {
          return translate(reflect(k), steiner_point(k));
        } else if constexpr (std::is_same_v<T, op::DiffBody>) {
          return difference_body(k);
        } else if constexpr (std::is_same_v<T, op::Blend>) {
          const Body k0 = translate(k, -steiner_point(k));
          return minkowski_sum(scale(k0, o.a), scale(k0, -o.b));
        } else if constexpr (std::is_same_v<T, op::Linear>) {
          if (o.g.rows() != n) throw OperatorError("linear: matrix/body dimension mismatch");
          return linear_image(o.g, apply(*o.inner, k));
        } else if constexpr (std::is_same_v<T, op::Compose>) {
          Body cur = k;
          for (auto it = o.ops.rbegin(); it != o.ops.rend(); ++it) cur = apply(**it, cur);
          return cur;
        } else if constexpr (std::is_same_v<T, op::FromRhoPi>) {
          return Body(apply_rho_pi(*o.table, k));
        } else if constexpr (std::is_same_v<T, op::FromP>) {
          if (o.p->dim() != n) throw OperatorError("p operator: dimension mismatch");
          std::vector<Vec> gens;
          for (const auto& g : difference_generators(k)) gens.push_back(0.5 * (*o.p)(g));
          return Body(Zonotope(Vec::Zero(n), gens));
        } else {
          Body out = o.fn(k);
          if (out.ambient_dim() != n) throw OperatorError("custom operator '" + o.name + "' changed the dimension");
          return out;
        }
      },
      d.kind());
}

// ---------------------------------------------------------------------------
// Segment images
// ---------------------------------------------------------------------------

namespace {

struct SegmentImage {
  Body image;
  Vec half;  // canonical-sign half extent
};

SegmentImage segment_image(const OperatorDescriptor& d, const Vec& v) {
  check_vec(v, "segment direction");
  if (!(v.norm() > 0.0)) throw OperatorError("segment image: zero direction");
  Body img = apply(d, make_centered_segment(v));
  if (img.ambient_dim() != v.size()) throw OperatorError("segment image: dimension changed");
  const int dim = dimension(img);
  if (dim != 1) {
    throw OperatorError("image of a segment has dimension " + std::to_string(dim) +
                        "; the operator does not map segments to segments");
  }
  Vec half;
  if (img.is_polygon()) {
    const auto& vs = std::get<Polygon2>(img.shape()).vertices();
    double best = -1.0;
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = i + 1; j < vs.size(); ++j)
        if ((vs[j] - vs[i]).norm() > best) {
          best = (vs[j] - vs[i]).norm();
          half = to_vec(0.5 * (vs[j] - vs[i]));
        }
  } else {
    const Zonotope z = to_zonotope(img);
    half = Vec::Zero(v.size());
    for (const auto& g : z.generators()) half += (half.dot(g) < 0.0 ? -g : g);
  }
  return {std::move(img), canonical_sign(half)};
}

}  // namespace

Vec p_of(const OperatorDescriptor& d, const Vec& v) { return segment_image(d, v).half; }

double rho1_of(const OperatorDescriptor& d, const LineDir& e) {
  const SegmentImage s = segment_image(d, e.u());
  const Vec w = s.half.normalized();
  return support(s.image, w) + support(s.image, -w);
}

LineDir pi1_of(const OperatorDescriptor& d, const LineDir& e) { return LineDir(p_of(d, e.u())); }

double klain_from_segment_data(const OperatorDescriptor& d, const Vec& u, const LineDir& e) {
  const LineDir pi = pi1_of(d, e);
  if (u.size() != pi.dim()) throw OperatorError("klain: dimension mismatch");
  return 0.25 * rho1_of(d, e) * std::abs(u.dot(pi.u()));
}

RhoPiTable extract_table(const OperatorDescriptor& d, int grid_size) {
  if (grid_size < 2) throw OperatorError("extract_table: grid size must be at least 2");

  // Spot check evenness and o-symmetry on a generic triangle.
  const Body probe = make_polygon({Vec2(0.2, -0.1), Vec2(1.3, 0.15), Vec2(0.45, 0.9)});
  const Body img = apply(d, probe);
  const double scale_ref = std::max(radius_about_steiner(img), 1e-300);
  const double tol = kDefaultTolerances.evenness;
  if (hausdorff_distance(img, apply(d, reflect(probe))) > tol * scale_ref)
    throw OperatorError("extract_table: operator is not even on the probe body");
  if (hausdorff_distance(img, reflect(img)) > tol * scale_ref)
    throw OperatorError("extract_table: operator image is not origin-symmetric on the probe body");

  const std::size_t n = static_cast<std::size_t>(grid_size);
  std::vector<double> theta(n), rho(n), lift(n);
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = kPi * static_cast<double>(i) / grid_size;
    const Vec u = to_vec(unit_at(theta[i]));
    const SegmentImage s = segment_image(d, u);
    const Vec w = s.half.normalized();
    rho[i] = support(s.image, w) + support(s.image, -w);
    const double ang = line_angle(LineDir(s.half));
    if (i == 0) {
      lift[i] = ang;
      continue;
    }
    double step = std::remainder(ang - lift[i - 1], kPi);
    lift[i] = lift[i - 1] + step;
    const int sg = step > 0.0 ? 1 : (step < 0.0 ? -1 : 0);
    if (sg == 0 || (sign != 0 && sg != sign)) throw OperatorError("extract_table: sampled pi is not injective");
    sign = sg;
  }
  // The closing step must continue in the same direction; the total is then one half turn.
  const double wrap = lift.front() + sign * kPi - lift.back();
  if (!(sign * wrap > 0.0)) throw OperatorError("extract_table: sampled pi does not wind exactly once");
  return RhoPiTable(std::move(theta), std::move(rho), std::move(lift));
}

}  // namespace minkops
