#include "minkops/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "minkops/random.hpp"

namespace minkops {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Angle of a nonzero vector mapped into [0, 2 pi).
double angle_0_2pi(const Vec2& v) {
  double a = std::atan2(v.y(), v.x());
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

void require_same_dim(const Body& a, const Body& b, const char* op) {
  if (a.ambient_dim() != b.ambient_dim()) {
    std::ostringstream msg;
    msg << op << ": dimension mismatch (" << a.ambient_dim() << " vs " << b.ambient_dim() << ")";
    throw GeometryError(msg.str());
  }
}

void require_dim(const Body& k, const Vec& u, const char* op) {
  if (u.size() != k.ambient_dim()) {
    std::ostringstream msg;
    msg << op << ": direction has dimension " << u.size() << ", body has " << k.ambient_dim();
    throw GeometryError(msg.str());
  }
}

Vec2 to_vec2(const Vec& v) { return {v(0), v(1)}; }
Vec from_vec2(const Vec2& v) {
  Vec out(2);
  out << v.x(), v.y();
  return out;
}

// Visits every k-subset of {0..m-1} in lexicographic order.
template <typename F>
void for_each_combination(int m, int k, F&& f) {
  if (k > m || k <= 0) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Starts the cycle at the bottom-most (then left-most) vertex so that edge
// angles increase through [0, 2 pi).
std::vector<Vec2> bottom_start(const std::vector<Vec2>& vs) {
  auto it = std::min_element(vs.begin(), vs.end(), [](const Vec2& a, const Vec2& b) {
    return a.y() < b.y() || (a.y() == b.y() && a.x() < b.x());
  });
  std::vector<Vec2> out(vs.begin(), vs.end());
  std::rotate(out.begin(), out.begin() + (it - vs.begin()), out.end());
  return out;
}

Polygon2 polygon_sum(const Polygon2& p, const Polygon2& q) {
  const auto a = bottom_start(p.vertices());
  const auto b = bottom_start(q.vertices());
  auto edges_of = [](const std::vector<Vec2>& vs) {
    std::vector<std::pair<double, Vec2>> es;
    if (vs.size() < 2) return es;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      Vec2 e = vs[(i + 1) % vs.size()] - vs[i];
      es.emplace_back(angle_0_2pi(e), e);
    }
    // The closing edge into the start vertex can land at exactly 0 by rounding.
    for (std::size_t i = 1; i < es.size(); ++i)
      if (es[i].first < es[i - 1].first) es[i].first += kTwoPi;
    return es;
  };
  const auto ea = edges_of(a);
  const auto eb = edges_of(b);
  std::vector<Vec2> out;
  out.reserve(ea.size() + eb.size() + 1);
  Vec2 cur = a.front() + b.front();
  out.push_back(cur);
  std::size_t i = 0, j = 0;
  while (i < ea.size() || j < eb.size()) {
    if (j == eb.size() || (i < ea.size() && ea[i].first <= eb[j].first)) {
      cur += ea[i++].second;
    } else {
      cur += eb[j++].second;
    }
    out.push_back(cur);
  }
  out.pop_back();  // closes onto the start vertex
  return Polygon2::hull(std::move(out));
}

}  // namespace

void check_vec(const Vec& v, const char* what) {
  if (v.size() < 2) throw GeometryError(std::string(what) + ": dimension must be at least 2");
  if (!v.allFinite()) throw GeometryError(std::string(what) + ": non-finite coordinate");
}

Vec canonical_sign(const Vec& v) {
  for (Eigen::Index i = v.size() - 1; i >= 0; --i) {
    if (v(i) > 0.0) return v;
    if (v(i) < 0.0) return -v;
  }
  return v;
}

int numerical_rank(const Mat& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

// ---------------------------------------------------------------------------
// Polygon2
// ---------------------------------------------------------------------------

Polygon2 Polygon2::hull(std::vector<Vec2> points) {
  for (const auto& p : points)
    if (!p.allFinite()) throw GeometryError("polygon: non-finite vertex");
  if (points.empty()) throw GeometryError("polygon: no vertices");
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  const double merge = kDefaultTolerances.vertex_merge;
  std::vector<Vec2> pts;
  for (const auto& p : points)
    if (pts.empty() || (p - pts.back()).norm() > merge) pts.push_back(p);
  if (pts.size() <= 2) {
    if (pts.size() == 2 && (pts[0] - pts[1]).norm() <= merge) pts.pop_back();
    return Polygon2(std::move(pts));
  }
  const double col = kDefaultTolerances.collinear;
  auto turns_left = [col](const Vec2& o, const Vec2& a, const Vec2& b) {
    const Vec2 u = a - o, v = b - o;
    return cross2(u, v) > col * u.norm() * v.norm();
  };
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && !turns_left(h[k - 2], h[k - 1], pts[i])) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && !turns_left(h[k - 2], h[k - 1], pts[i])) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  // Drop near-duplicates the chain may leave behind at the seam.
  std::vector<Vec2> out;
  for (const auto& p : h)
    if (out.empty() || (p - out.back()).norm() > merge) out.push_back(p);
  while (out.size() > 1 && (out.front() - out.back()).norm() <= merge) out.pop_back();
  return Polygon2(std::move(out));
}

Polygon2 Polygon2::from_ccw(std::vector<Vec2> vertices) {
  if (vertices.empty()) throw GeometryError("polygon: no vertices");
  const double merge = kDefaultTolerances.vertex_merge;
  std::vector<Vec2> vs;
  for (const auto& p : vertices) {
    if (!p.allFinite()) throw GeometryError("polygon: non-finite vertex");
    if (vs.empty() || (p - vs.back()).norm() > merge) vs.push_back(p);
  }
  while (vs.size() > 1 && (vs.front() - vs.back()).norm() <= merge) vs.pop_back();
  if (vs.size() >= 3) {
    const double col = kDefaultTolerances.collinear;
    double turning = 0.0;
    bool any_turn = false;
    const std::size_t m = vs.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Vec2 e1 = vs[(i + 1) % m] - vs[i];
      const Vec2 e2 = vs[(i + 2) % m] - vs[(i + 1) % m];
      const double c = cross2(e1, e2);
      if (c < -col * e1.norm() * e2.norm())
        throw GeometryError("polygon: vertices are not convex and counterclockwise");
      if (c > col * e1.norm() * e2.norm()) any_turn = true;
      turning += std::atan2(c, e1.dot(e2));
    }
    if (any_turn && std::abs(turning - kTwoPi) > 1e-6)
      throw GeometryError("polygon: vertex cycle winds more than once");
  }
  return hull(std::move(vs));
}

std::vector<Vec2> Polygon2::edges() const {
  std::vector<Vec2> es;
  if (vertices_.size() < 2) return es;
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    es.push_back(vertices_[(i + 1) % vertices_.size()] - vertices_[i]);
  return es;
}

// ---------------------------------------------------------------------------
// Zonotope
// ---------------------------------------------------------------------------

Zonotope::Zonotope(Vec center, const std::vector<Vec>& generators) : center_(std::move(center)) {
  check_vec(center_, "zonotope center");
  double largest = 0.0;
  for (const auto& g : generators) {
    if (g.size() != center_.size()) throw GeometryError("zonotope: generator dimension mismatch");
    if (!g.allFinite()) throw GeometryError("zonotope: non-finite generator");
    largest = std::max(largest, g.norm());
  }
  const double par = kDefaultTolerances.parallel;
  std::vector<Vec> dirs;
  for (const auto& g0 : generators) {
    const double len = g0.norm();
    if (len == 0.0 || len <= 1e-14 * largest) continue;
    const Vec g = canonical_sign(g0);
    const Vec d = g / len;
    bool merged = false;
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      if ((dirs[i] - d).norm() <= par) {
        generators_[i] += g;
        merged = true;
        break;
      }
    }
    if (!merged) {
      generators_.push_back(g);
      dirs.push_back(d);
    }
  }
}

Mat Zonotope::generator_matrix() const {
  Mat m(center_.size(), generators_.size());
  for (std::size_t i = 0; i < generators_.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = generators_[i];
  return m;
}

// ---------------------------------------------------------------------------
// Body
// ---------------------------------------------------------------------------

Body::Body(Point p) : shape_(std::move(p)) {
  const auto& v = std::get<Point>(shape_).p;
  check_vec(v, "point");
  ambient_dim_ = static_cast<int>(v.size());
}

Body::Body(Segment s) : shape_(std::move(s)) {
  const auto& seg = std::get<Segment>(shape_);
  check_vec(seg.a, "segment endpoint");
  check_vec(seg.b, "segment endpoint");
  if (seg.a.size() != seg.b.size()) throw GeometryError("segment: endpoint dimension mismatch");
  ambient_dim_ = static_cast<int>(seg.a.size());
}

Body::Body(Polygon2 poly) : shape_(std::move(poly)), ambient_dim_(2) {
  if (std::get<Polygon2>(shape_).size() == 0) throw GeometryError("polygon: no vertices");
}

Body::Body(Zonotope z) : shape_(std::move(z)) {
  ambient_dim_ = std::get<Zonotope>(shape_).dim();
}

std::string Body::type_name() const {
  switch (shape_.index()) {
    case 0: return "point";
    case 1: return "segment";
    case 2: return "polygon2";
    default: return "zonotope";
  }
}

Body make_point(const Vec& p) { return Body(Point{p}); }
Body make_segment(const Vec& a, const Vec& b) { return Body(Segment{a, b}); }
Body make_centered_segment(const Vec& v) { return Body(Segment{-v, v}); }
Body make_polygon(std::vector<Vec2> ccw_vertices) { return Body(Polygon2::from_ccw(std::move(ccw_vertices))); }
Body make_zonotope(const Vec& center, const std::vector<Vec>& generators) {
  return Body(Zonotope(center, generators));
}

Body make_cube(int n, double r) {
  std::vector<Vec> gens;
  for (int i = 0; i < n; ++i) gens.push_back(r * Vec::Unit(n, i));
  return make_zonotope(Vec::Zero(n), gens);
}

Body make_regular_polygon(int m, double r) {
  if (m < 3) throw GeometryError("regular polygon needs at least 3 vertices");
  std::vector<Vec2> vs;
  for (int k = 0; k < m; ++k) vs.push_back(r * unit_at(kTwoPi * k / m));
  return make_polygon(std::move(vs));
}

// ---------------------------------------------------------------------------
// Conversions
// ---------------------------------------------------------------------------

Zonotope to_zonotope(const Body& k) {
  return std::visit(
      [](const auto& s) -> Zonotope {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          return Zonotope(s.p, {});
        } else if constexpr (std::is_same_v<T, Segment>) {
          return Zonotope(0.5 * (s.a + s.b), {0.5 * (s.b - s.a)});
        } else if constexpr (std::is_same_v<T, Zonotope>) {
          return s;
        } else {
          throw GeometryError("to_zonotope: polygon has no generator description");
        }
      },
      k.shape());
}

Polygon2 to_polygon(const Body& k) {
  if (k.ambient_dim() != 2) throw GeometryError("to_polygon: body is not planar");
  return std::visit(
      [](const auto& s) -> Polygon2 {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          return Polygon2::hull({to_vec2(s.p)});
        } else if constexpr (std::is_same_v<T, Segment>) {
          return Polygon2::hull({to_vec2(s.a), to_vec2(s.b)});
        } else if constexpr (std::is_same_v<T, Polygon2>) {
          return s;
        } else {
          // Canonical generators have angles in [0, pi); walking 2g_i in
          // increasing angle and then -2g_i traces the zonogon counterclockwise.
          std::vector<Vec2> gens;
          for (const auto& g : s.generators()) gens.push_back(to_vec2(g));
          std::sort(gens.begin(), gens.end(), [](const Vec2& a, const Vec2& b) {
            return std::atan2(a.y(), a.x()) < std::atan2(b.y(), b.x());
          });
          Vec2 cur = to_vec2(s.center());
          for (const auto& g : gens) cur -= g;
          std::vector<Vec2> vs{cur};
          for (const auto& g : gens) vs.push_back(cur += 2.0 * g);
          for (const auto& g : gens) vs.push_back(cur -= 2.0 * g);
          vs.pop_back();
          return Polygon2::hull(std::move(vs));
        }
      },
      k.shape());
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

double support(const Body& k, const Vec& u) {
  require_dim(k, u, "support");
  if (!u.allFinite()) throw GeometryError("support: non-finite direction");
  return std::visit(
      [&u](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          return u.dot(s.p);
        } else if constexpr (std::is_same_v<T, Segment>) {
          return std::max(u.dot(s.a), u.dot(s.b));
        } else if constexpr (std::is_same_v<T, Polygon2>) {
          double best = -std::numeric_limits<double>::infinity();
          for (const auto& v : s.vertices()) best = std::max(best, u(0) * v.x() + u(1) * v.y());
          return best;
        } else {
          double h = u.dot(s.center());
          for (const auto& g : s.generators()) h += std::abs(u.dot(g));
          return h;
        }
      },
      k.shape());
}

Body translate(const Body& k, const Vec& t) {
  require_dim(k, t, "translate");
  return std::visit(
      [&t](const auto& s) -> Body {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          return Body(Point{s.p + t});
        } else if constexpr (std::is_same_v<T, Segment>) {
          return Body(Segment{s.a + t, s.b + t});
        } else if constexpr (std::is_same_v<T, Polygon2>) {
          std::vector<Vec2> vs = s.vertices();
          for (auto& v : vs) v += to_vec2(t);
          return Body(Polygon2::from_ccw(std::move(vs)));
        } else {
          return Body(Zonotope(s.center() + t, s.generators()));
        }
      },
      k.shape());
}

Body scale(const Body& k, double lambda) {
  if (!std::isfinite(lambda)) throw GeometryError("scale: non-finite factor");
  return std::visit(
      [lambda](const auto& s) -> Body {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          return Body(Point{lambda * s.p});
        } else if constexpr (std::is_same_v<T, Segment>) {
          return Body(Segment{lambda * s.a, lambda * s.b});
        } else if constexpr (std::is_same_v<T, Polygon2>) {
          // A negative factor is a rotation by pi in the plane, so the cycle
          // stays counterclockwise.
          std::vector<Vec2> vs = s.vertices();
          for (auto& v : vs) v *= lambda;
          return Body(Polygon2::hull(std::move(vs)));
        } else {
          std::vector<Vec> gens;
          for (const auto& g : s.generators()) gens.push_back(lambda * g);
          return Body(Zonotope(lambda * s.center(), gens));
        }
      },
      k.shape());
}

Body reflect(const Body& k) { return scale(k, -1.0); }

Body minkowski_sum(const Body& a, const Body& b) {
  require_same_dim(a, b, "minkowski_sum");
  if (a.is_point()) return translate(b, std::get<Point>(a.shape()).p);
  if (b.is_point()) return translate(a, std::get<Point>(b.shape()).p);
  if (a.is_zonotopal() && b.is_zonotopal()) {
    const Zonotope za = to_zonotope(a);
    const Zonotope zb = to_zonotope(b);
    std::vector<Vec> gens = za.generators();
    gens.insert(gens.end(), zb.generators().begin(), zb.generators().end());
    return Body(Zonotope(za.center() + zb.center(), gens));
  }
  if (a.ambient_dim() > 2) throw GeometryError("minkowski_sum: zonotope-only in dimension > 2");
  return Body(polygon_sum(to_polygon(a), to_polygon(b)));
}

double volume(const Body& k) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Polygon2>) {
          const auto& vs = s.vertices();
          if (vs.size() < 3) return 0.0;
          double twice = 0.0;
          for (std::size_t i = 0; i < vs.size(); ++i) {
            // Relative to the first vertex to limit cancellation.
            const Vec2 p = vs[i] - vs[0];
            const Vec2 q = vs[(i + 1) % vs.size()] - vs[0];
            twice += cross2(p, q);
          }
          return 0.5 * twice;
        } else if constexpr (std::is_same_v<T, Zonotope>) {
          const int n = s.dim();
          const int m = static_cast<int>(s.generators().size());
          if (m < n) return 0.0;
          const Mat g = s.generator_matrix();
          if (numerical_rank(g) < n) return 0.0;
          double sum = 0.0;
          Mat sub(n, n);
          for_each_combination(m, n, [&](const std::vector<int>& idx) {
            for (int j = 0; j < n; ++j) sub.col(j) = g.col(idx[j]);
            sum += std::abs(sub.determinant());
          });
          return std::ldexp(sum, n);
        } else {
          return 0.0;
        }
      },
      k.shape());
}

Body difference_body(const Body& k) {
  const int n = k.ambient_dim();
  return std::visit(
      [n](const auto& s) -> Body {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          return make_point(Vec::Zero(n));
        } else if constexpr (std::is_same_v<T, Segment>) {
          return Body(Zonotope(Vec::Zero(n), {s.b - s.a}));
        } else if constexpr (std::is_same_v<T, Polygon2>) {
          if (s.size() == 1) return make_point(Vec::Zero(2));
          std::vector<Vec> gens;
          for (const auto& e : s.edges()) gens.push_back(from_vec2(0.5 * e));
          return Body(Zonotope(Vec::Zero(2), gens));
        } else {
          std::vector<Vec> gens;
          for (const auto& g : s.generators()) gens.push_back(2.0 * g);
          return Body(Zonotope(Vec::Zero(n), gens));
        }
      },
      k.shape());
}

Body linear_image(const Mat& g, const Body& k, Diagnostics* diag) {
  const int n = k.ambient_dim();
  if (g.rows() != n || g.cols() != n) throw GeometryError("linear_image: matrix/body dimension mismatch");
  if (!g.allFinite()) throw GeometryError("linear_image: non-finite matrix");
  Eigen::JacobiSVD<Mat> svd(g);
  const auto& sv = svd.singularValues();
  if (sv(0) == 0.0 || sv(n - 1) <= kDefaultTolerances.singular * sv(0))
    throw GeometryError("linear_image: singular matrix");
  const double cond = sv(0) / sv(n - 1);
  if (cond > kDefaultTolerances.condition_warn && diag != nullptr) {
    std::ostringstream msg;
    msg << "linear_image: condition number " << cond << " exceeds " << kDefaultTolerances.condition_warn;
    diag->warnings.push_back(msg.str());
  }
  return std::visit(
      [&g](const auto& s) -> Body {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          return Body(Point{g * s.p});
        } else if constexpr (std::is_same_v<T, Segment>) {
          return Body(Segment{g * s.a, g * s.b});
        } else if constexpr (std::is_same_v<T, Polygon2>) {
          const Eigen::Matrix2d g2 = g;
          std::vector<Vec2> vs;
          for (const auto& v : s.vertices()) vs.push_back(g2 * v);
          return Body(Polygon2::hull(std::move(vs)));
        } else {
          std::vector<Vec> gens;
          for (const auto& x : s.generators()) gens.push_back(g * x);
          return Body(Zonotope(g * s.center(), gens));
        }
      },
      k.shape());
}

std::vector<EdgeNormal> edge_normals(const Polygon2& poly) {
  std::vector<EdgeNormal> out;
  for (const auto& e : poly.edges()) {
    const double len = e.norm();
    out.push_back({Vec2(e.y(), -e.x()) / len, len});
  }
  return out;
}

Vec steiner_point(const Body& k) {
  return std::visit(
      [](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          return s.p;
        } else if constexpr (std::is_same_v<T, Segment>) {
          return 0.5 * (s.a + s.b);
        } else if constexpr (std::is_same_v<T, Zonotope>) {
          return s.center();
        } else {
          const auto& vs = s.vertices();
          if (vs.size() == 1) return from_vec2(vs[0]);
          // h(K, u) = <u, x_i> on the normal arc of vertex x_i; integrate
          // u u^T over each arc in closed form.
          const auto normals = edge_normals(s);
          const std::size_t m = vs.size();
          const Vec2 origin = vs[0];
          Vec2 acc = Vec2::Zero();
          for (std::size_t i = 0; i < m; ++i) {
            const double a0 = angle_0_2pi(normals[(i + m - 1) % m].normal);
            double a1 = angle_0_2pi(normals[i].normal);
            if (a1 <= a0) a1 += kTwoPi;
            const double d = a1 - a0;
            const double s2 = (std::sin(2 * a1) - std::sin(2 * a0)) / 4.0;
            const double sc = (std::sin(a1) * std::sin(a1) - std::sin(a0) * std::sin(a0)) / 2.0;
            Eigen::Matrix2d mom;
            mom << d / 2 + s2, sc, sc, d / 2 - s2;
            acc += mom * (vs[i] - origin);
          }
          return from_vec2(origin + acc / std::numbers::pi);
        }
      },
      k.shape());
}

const std::vector<Vec>& hausdorff_directions(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<Vec>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Vec> dirs;
  if (n == 3) {
    // Fibonacci lattice on the sphere.
    const int count = 20000;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(1.0 - z * z);
      Vec u(3);
      u << r * std::cos(golden * i), r * std::sin(golden * i), z;
      dirs.push_back(u);
    }
  } else {
    Rng rng(0x5eed0000ULL + static_cast<std::uint64_t>(n));
    for (int i = 0; i < 20000; ++i) dirs.push_back(rng.unit_vector(n));
  }
  for (int i = 0; i < n; ++i) {
    dirs.push_back(Vec::Unit(n, i));
    dirs.push_back(-Vec::Unit(n, i));
  }
  return cache.emplace(n, std::move(dirs)).first->second;
}

namespace {

double hausdorff_planar(const Polygon2& a, const Polygon2& b) {
  const Body ba(a), bb(b);
  std::vector<double> angles;
  for (const auto& en : edge_normals(a)) angles.push_back(angle_0_2pi(en.normal));
  for (const auto& en : edge_normals(b)) angles.push_back(angle_0_2pi(en.normal));
  if (angles.empty()) angles.push_back(0.0);
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());

  auto diff_at = [&](double t) {
    const Vec u = from_vec2(unit_at(t));
    return std::abs(support(ba, u) - support(bb, u));
  };
  auto argmax = [](const Polygon2& p, const Vec2& u) {
    const auto& vs = p.vertices();
    std::size_t best = 0;
    for (std::size_t i = 1; i < vs.size(); ++i)
      if (u.dot(vs[i]) > u.dot(vs[best])) best = i;
    return vs[best];
  };

  double worst = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double lo = angles[i];
    const double hi = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + kTwoPi;
    worst = std::max(worst, diff_at(lo));
    // On the open arc both supports are linear: h_A - h_B = <u, w>.
    const Vec2 mid = unit_at(0.5 * (lo + hi));
    const Vec2 w = argmax(a, mid) - argmax(b, mid);
    if (w.norm() == 0.0) continue;
    for (const Vec2& cand : {Vec2(w), Vec2(-w)}) {
      double t = angle_0_2pi(cand);
      if (t < lo) t += kTwoPi;
      if (t > lo && t < hi) worst = std::max(worst, w.norm());
    }
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const Body& a, const Body& b) {
  require_same_dim(a, b, "hausdorff_distance");
  const int n = a.ambient_dim();
  if (n == 2) return hausdorff_planar(to_polygon(a), to_polygon(b));
  std::vector<Vec> extra;
  std::vector<Vec> gens;
  for (const Body* k : {&a, &b}) {
    if (k->is_polygon()) continue;
    const Zonotope z = to_zonotope(*k);
    for (const auto& g : z.generators()) {
      gens.push_back(g.normalized());
    }
  }
  for (const auto& g : gens) {
    extra.push_back(g);
    extra.push_back(-g);
  }
  if (n == 3) {
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t j = i + 1; j < gens.size(); ++j) {
        const Eigen::Vector3d c = Eigen::Vector3d(gens[i]).cross(Eigen::Vector3d(gens[j]));
        if (c.norm() < 1e-12) continue;
        extra.push_back(Vec(c.normalized()));
        extra.push_back(Vec(-c.normalized()));
      }
  }
  const Vec shift = a.is_zonotopal() && b.is_zonotopal()
                        ? Vec(to_zonotope(a).center() - to_zonotope(b).center())
                        : Vec::Zero(n);
  if (shift.norm() > 0.0) {
    extra.push_back(shift.normalized());
    extra.push_back(-shift.normalized());
  }
  double worst = 0.0;
  for (const std::vector<Vec>* set : {&hausdorff_directions(n), static_cast<const std::vector<Vec>*>(&extra)})
    for (const auto& u : *set) worst = std::max(worst, std::abs(support(a, u) - support(b, u)));
  return worst;
}

int dimension(const Body& k) {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          return 0;
        } else if constexpr (std::is_same_v<T, Segment>) {
          Mat d = s.b - s.a;
          return numerical_rank(d);
        } else if constexpr (std::is_same_v<T, Polygon2>) {
          const auto& vs = s.vertices();
          Mat d(2, vs.size() > 0 ? vs.size() - 1 : 0);
          for (std::size_t i = 1; i < vs.size(); ++i) d.col(static_cast<Eigen::Index>(i - 1)) = vs[i] - vs[0];
          return numerical_rank(d);
        } else {
          return numerical_rank(s.generator_matrix());
        }
      },
      k.shape());
}

double radius_about_steiner(const Body& k) {
  const Vec st = steiner_point(k);
  return std::visit(
      [&st](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Point>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Segment>) {
          return 0.5 * (s.b - s.a).norm();
        } else if constexpr (std::is_same_v<T, Polygon2>) {
          double r = 0.0;
          for (const auto& v : s.vertices()) r = std::max(r, (v - to_vec2(st)).norm());
          return r;
        } else {
          if (s.dim() == 2) {
            double r = 0.0;
            const Polygon2 poly = to_polygon(Body(s));
            for (const auto& v : poly.vertices()) r = std::max(r, (v - to_vec2(st)).norm());
            return r;
          }
          double r = 0.0;
          for (const auto& u : hausdorff_directions(s.dim())) {
            double h = 0.0;
            for (const auto& g : s.generators()) h += std::abs(u.dot(g));
            r = std::max(r, h);
          }
          return r;
        }
      },
      k.shape());
}

}  // namespace minkops
