#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "minkops/verifier.hpp"

namespace minkops {

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 gaussian2(Rng& rng) {
  const double x = rng.normal();
  return {x, rng.normal()};
}

double polygon_area(const Polygon2& p) {
  double a = 0.0;
  const auto& v = p.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2& q = v[(i + 1) % v.size()];
    a += v[i].x() * q.y() - v[i].y() * q.x();
  }
  return 0.5 * a;
}

// Hull of m points uniform on a random ellipse; retried until it has area.
Body random_polygon(Rng& rng, int m) {
  for (;;) {
    const double ax = rng.uniform(0.5, 2.0);
    const double ay = rng.uniform(0.5, 2.0);
    const double phi = rng.uniform(0.0, kPi);
    const Vec2 center = gaussian2(rng);
    const Eigen::Matrix2d rot = Eigen::Rotation2Dd(phi).toRotationMatrix();
    std::vector<Vec2> pts;
    for (int i = 0; i < m; ++i) {
      const double t = rng.uniform(0.0, 2.0 * kPi);
      pts.push_back(center + rot * Vec2(ax * std::cos(t), ay * std::sin(t)));
    }
    Polygon2 p = Polygon2::hull(std::move(pts));
    if (p.size() >= 3 && polygon_area(p) > 1e-3) return Body(std::move(p));
  }
}

Body random_triangle(Rng& rng) {
  for (;;) {
    Polygon2 p = Polygon2::hull({gaussian2(rng), gaussian2(rng), gaussian2(rng)});
    if (p.size() == 3 && polygon_area(p) > 1e-2) return Body(std::move(p));
  }
}

// Half the difference body of a random polygon, moved to a random center.
Body random_symmetric(Rng& rng) {
  const Body k = random_polygon(rng, rng.uniform_int(3, 12));
  const Polygon2 half = to_polygon(scale(difference_body(k), 0.5));
  return translate(Body(half), Vec(gaussian2(rng)));
}

Body random_zonotope(Rng& rng, int n, int max_gens) {
  for (;;) {
    const int m = rng.uniform_int(n, std::max(n, max_gens));
    std::vector<Vec> gens;
    for (int i = 0; i < m; ++i) gens.push_back(rng.gaussian_vector(n));
    const Vec c = rng.gaussian_vector(n);
    Body z = make_zonotope(c, gens);
    if (dimension(z) == n) return z;
  }
}

Body random_segment(Rng& rng, int n) {
  for (;;) {
    const Vec a = rng.gaussian_vector(n);
    const Vec b = rng.gaussian_vector(n);
    if ((b - a).norm() > 1e-2) return make_segment(a, b);
  }
}

}  // namespace

CorpusSpec CorpusSpec::parse(const std::string& text) {
  CorpusSpec s;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw GeometryError("corpus spec: expected key:count, got '" + item + "'");
    const std::string key = item.substr(0, colon);
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(item.substr(colon + 1), &used);
      if (used != item.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw GeometryError("corpus spec: bad count in '" + item + "'");
    }
    if (value < 0) throw GeometryError("corpus spec: negative count in '" + item + "'");
    if (key == "polygons") s.polygons = value;
    else if (key == "triangles") s.triangles = value;
    else if (key == "symmetric") s.symmetric = value;
    else if (key == "zonotopes") s.zonotopes = value;
    else if (key == "segments") s.segments = value;
    else if (key == "dim") s.dim = value;
    else if (key == "max_generators") s.max_generators = value;
    else throw GeometryError("corpus spec: unknown key '" + key + "'");
  }
  if (s.dim < 2) throw GeometryError("corpus spec: dim must be >= 2");
  if (s.dim != 2 && s.polygons + s.triangles + s.symmetric > 0)
    throw GeometryError("corpus spec: polygons, triangles and symmetric bodies are planar (dim 2)");
  if (s.max_generators < 1) throw GeometryError("corpus spec: max_generators must be >= 1");
  return s;
}

std::string CorpusSpec::to_string() const {
  std::ostringstream out;
  out << "polygons:" << polygons << ",triangles:" << triangles << ",symmetric:" << symmetric
      << ",zonotopes:" << zonotopes << ",segments:" << segments << ",dim:" << dim
      << ",max_generators:" << max_generators;
  return out.str();
}

Json CorpusSpec::to_json() const {
  Json j;
  j["polygons"] = polygons;
  j["triangles"] = triangles;
  j["symmetric"] = symmetric;
  j["zonotopes"] = zonotopes;
  j["segments"] = segments;
  j["dim"] = dim;
  j["max_generators"] = max_generators;
  return j;
}

Corpus make_corpus(const CorpusSpec& spec, std::uint64_t seed) {
  Corpus c;
  c.seed = seed;
  c.spec = spec;
  Rng master(seed);
  auto family = [&](int count, auto&& make) {
    for (int i = 0; i < count; ++i) {
      Rng rng(master.fork_seed());
      c.bodies.push_back(make(rng));
    }
  };
  family(spec.polygons, [](Rng& r) { return random_polygon(r, r.uniform_int(3, 12)); });
  family(spec.triangles, [](Rng& r) { return random_triangle(r); });
  family(spec.symmetric, [](Rng& r) { return random_symmetric(r); });
  family(spec.zonotopes, [&spec](Rng& r) { return random_zonotope(r, spec.dim, spec.max_generators); });
  family(spec.segments, [&spec](Rng& r) { return random_segment(r, spec.dim); });
  return c;
}

Json corpus_to_json(const Corpus& c) {
  Json j;
  j["seed"] = c.seed;
  j["spec"] = c.spec.to_json();
  Json bodies = Json::array();
  for (const auto& k : c.bodies) bodies.push_back(body_to_json(k));
  j["bodies"] = bodies;
  return j;
}

Mat rotation2(double angle) {
  Mat r(2, 2);
  r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return r;
}

std::vector<Mat> random_rotations(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Mat> out;
  for (int k = 0; k < count; ++k) {
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = rng.normal();
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    const Mat r = qr.matrixQR();
    for (int i = 0; i < n; ++i)
      if (r(i, i) < 0.0) q.col(i) *= -1.0;
    if (q.determinant() < 0.0) q.col(0) *= -1.0;
    out.push_back(q);
  }
  return out;
}

RhoPiTable random_rho_pi_table(int grid, std::uint64_t seed, double rho_amp, double lift_amp, int frequency,
                               bool reverse) {
  if (grid < 2) throw OperatorError("random table: grid must be >= 2");
  if (!(lift_amp >= 0.0 && lift_amp < 1.0)) throw OperatorError("random table: lift amplitude must be in [0, 1)");
  Rng rng(seed);
  const double scale = std::exp(rng.uniform(-0.5, 0.5));
  std::vector<double> ra, rp, la, lp;
  for (int k = 1; k <= frequency; ++k) {
    ra.push_back(rng.uniform(-rho_amp, rho_amp) / frequency);
    rp.push_back(rng.uniform(0.0, 2.0 * kPi));
    la.push_back(rng.uniform(-lift_amp, lift_amp) / frequency);
    lp.push_back(rng.uniform(0.0, 2.0 * kPi));
  }
  const double offset = rng.uniform(0.0, kPi);
  std::vector<double> theta, rho, lift;
  for (int i = 0; i < grid; ++i) {
    const double t = kPi * i / grid;
    double lr = 0.0;
    double l = t;
    for (int k = 1; k <= frequency; ++k) {
      const double w = 2.0 * k;
      lr += ra[k - 1] * std::cos(w * t + rp[k - 1]);
      // d/dt of this term is la cos(...), so the total slope is >= 1 - lift_amp.
      l += la[k - 1] * std::sin(w * t + lp[k - 1]) / w;
    }
    theta.push_back(t);
    rho.push_back(scale * std::exp(lr));
    lift.push_back(reverse ? offset - l : offset + l);
  }
  return RhoPiTable(std::move(theta), std::move(rho), std::move(lift));
}

}  // namespace minkops
