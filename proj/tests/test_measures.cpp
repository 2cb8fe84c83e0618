#include <doctest.h>

#include <cmath>

#include "minkops/measures.hpp"
#include "minkops/random.hpp"
#include "oracles.hpp"

using namespace minkops;

namespace {

Vec v2(double x, double y) { return Vec(Vec2(x, y)); }
Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

double weight_at(const AtomicSphereMeasure& m, const Vec& dir) {
  for (const auto& a : m.atoms())
    if ((a.dir - dir.normalized()).norm() < 1e-12) return a.weight;
  return 0.0;
}

Body random_polygon(Rng& rng, int m) {
  std::vector<Vec2> pts;
  for (int i = 0; i < m; ++i) pts.emplace_back(rng.normal(), rng.normal());
  return Body(Polygon2::hull(pts));
}

Mat random_rotation3(Rng& rng) {
  Mat a(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = rng.normal();
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(3, 3);
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

}  // namespace

TEST_SUITE("measures") {

TEST_CASE("first surface area measure") {
  const auto seg = surface_area_measure_1(make_centered_segment(v2(0.6, 0.8)));
  CHECK(seg.atoms().size() == 2);
  CHECK(weight_at(seg, v2(-0.8, 0.6)) == doctest::Approx(2.0));
  CHECK(weight_at(seg, v2(0.8, -0.6)) == doctest::Approx(2.0));

  const auto sq = surface_area_measure_1(make_polygon({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}));
  CHECK(sq.atoms().size() == 4);
  for (const auto& d : {v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1)}) CHECK(weight_at(sq, d) == doctest::Approx(1.0));

  const auto tri = surface_area_measure_1(make_polygon({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}));
  CHECK(weight_at(tri, v2(0, -1)) == doctest::Approx(1.0));
  CHECK(weight_at(tri, v2(-1, 0)) == doctest::Approx(1.0));
  CHECK(weight_at(tri, v2(1, 1)) == doctest::Approx(std::sqrt(2.0)));
  CHECK_FALSE(tri.is_even());
  CHECK(tri.total_mass() == doctest::Approx(2.0 + std::sqrt(2.0)));

  CHECK(surface_area_measure_1(make_point(v2(1, 1))).empty());

  // Additive in K.
  Rng rng(4);
  const Body a = random_polygon(rng, 6);
  const Body b = random_polygon(rng, 7);
  const auto sum = surface_area_measure_1(minkowski_sum(a, b));
  const auto parts = surface_area_measure_1(a) + surface_area_measure_1(b);
  CHECK(sum.atoms().size() == parts.atoms().size());
  for (const auto& atom : parts.atoms()) CHECK(weight_at(sum, atom.dir) == doctest::Approx(atom.weight));
}

TEST_CASE("generating measure of a zonotope") {
  const Zonotope z(v2(1, 1), {v2(3, 4)});
  const auto m = generating_measure(z);
  CHECK(m.is_even());
  CHECK(weight_at(m, v2(0.6, 0.8)) == doctest::Approx(2.5));
  CHECK(weight_at(m, v2(-0.6, -0.8)) == doctest::Approx(2.5));
  // h(Z - c, u) = int |<u, v>| d rho_Z.
  for (double t = 0; t < 3; t += 0.37) {
    const Vec u = v2(std::cos(t), std::sin(t));
    double h = 0.0;
    for (const auto& a : m.atoms()) h += std::abs(u.dot(a.dir)) * a.weight;
    CHECK(h == doctest::Approx(support(Body(z), u) - u.dot(z.center())));
  }
  CHECK_THROWS_AS(AtomicSphereMeasure({{v2(1, 0), -1.0}}), GeometryError);
  CHECK_THROWS_AS(AtomicSphereMeasure({{v2(0, 0), 1.0}}), GeometryError);
}

TEST_CASE("planar mixed volume") {
  const Body s1 = make_centered_segment(v2(1, 0));
  const Body s2 = make_centered_segment(v2(0, 1));
  CHECK(mixed_volume_2d(s1, s2) == doctest::Approx(2.0));
  CHECK(mixed_volume_segments({v2(1, 0), v2(0, 1)}) == doctest::Approx(2.0));
  CHECK(mixed_volume_segments({v2(1, 0), v2(2, 0)}) == 0.0);
  CHECK(mixed_volume_segments({v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)}) == doctest::Approx(4.0 / 3.0));
  CHECK(oracle::mixed_volume_segments_polarized({v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)}) / 6.0 ==
        doctest::Approx(4.0 / 3.0));

  Rng rng(5);
  const Body k = random_polygon(rng, 8);
  CHECK(mixed_volume_2d(k, k) == doctest::Approx(volume(k)));
  CHECK(mixed_volume_2d(k, translate(s1, v2(3, 3))) == doctest::Approx(mixed_volume_2d(k, s1)));

  // Against the expansion V(K + eps B) = V(K) + 2 eps V(K, B) + eps^2 V(B).
  const Body sq = make_polygon({Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)});
  const Body disk = make_regular_polygon(256);
  const double mv = mixed_volume_2d(sq, disk);
  CHECK(mv == doctest::Approx(2.0).epsilon(1e-3));
  const double eps = 1e-3;
  const double expansion =
      (volume(minkowski_sum(sq, scale(disk, eps))) - volume(sq) - eps * eps * volume(disk)) / (2 * eps);
  CHECK(mv == doctest::Approx(expansion).epsilon(1e-9));
  CHECK(mixed_volume({sq, disk}) == doctest::Approx(mv));
}

TEST_CASE("segment mixed volume matches polarization oracle") {
  Rng rng(6);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 2;
    std::vector<Vec> gs;
    for (int i = 0; i < n; ++i) gs.push_back(rng.gaussian_vector(n));
    const double fact = n == 2 ? 2.0 : 6.0;
    CHECK(mixed_volume_segments(gs) ==
          doctest::Approx(oracle::mixed_volume_segments_polarized(gs) / fact).epsilon(1e-8));
  }
}

TEST_CASE("zonotope mixed volume is multilinear") {
  Rng rng(7);
  std::vector<Vec> g1{rng.gaussian_vector(3), rng.gaussian_vector(3)};
  std::vector<Vec> g2{rng.gaussian_vector(3)};
  std::vector<Vec> g3{rng.gaussian_vector(3), rng.gaussian_vector(3), rng.gaussian_vector(3)};
  const Body z1 = make_zonotope(Vec::Zero(3), g1);
  const Body z2 = make_zonotope(Vec::Zero(3), g2);
  const Body z3 = make_zonotope(Vec::Zero(3), g3);
  const Body z = make_zonotope(Vec::Zero(3), [&] {
    auto all = g1;
    all.insert(all.end(), g3.begin(), g3.end());
    return all;
  }());
  CHECK(mixed_volume({z, z2, z3}) ==
        doctest::Approx(mixed_volume({z1, z2, z3}) + mixed_volume({z3, z2, z3})).epsilon(1e-12));
  CHECK(mixed_volume({z3, z3, z3}) == doctest::Approx(volume(z3)).epsilon(1e-10));
}

TEST_CASE("width as a mixed volume") {
  CHECK(width_constant(2) == doctest::Approx(1.0));
  CHECK(width_constant(3) == doctest::Approx(1.5));
  CHECK(width_constant(4) == doctest::Approx(3.0));

  const auto r = width_mixed_volume_check(make_centered_segment(v2(1, 0)), v2(1, 0));
  CHECK(r.pass);
  CHECK(r.constants.at("lhs") == doctest::Approx(2.0));
  CHECK(r.constants.at("mixed_volume") == doctest::Approx(2.0));
  CHECK(r.constants.at("kappa") == doctest::Approx(1.0));
  CHECK(r.constants.at("reference_constant") == 0.5);
  CHECK(r.constants.at("deviates_from_reference") == 1.0);

  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const Body k = random_polygon(rng, 3 + t % 9);
    const Vec v = rng.unit_vector(2);
    CHECK(width_mixed_volume_check(k, v).pass);
  }
  const Body sym = scale(difference_body(random_polygon(rng, 5)), 0.5);
  const Vec v = rng.unit_vector(2);
  CHECK(support(difference_body(sym), v) == doctest::Approx(2.0 * support(sym, v)));

  for (int t = 0; t < 10; ++t) {
    const Body z = make_zonotope(rng.gaussian_vector(3), {rng.gaussian_vector(3), rng.gaussian_vector(3),
                                                          rng.gaussian_vector(3), rng.gaussian_vector(3)});
    const auto r3 = width_mixed_volume_check(z, rng.gaussian_vector(3));
    CHECK(r3.pass);
    CHECK(r3.constants.at("kappa") == doctest::Approx(1.5));
    CHECK(r3.constants.at("deviates_from_reference") == 1.0);
  }
  CHECK_THROWS_AS(width_mixed_volume_check(make_cube(2), Vec::Zero(2)), GeometryError);
}

TEST_CASE("mixed volume splits over a subspace and its complement") {
  const Subspace e1(Mat::Identity(2, 1));
  const auto r = gardner_split_check(e1, {make_centered_segment(v2(1, 0))}, {make_centered_segment(v2(0, 1))});
  CHECK(r.pass);
  CHECK(r.constants.at("lhs") == doctest::Approx(4.0));

  Rng rng(9);
  const Mat q = random_rotation3(rng);
  const Subspace plane(q.leftCols(2));
  const Vec normal = q.col(2);
  std::vector<Body> kg;
  for (int i = 0; i < 2; ++i)
    kg.push_back(make_zonotope(Vec::Zero(3), {rng.gaussian_vector(3), rng.gaussian_vector(3), rng.gaussian_vector(3)}));
  const auto r3 = gardner_split_check(plane, kg, {make_centered_segment(1.7 * normal)});
  CHECK(r3.pass);
  CHECK(r3.residual <= 1e-10);

  // Rotating the whole configuration keeps the identity.
  const Mat q2 = random_rotation3(rng);
  std::vector<Body> rotated;
  for (const auto& b : kg) rotated.push_back(linear_image(q2, b));
  const auto r4 = gardner_split_check(Subspace(q2 * q.leftCols(2)), rotated, {make_centered_segment(1.7 * q2 * normal)});
  CHECK(r4.pass);
  CHECK(r4.constants.at("lhs") == doctest::Approx(r3.constants.at("lhs")).epsilon(1e-10));

  CHECK_THROWS_AS(gardner_split_check(plane, kg, {make_centered_segment(q.col(0))}), GeometryError);
}

TEST_CASE("Klain function of a valuation") {
  const auto mu = width_valuation(v2(1, 0));
  CHECK(klain_line(mu, LineDir(v2(1, 0))) == doctest::Approx(1.0));
  CHECK(klain_line(mu, LineDir(v2(0, 1))) == doctest::Approx(0.0));
  const LinearValuation bad{"area", [](const Body& k) { return volume(k) + 1.0; }};
  CHECK_THROWS_AS(klain_line(bad, LineDir(v2(1, 0))), GeometryError);

  const AtomicSphereMeasure seg({{v2(1, 0), 0.5}, {v2(-1, 0), 0.5}});
  CHECK(valuation_on_zonotope(klain_function(mu), seg) == doctest::Approx(2.0));
  CHECK(valuation_on_zonotope(klain_function(mu), AtomicSphereMeasure()) == 0.0);
  CHECK_THROWS_AS(valuation_on_zonotope(klain_function(mu), AtomicSphereMeasure({{v2(1, 0), 1.0}})), GeometryError);

  Rng rng(10);
  std::vector<Vec> gens;
  for (int i = 0; i < 5; ++i) gens.push_back(rng.gaussian_vector(2));
  const Zonotope z(rng.gaussian_vector(2), gens);
  const auto corners = oracle::zonotope_corners(z.center(), gens);
  for (int k = 0; k < 8; ++k) {
    const Vec u = rng.unit_vector(2);
    const double direct = oracle::support(corners, u) + oracle::support(corners, -u);
    CHECK(valuation_on_zonotope(klain_function(width_valuation(u)), generating_measure(z)) ==
          doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("positivity of mixed volumes") {
  CHECK(positivity_check({make_centered_segment(v2(1, 0)), make_centered_segment(v2(0, 1))}));
  CHECK_FALSE(positivity_check({make_centered_segment(v2(1, 0)), make_centered_segment(v2(2, 0))}));
  const Body plane = make_zonotope(Vec::Zero(3), {v3(1, 0, 0), v3(0, 1, 0)});
  CHECK(positivity_check({plane, plane, make_centered_segment(v3(0, 0, 1))}));
  CHECK_FALSE(positivity_check({plane, plane, make_centered_segment(v3(1, 1, 0))}));
  CHECK(positivity_check({make_cube(3), make_cube(3), make_cube(3)}));

  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    std::vector<Body> bodies;
    std::vector<std::vector<Vec>> families;
    // Draw generators from a small pool of directions so that degenerate
    // configurations are common.
    std::vector<Vec> pool{v3(1, 0, 0), v3(0, 1, 0), v3(1, 1, 0), v3(0, 0, 1), v3(1, 0, 1)};
    for (int i = 0; i < 3; ++i) {
      std::vector<Vec> g;
      const int m = rng.uniform_int(1, 2);
      for (int j = 0; j < m; ++j) g.push_back(pool[rng.uniform_int(0, t % 2 == 0 ? 2 : 4)]);
      bodies.push_back(make_zonotope(Vec::Zero(3), g));
      families.push_back(g);
    }
    const bool expected = oracle::has_transversal(families, 1e-9);
    CHECK(positivity_check(bodies) == expected);
    CHECK((mixed_volume(bodies) > 1e-12) == expected);
  }
}

TEST_CASE("planar mixed volume is monotone") {
  Rng rng(12);
  for (int t = 0; t < 50; ++t) {
    const Body k = random_polygon(rng, 6);
    const Body big = minkowski_sum(k, scale(random_polygon(rng, 4), 0.3));
    const Body l = random_polygon(rng, 5);
    // k + P contains a translate of k; mixed volume is translation invariant.
    CHECK(mixed_volume_2d(k, l) <= mixed_volume_2d(big, l) + 1e-12);
  }
}

TEST_CASE("measure JSON") {
  const AtomicSphereMeasure m({{v2(1, 1), 0.5}, {v2(-1, -1), 0.5}});
  const auto back = measure_from_json(measure_to_json(m));
  CHECK(back.atoms().size() == 2);
  CHECK(back.is_even());
  CHECK(std::abs(back.total_mass() - 1.0) < 1e-15);
}

}
