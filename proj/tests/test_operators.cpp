#include <doctest.h>

#include <cmath>
#include <numbers>

#include "minkops/operators.hpp"
#include "minkops/random.hpp"
#include "minkops/verifier.hpp"
#include "oracles.hpp"

using namespace minkops;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v2(double x, double y) { return Vec(Vec2(x, y)); }

Mat m2(double a, double b, double c, double d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

Body triangle() { return make_polygon({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)}); }

Body random_polygon(Rng& rng, int m) {
  std::vector<Vec2> pts;
  for (int i = 0; i < m; ++i) pts.emplace_back(rng.normal(), rng.normal());
  return Body(Polygon2::hull(pts));
}

double support_gap(const Body& a, const Body& b, int directions) {
  double worst = 0.0;
  for (int i = 0; i < directions; ++i) {
    const Vec u = Vec(unit_at(2.0 * kPi * i / directions));
    worst = std::max(worst, std::abs(support(a, u) - support(b, u)));
  }
  return worst;
}

bool same_line(const Vec& a, const Vec& b, double tol) {
  return std::abs(a(0) * b(1) - a(1) * b(0)) <= tol * a.norm() * b.norm();
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("catalog operators") {
  Rng rng(1);
  const Body sym = translate(scale(difference_body(random_polygon(rng, 6)), 0.5), v2(2, -1));
  const Body centered = translate(sym, -steiner_point(sym));
  CHECK(hausdorff_distance(apply(OperatorDescriptor::diff_body(), sym), scale(centered, 2.0)) < 1e-12);

  const Body k = random_polygon(rng, 7);
  CHECK(hausdorff_distance(apply(OperatorDescriptor::blend(1, 1), k), difference_body(k)) < 1e-12);

  const Body t = triangle();
  const Body id = apply(OperatorDescriptor::identity(), t);
  CHECK(steiner_point(id).norm() < 1e-15);
  CHECK(hausdorff_distance(translate(id, steiner_point(t)), t) < 1e-15);
  CHECK(hausdorff_distance(apply(OperatorDescriptor::reflection(), t), reflect(id)) < 1e-15);

  for (const auto& op : {OperatorDescriptor::identity(), OperatorDescriptor::diff_body(),
                         OperatorDescriptor::blend(2, 3)}) {
    const Body img = apply(op, make_point(v2(4, 5)));
    CHECK(img.is_point());
    CHECK(support(img, v2(1, 0)) == 0.0);
    CHECK(support(img, v2(0, 1)) == 0.0);
  }

  CHECK_THROWS_AS(OperatorDescriptor::blend(-1, 2), OperatorError);
  CHECK_THROWS_AS(OperatorDescriptor::blend(0, 0), OperatorError);
  CHECK_THROWS_AS(apply(OperatorDescriptor::linear(Mat::Identity(3, 3), OperatorDescriptor::diff_body()), t),
                  OperatorError);
}

TEST_CASE("declared volume constants") {
  const auto d2 = OperatorDescriptor::diff_body().declared_vc(2);
  CHECK(d2->c == 4.0);
  CHECK(d2->big_c == 6.0);
  const auto d3 = OperatorDescriptor::diff_body().declared_vc(3);
  CHECK(d3->c == 8.0);
  CHECK(d3->big_c == 20.0);
  const auto dd = compose(OperatorDescriptor::diff_body(), OperatorDescriptor::diff_body()).declared_vc(2);
  CHECK(dd->c == 16.0);
  CHECK(dd->big_c == 36.0);
  const auto lin = OperatorDescriptor::linear(m2(2, 0, 0, 1), OperatorDescriptor::diff_body()).declared_vc(2);
  CHECK(lin->c == doctest::Approx(8.0));
  CHECK(lin->big_c == doctest::Approx(12.0));
  const auto bl = OperatorDescriptor::blend(1, 2).declared_vc(2);
  CHECK(bl->c == 9.0);
  CHECK(bl->big_c == 13.0);
  CHECK(OperatorDescriptor::identity().declared_vc(3)->c == 1.0);
  CHECK_FALSE(OperatorDescriptor::from_rho_pi(random_rho_pi_table(16, 1)).declared_vc(2).has_value());

  // The n = 2 blend bracket against triangles and symmetric bodies.
  Rng rng(2);
  const Body t = random_polygon(rng, 3);
  const Body s = scale(difference_body(random_polygon(rng, 5)), 0.5);
  for (const auto& [a, b] : {std::pair{1.0, 2.0}, std::pair{0.3, 0.7}, std::pair{2.0, 2.0}}) {
    const auto op = OperatorDescriptor::blend(a, b);
    const auto br = *op.declared_vc(2);
    CHECK(volume(apply(op, t)) / volume(t) == doctest::Approx(br.big_c));
    CHECK(volume(apply(op, s)) / volume(s) == doctest::Approx(br.c));
  }
}

TEST_CASE("composition") {
  Rng rng(3);
  const Body k = random_polygon(rng, 8);
  const auto dd = compose(OperatorDescriptor::diff_body(), OperatorDescriptor::diff_body());
  CHECK(hausdorff_distance(apply(dd, k), scale(difference_body(k), 2.0)) < 1e-12);

  const auto lin = OperatorDescriptor::linear(m2(1, 2, 0, 1), OperatorDescriptor::diff_body());
  const auto with_id = compose(OperatorDescriptor::identity(), lin);
  CHECK(hausdorff_distance(apply(with_id, k), apply(lin, k)) < 1e-12);

  // Nested compositions flatten, outermost first.
  const auto three = compose(OperatorDescriptor::reflection(), dd);
  const auto& ops = std::get<op::Compose>(three.kind()).ops;
  REQUIRE(ops.size() == 3);
  CHECK(ops[0]->kind_name() == "reflection");

  const auto order = compose(OperatorDescriptor::linear(m2(2, 0, 0, 1), OperatorDescriptor::identity()),
                             OperatorDescriptor::linear(m2(0, -1, 1, 0), OperatorDescriptor::identity()));
  const Body expected = linear_image(m2(2, 0, 0, 1) * m2(0, -1, 1, 0), apply(OperatorDescriptor::identity(), k));
  CHECK(hausdorff_distance(apply(order, k), expected) < 1e-12);
}

TEST_CASE("segment image data") {
  const Vec v = v2(0.6, -0.8);
  CHECK((p_of(OperatorDescriptor::diff_body(), v) - v2(-1.2, 1.6)).norm() < 1e-14);
  CHECK((p_of(OperatorDescriptor::blend(2, 3), v) - 5.0 * canonical_sign(v)).norm() < 1e-13);
  const Mat g = m2(1, 2, -0.5, 3);
  CHECK((p_of(OperatorDescriptor::linear(g, OperatorDescriptor::diff_body()), v) - canonical_sign(2.0 * g * v)).norm() <
        1e-13);

  Rng rng(4);
  for (int i = 0; i < 20; ++i) {
    const LineDir e(rng.gaussian_vector(2));
    CHECK(rho1_of(OperatorDescriptor::diff_body(), e) == doctest::Approx(4.0));
    CHECK(rho1_of(OperatorDescriptor::identity(), e) == doctest::Approx(2.0));
    CHECK((pi1_of(OperatorDescriptor::diff_body(), e).u() - e.u()).norm() < 1e-14);
    const auto lin = OperatorDescriptor::linear(g, OperatorDescriptor::identity());
    CHECK((pi1_of(lin, e).u() - LineDir(g * e.u()).u()).norm() < 1e-14);
    // rho_1 = 2 |p|.
    CHECK(std::abs(rho1_of(lin, e) - 2.0 * p_of(lin, e.u()).norm()) < 1e-12);
  }

  const auto hull_with_origin = OperatorDescriptor::custom("fatten", [](const Body& k) {
    return minkowski_sum(k, make_centered_segment(v2(0, 0.5)));
  });
  CHECK_THROWS_AS(p_of(hull_with_origin, v2(1, 0)), OperatorError);
}

TEST_CASE("segment image law") {
  Rng rng(5);
  const auto table = random_rho_pi_table(64, 7);
  const std::vector<OperatorDescriptor> ops{
      OperatorDescriptor::diff_body(), OperatorDescriptor::blend(0.5, 1.5),
      OperatorDescriptor::linear(m2(1, 0.3, -0.2, 2), OperatorDescriptor::diff_body()),
      OperatorDescriptor::from_rho_pi(table), OperatorDescriptor::from_p(PFunction::linear(m2(0, 1, -3, 1)))};
  for (const auto& op : ops) {
    for (int i = 0; i < 1000; ++i) {
      const Vec v = rng.gaussian_vector(2);
      const Body img = apply(op, make_centered_segment(v));
      CHECK(steiner_point(img).norm() < 1e-10);
      CHECK(hausdorff_distance(img, make_centered_segment(p_of(op, v))) < 1e-10);
    }
  }
}

TEST_CASE("rho/pi tables") {
  CHECK_THROWS_AS(RhoPiTable({0.0}, {1.0}, {0.0}), OperatorError);
  CHECK_THROWS_AS(RhoPiTable({0.0, 1.0}, {1.0}, {0.0, 1.0}), OperatorError);
  CHECK_THROWS_AS(RhoPiTable({0.0, 1.0}, {1.0, -1.0}, {0.0, 1.0}), OperatorError);
  CHECK_THROWS_AS(RhoPiTable({0.0, 4.0}, {1.0, 1.0}, {0.0, 1.0}), OperatorError);
  CHECK_THROWS_AS(RhoPiTable({1.0, 0.5}, {1.0, 1.0}, {0.0, 1.0}), OperatorError);
  CHECK_THROWS_AS(RhoPiTable({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}, {0.0, 1.0, 0.5}), OperatorError);
  CHECK_THROWS_AS(RhoPiTable({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}, {0.0, 1.0, 3.5}), OperatorError);
  CHECK_NOTHROW(RhoPiTable({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}, {0.0, -1.0, -2.0}));
  CHECK(RhoPiTable({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}, {0.0, -1.0, -2.0}).orientation() == -1);

  // Nodes are hit exactly and a linear map is reproduced between them.
  const Mat g = m2(2, 0.5, -0.3, 1);
  std::vector<double> theta, rho, lift;
  for (int i = 0; i < 12; ++i) {
    theta.push_back(kPi * i / 12);
    const Vec2 w = g * unit_at(theta.back());
    rho.push_back(2.0 * w.norm());
    double ang = std::atan2(w.y(), w.x());
    if (!lift.empty()) ang = lift.back() + std::remainder(ang - lift.back(), 2.0 * kPi);
    lift.push_back(ang);
  }
  const RhoPiTable tab(theta, rho, lift);
  CHECK(tab.orientation() == 1);
  for (double t = -3.0; t < 7.0; t += 0.0137) {
    const Vec2 expect = g * unit_at(t);
    const Vec2 got = tab.p_at(t);
    CHECK(std::min((got - expect).norm(), (got + expect).norm()) < 1e-12);
    CHECK(tab.rho_at(t) == doctest::Approx(2.0 * expect.norm()));
  }
  for (std::size_t i = 0; i < theta.size(); ++i) CHECK(tab.rho_at(theta[i]) == doctest::Approx(rho[i]));
  const auto [slo, shi] = tab.slope_range();
  CHECK(slo > 0.0);
  CHECK(shi >= slo);
  CHECK(tab.m_phi() <= tab.big_m_phi());

  const RhoPiTable back = table_from_json(Json::parse(dump_json(table_to_json(tab))));
  CHECK(back.theta() == tab.theta());
  CHECK(back.pi_lift() == tab.pi_lift());
  const std::string csv = table_to_csv(tab);
  CHECK(csv.rfind("theta,rho,pi_lift\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
}

TEST_CASE("applying a table") {
  const auto dtab = extract_table(OperatorDescriptor::diff_body(), 360);
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    const Body k = random_polygon(rng, 3 + t % 10);
    CHECK(support_gap(Body(apply_rho_pi(dtab, k)), difference_body(k), 360) < 1e-10);
  }
  CHECK(apply_rho_pi(dtab, make_point(v2(1, 2))).generators().empty());
  CHECK_THROWS_AS(apply_rho_pi(dtab, make_cube(3)), OperatorError);

  // A segment goes to half of rho_1 times the unit segment of pi_1.
  const auto tab = random_rho_pi_table(90, 3);
  for (double th : {0.0, 0.4, 1.9, 3.0}) {
    const Zonotope img = apply_rho_pi(tab, make_centered_segment(Vec(unit_at(th))));
    REQUIRE(img.generators().size() == 1);
    const Vec g = img.generators()[0];
    CHECK(g.norm() == doctest::Approx(0.5 * tab.rho_at(th)));
    CHECK(same_line(g, tab.pi_at(th).u(), 1e-12));
  }
}

TEST_CASE("p functions") {
  Rng rng(7);
  std::vector<Vec> gens;
  for (int i = 0; i < 4; ++i) gens.push_back(rng.gaussian_vector(3));
  const Zonotope z(Vec::Zero(3), gens);
  const Zonotope same = apply_p_zonotope(PFunction::linear(Mat::Identity(3, 3)), z);
  CHECK(hausdorff_distance(Body(same), Body(z)) < 1e-12);

  const Mat r = random_rotations(3, 1, 9)[0];
  const auto p = PFunction::custom(3, "twice_rotated", [r](const Vec& v) { return Vec(2.0 * canonical_sign(r * v)); });
  const Zonotope rz = apply_p_zonotope(p, z);
  CHECK(hausdorff_distance(Body(rz), linear_image(2.0 * r, Body(z))) < 1e-12);

  const Vec v = rng.gaussian_vector(3);
  const Zonotope seg = apply_p_zonotope(p, Zonotope(Vec::Zero(3), {v}));
  CHECK(hausdorff_distance(Body(seg), make_centered_segment(p(v))) < 1e-14);

  const auto zero = PFunction::custom(2, "zero", [](const Vec& x) { return Vec(Vec::Zero(x.size())); });
  CHECK_THROWS_AS(zero(v2(1, 0)), OperatorError);
  CHECK_THROWS_AS(apply_p_zonotope(zero, Zonotope(Vec::Zero(2), {v2(1, 0)})), OperatorError);
  CHECK_THROWS_AS(PFunction::linear(m2(1, 2, 2, 4)), OperatorError);
  CHECK_THROWS_AS(p(v2(1, 0)), OperatorError);

  // Tabulated p: samples are hit, directions interpolate spherically.
  const auto tp = PFunction::table({0.0, kPi / 2}, {Vec2(1, 0), Vec2(0, 2)});
  CHECK((tp(v2(1, 0)) - v2(1, 0)).norm() < 1e-15);
  CHECK((tp(v2(0, 3)) - v2(0, 6)).norm() < 1e-14);
  const Vec mid = tp(Vec(unit_at(kPi / 4)));
  CHECK(mid.norm() == doctest::Approx(1.5));
  CHECK(same_line(mid, v2(1, 1), 1e-14));
  CHECK(tp.sign_ambiguous_cells().empty());

  // The middle sample is stored as (-1, 0.2), opposite to its neighbours.
  const auto flip = PFunction::table({0.0, 1.0, 2.0}, {Vec2(1, 1), Vec2(1, -0.2), Vec2(-1, 0.5)});
  CHECK(flip.sign_ambiguous_cells() == std::vector<std::size_t>{0, 2});
  CHECK(flip(Vec(unit_at(0.5)))(1) >= 0.0);

  const auto back = PFunction::from_json(Json::parse(dump_json(flip.to_json())));
  for (double t = 0.0; t < kPi; t += 0.1)
    CHECK((back(Vec(unit_at(t))) - flip(Vec(unit_at(t)))).norm() < 1e-15);
  CHECK_THROWS_AS(p.to_json(), OperatorError);
}

TEST_CASE("table extraction") {
  const auto d4 = extract_table(OperatorDescriptor::diff_body(), 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(d4.rho()[i] == doctest::Approx(4.0));
    CHECK(d4.pi_lift()[i] == doctest::Approx(d4.theta()[i]));
  }
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const Body k = random_polygon(rng, 9);
    CHECK(support_gap(Body(apply_rho_pi(d4, k)), difference_body(k), 360) < 1e-10);
  }

  for (const Mat& g : {m2(2, 0, 0, 1), m2(1, 0, 0, -1), m2(0.3, 1.2, -0.8, 0.5)}) {
    const auto op = OperatorDescriptor::linear(g, OperatorDescriptor::diff_body());
    const auto tab = extract_table(op, 720);
    CHECK(tab.orientation() == (g.determinant() > 0 ? 1 : -1));
    for (std::size_t i = 0; i < tab.size(); i += 37) {
      const Vec2 w = g * unit_at(tab.theta()[i]);
      CHECK(tab.rho()[i] == doctest::Approx(4.0 * w.norm()));
      CHECK(same_line(Vec(unit_at(tab.pi_lift()[i])), Vec(w), 1e-12));
    }
    for (int t = 0; t < 5; ++t) {
      const Body k = random_polygon(rng, 7);
      CHECK(support_gap(Body(apply_rho_pi(tab, k)), apply(op, k), 360) < 1e-6);
    }
  }

  // A table operator extracts back to itself on its own nodes.
  const auto tab = random_rho_pi_table(60, 11, 0.3, 0.5, 2, true);
  const auto again = extract_table(OperatorDescriptor::from_rho_pi(tab), 60);
  CHECK(again.orientation() == -1);
  for (std::size_t i = 0; i < 60; ++i) {
    CHECK(again.rho()[i] == doctest::Approx(tab.rho()[i]).epsilon(1e-12));
    CHECK(std::abs(std::remainder(again.pi_lift()[i] - tab.pi_lift()[i], kPi)) < 1e-12);
  }

  CHECK_THROWS_WITH_AS(extract_table(OperatorDescriptor::identity(), 16), doctest::Contains("even"), OperatorError);
  CHECK_THROWS_AS(extract_table(OperatorDescriptor::diff_body(), 1), OperatorError);

  // pi folding the circle twice is not injective.
  const auto twice = OperatorDescriptor::from_p(PFunction::custom(2, "double_angle", [](const Vec& v) {
    const double a = 2.0 * std::atan2(v(1), v(0));
    return Vec(v.norm() * unit_at(a));
  }));
  CHECK_THROWS_AS(extract_table(twice, 32), OperatorError);
}

TEST_CASE("Klain data of an operator") {
  const auto d = OperatorDescriptor::diff_body();
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const Vec u = rng.unit_vector(2);
    const LineDir e(rng.gaussian_vector(2));
    CHECK(klain_from_segment_data(d, u, e) == doctest::Approx(std::abs(u.dot(e.u()))));
  }
}

TEST_CASE("operator JSON") {
  const auto tab = random_rho_pi_table(8, 2);
  const std::vector<OperatorDescriptor> ops{
      OperatorDescriptor::identity(),
      OperatorDescriptor::reflection(),
      OperatorDescriptor::diff_body(),
      OperatorDescriptor::blend(0.25, 3),
      OperatorDescriptor::linear(m2(1, 2, 3, 4), OperatorDescriptor::diff_body()),
      compose(OperatorDescriptor::diff_body(), OperatorDescriptor::blend(1, 2)),
      OperatorDescriptor::from_rho_pi(tab),
      OperatorDescriptor::from_p(PFunction::linear(m2(0, 1, -1, 0))),
      OperatorDescriptor::from_p(PFunction::table({0.0, 1.0}, {Vec2(1, 0), Vec2(0, 1)}))};
  Rng rng(10);
  const Body k = random_polygon(rng, 6);
  for (const auto& op : ops) {
    const std::string text = dump_json(operator_to_json(op));
    const auto back = operator_from_json(Json::parse(text));
    CHECK(back.kind_name() == op.kind_name());
    CHECK(dump_json(operator_to_json(back)) == text);
    CHECK(hausdorff_distance(apply(back, k), apply(op, k)) == 0.0);
  }
  const Json with_vc = operator_to_json(OperatorDescriptor::diff_body(), 2);
  CHECK(with_vc.at("vc").at("c") == 4.0);
  CHECK(with_vc.at("vc").at("C") == 6.0);
  CHECK(operator_from_json(Json::parse(R"({"kind":"linear","matrix":[[2,0],[0,1]]})")).kind_name() == "linear");
  CHECK_THROWS_AS(operator_from_json(Json::parse(R"({"kind":"mystery"})")), OperatorError);
  CHECK_THROWS_AS(operator_from_json(Json::parse(R"({"kind":"blend","a":1})")), OperatorError);
  CHECK_THROWS_AS(operator_from_json(Json::parse(R"({"kind":"blend","a":-1,"b":1})")), OperatorError);
  CHECK_THROWS_AS(operator_from_json(Json::parse(R"([1,2])")), OperatorError);
  CHECK_THROWS_AS(operator_to_json(OperatorDescriptor::custom("x", [](const Body& b) { return b; })), OperatorError);
}

TEST_CASE("operator axioms on random tables") {
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto op = OperatorDescriptor::from_rho_pi(random_rho_pi_table(32 + t, 100 + t, 0.4, 0.6, 3, t % 2 == 1));
    const Body a = random_polygon(rng, 5);
    const Body b = random_polygon(rng, 8);
    const Vec shift = rng.gaussian_vector(2);
    CHECK(hausdorff_distance(apply(op, minkowski_sum(a, b)), minkowski_sum(apply(op, a), apply(op, b))) < 1e-9);
    CHECK(hausdorff_distance(apply(op, translate(a, shift)), apply(op, a)) < 1e-10);
    CHECK(hausdorff_distance(apply(op, reflect(a)), apply(op, a)) < 1e-10);
    CHECK(dimension(apply(op, a)) == 2);
  }
}

}
