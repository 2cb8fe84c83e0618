#include <doctest.h>

#include <cmath>
#include <numbers>

#include "minkops/grassmannian.hpp"
#include "minkops/random.hpp"
#include "oracles.hpp"

using namespace minkops;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v2(double x, double y) { return Vec(Vec2(x, y)); }

Mat columns(std::initializer_list<Vec> cols) {
  Mat m(cols.begin()->size(), static_cast<Eigen::Index>(cols.size()));
  int j = 0;
  for (const auto& c : cols) m.col(j++) = c;
  return m;
}

}  // namespace

TEST_SUITE("grassmannian") {

TEST_CASE("canonical line directions") {
  CHECK(LineDir(v2(0, -1)).u() == v2(0, 1));
  CHECK(LineDir(v2(3, 0)).u() == v2(1, 0));
  Vec w(3);
  w << 1, -2, 0;
  Vec expected(3);
  expected << -1, 2, 0;
  CHECK((LineDir(w).u() - expected / std::sqrt(5.0)).norm() < 1e-15);
  CHECK((LineDir(w).u() - LineDir(-w).u()).norm() == 0.0);
  CHECK_THROWS_AS(LineDir(Vec::Zero(2)), GeometryError);
  for (double t : {0.0, 0.3, 1.5, 2.9}) CHECK(line_angle(line_at(t)) == doctest::Approx(t));
  CHECK(line_angle(line_at(kPi + 0.2)) == doctest::Approx(0.2));
}

TEST_CASE("line distance") {
  const LineDir e1(v2(1, 0));
  CHECK(dist_lines(e1, e1) == 0.0);
  CHECK(dist_lines(e1, LineDir(v2(0, 1))) == doctest::Approx(std::sqrt(2.0)));
  CHECK(dist_lines(e1, line_at(kPi / 3)) == doctest::Approx(1.0));
  CHECK(dist_lines(e1, line_at(2 * kPi / 3)) == doctest::Approx(1.0));
  CHECK_THROWS_AS(dist_lines(e1, LineDir(Vec::Ones(3))), GeometryError);

  // Triangle inequality on random triples.
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const LineDir a(rng.gaussian_vector(3)), b(rng.gaussian_vector(3)), c(rng.gaussian_vector(3));
    CHECK(dist_lines(a, c) <= dist_lines(a, b) + dist_lines(b, c) + 1e-12);
    CHECK(dist_lines(a, b) <= std::sqrt(2.0) + 1e-15);
  }
}

TEST_CASE("subspace distance") {
  const Mat e = Mat::Identity(4, 4);
  const Subspace f12(columns({e.col(0), e.col(1)}));
  const Subspace f13(columns({e.col(0), e.col(2)}));
  CHECK(dist_subspaces(f12, f12) < 1e-15);
  CHECK(dist_subspaces(f12, f13) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(dist_subspaces(f12, Subspace(columns({e.col(0)}))), GeometryError);
  CHECK_THROWS_AS(Subspace(columns({e.col(0), 2.0 * e.col(0)})), GeometryError);

  for (double t : {0.1, 0.7, 1.3}) {
    const Subspace a(columns({v2(1, 0)}));
    const Subspace b(columns({v2(std::cos(t), std::sin(t))}));
    CHECK(dist_subspaces(a, b) == doctest::Approx(dist_lines(line_at(0), line_at(t))));
  }

  CHECK(oracle::maxmin_subspace_distance(f12.basis(), f13.basis(), 10000) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));

  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    const int n = 3 + t % 3;
    const int k = 1 + t % (n - 1);
    Mat a(n, k), b(n, k);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) {
        a(i, j) = rng.normal();
        b(i, j) = rng.normal();
      }
    const Subspace fa(a), fb(b);
    const double ref = oracle::maxmin_subspace_distance(fa.basis(), fb.basis(), 10000);
    CHECK(std::abs(dist_subspaces(fa, fb) - ref) < 1e-3);
  }
}

TEST_CASE("subspace complement") {
  Rng rng(3);
  Mat a(5, 2);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 2; ++j) a(i, j) = rng.normal();
  const Subspace s(a);
  const Mat c = s.complement_basis();
  CHECK(c.cols() == 3);
  CHECK((s.basis().transpose() * c).norm() < 1e-12);
  CHECK((c.transpose() * c - Mat::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("two segment geometry") {
  const auto right = two_segment_geometry(v2(1, 0), v2(0, 1));
  CHECK(right.d == doctest::Approx(std::sqrt(2.0)));
  CHECK(right.area == doctest::Approx(4.0));
  CHECK(right.ratio == doctest::Approx(std::sqrt(2.0) / 4.0));

  const auto sixty = two_segment_geometry(v2(1, 0), v2(0.5, std::sqrt(3.0) / 2.0));
  CHECK(sixty.d == doctest::Approx(1.0));
  CHECK(sixty.area == doctest::Approx(2.0 * std::sqrt(3.0)));
  CHECK(sixty.ratio == doctest::Approx(1.0 / (2.0 * std::sqrt(3.0))));
  CHECK(sixty.area ==
        doctest::Approx(oracle::zonogon_area(Vec::Zero(2), {v2(1, 0), v2(0.5, std::sqrt(3.0) / 2.0)})));

  const auto thin = two_segment_geometry(v2(1, 0), v2(std::cos(1e-4), std::sin(1e-4)));
  CHECK(std::abs(thin.ratio - 0.25) < 1e-4);

  // Obtuse input reduces to the acute angle.
  const auto obtuse = two_segment_geometry(v2(1, 0), v2(-0.5, std::sqrt(3.0) / 2.0));
  CHECK(obtuse.alpha == doctest::Approx(kPi / 3));
  CHECK_THROWS_AS(two_segment_geometry(v2(1, 0), v2(-2, 0)), GeometryError);
}

TEST_CASE("line and subspace JSON") {
  const LineDir e(v2(-1, -1));
  CHECK((line_from_json(line_to_json(e)).u() - e.u()).norm() < 1e-15);
  const Subspace s(Mat::Identity(3, 2));
  CHECK(dist_subspaces(subspace_from_json(subspace_to_json(s)), s) < 1e-15);
}

}
