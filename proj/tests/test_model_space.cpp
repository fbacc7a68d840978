#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hardylab/comparison.hpp"
#include "hardylab/model_space.hpp"
#include "oracles.hpp"

using namespace hardylab;

namespace {

ModelPoint pt(const ModelSpace& M, std::initializer_list<double> v) {
  Vec x(static_cast<int>(v.size()));
  int i = 0;
  for (double a : v) x(i++) = a;
  return M.make_point(std::move(x));
}

}  // namespace

TEST_CASE("distance: closed forms in the three models") {
  ModelSpace E(3, Curvature(0.0));
  CHECK(distance(pt(E, {0, 0, 0}), pt(E, {3, 4, 0})) == doctest::Approx(5.0));

  ModelSpace S(3, Curvature(1.0));
  const ModelPoint north = S.origin();
  const ModelPoint equator = pt(S, {1, 0, 0, 0});
  CHECK(distance(north, equator) == doctest::Approx(kPi / 2.0).epsilon(1e-14));

  ModelSpace H(3, Curvature(-1.0));
  const ModelPoint o = H.origin();
  const ModelPoint p =
      pt(H, {oracle::series_sinh(1.0), 0, 0, oracle::series_cosh(1.0)});
  CHECK(distance(o, p) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("distance: symmetry and triangle inequality on random triples") {
  std::mt19937_64 rng(11);
  for (double c : {-1.0, 0.0, 1.0}) {
    ModelSpace M(3, Curvature(c));
    const ModelPoint base = M.origin();
    const double radius = c > 0.0 ? 0.6 : 2.0;
    for (int k = 0; k < 300; ++k) {
      const ModelPoint a = random_point_in_ball(base, radius, 11, 3 * k);
      const ModelPoint b = random_point_in_ball(base, radius, 11, 3 * k + 1);
      const ModelPoint x = random_point_in_ball(base, radius, 11, 3 * k + 2);
      CHECK(distance(a, b) == distance(b, a));
      CHECK(distance(a, b) <= distance(a, x) + distance(x, b) + 1e-12);
    }
  }
}

TEST_CASE("log_map: flat case is exactly y - x; tiny separations shrink") {
  ModelSpace E(4, Curvature(0.0));
  const ModelPoint x = pt(E, {1, 2, 3, 4});
  const ModelPoint y = pt(E, {0, 1, -1, 2});
  CHECK((log_map(x, y) - (y.coords - x.coords)).norm() == 0.0);

  for (double c : {-1.0, 1.0}) {
    ModelSpace M(3, Curvature(c));
    const ModelPoint o = M.origin();
    const Vec v = 1e-7 * M.tangent_basis_vector(o, 0);
    const ModelPoint z = exp_map(o, v);
    CHECK(std::sqrt(M.form(log_map(o, z), log_map(o, z))) ==
          doctest::Approx(1e-7).epsilon(1e-8));
  }
}

TEST_CASE("log/exp consistency and norm = distance") {
  std::mt19937_64 rng(5);
  for (double c : {-2.0, -1.0, 0.0, 1.0}) {
    ModelSpace M(3, Curvature(c));
    const ModelPoint base = M.origin();
    const double radius = c > 0.0 ? 1.2 : 2.0;
    for (int k = 0; k < 200; ++k) {
      const ModelPoint x = random_point_in_ball(base, radius, 5, 2 * k);
      const ModelPoint y = random_point_in_ball(base, radius, 5, 2 * k + 1);
      if (distance(x, y) < 1e-8) continue;
      const Vec v = log_map(x, y);
      CHECK(std::sqrt(M.form(v, v)) == doctest::Approx(distance(x, y)).epsilon(1e-12));
      const ModelPoint back = exp_map(x, v);
      CHECK(distance(back, y) < 1e-9);
      if (c != 0.0)  // tangency under the model bilinear form
        CHECK(std::fabs(M.form(v, x.coords)) < 1e-9);
    }
  }
}

TEST_CASE("grad_distance: eikonal |grad d| = 1 at random points") {
  for (double c : {-1.0, 0.0, 1.0}) {
    ModelSpace M(3, Curvature(c));
    const ModelPoint base = M.origin();
    const double radius = c > 0.0 ? 1.2 : 3.0;
    const ModelPoint pole = random_point_in_ball(base, radius, 99, 10000);
    int checked = 0;
    for (int k = 0; checked < 10000; ++k) {
      const ModelPoint x = random_point_in_ball(base, radius, 99, k);
      if (distance(x, pole) < 1e-6) continue;
      const Vec g = grad_distance(x, pole);
      CHECK(M.form(g, g) == doctest::Approx(1.0).epsilon(1e-10));
      ++checked;
    }
  }
}

TEST_CASE("grad_distance: flat and spherical closed forms") {
  ModelSpace E(3, Curvature(0.0));
  const ModelPoint x = pt(E, {1, 1, 0});
  const ModelPoint pole = pt(E, {0, 0, 0});
  const Vec expected = (x.coords - pole.coords).normalized();
  CHECK((grad_distance(x, pole) - expected).norm() < 1e-14);

  // unit sphere: grad d_i(x) = (x cos d - x_i)/sin d
  ModelSpace S(3, Curvature(1.0));
  const ModelPoint xs = S.project((Vec(4) << 0.3, -0.2, 0.4, 0.8).finished());
  const ModelPoint xi = S.project((Vec(4) << -0.1, 0.5, 0.2, 0.9).finished());
  const double d = distance(xs, xi);
  const Vec formula = (xs.coords * std::cos(d) - xi.coords) / std::sin(d);
  CHECK((grad_distance(xs, xi) - formula).norm() < 1e-12);
}

TEST_CASE("angle_cosine: collinear limits in flat space") {
  ModelSpace E(3, Curvature(0.0));
  const ModelPoint pi = pt(E, {-1, 0, 0});
  const ModelPoint pj = pt(E, {1, 0, 0});
  CHECK(angle_cosine(pt(E, {0.2, 0, 0}), pi, pj) == doctest::Approx(-1.0));
  CHECK(angle_cosine(pt(E, {5, 0, 0}), pi, pj) == doctest::Approx(1.0));
}

TEST_CASE("angle_cosine agrees with the cosine law (dual route)") {
  for (double c : {-1.0, 0.0, 1.0}) {
    ModelSpace M(3, Curvature(c));
    const ModelPoint base = M.origin();
    const double radius = c > 0.0 ? 1.0 : 2.0;
    for (int k = 0; k < 400; ++k) {
      const ModelPoint pi = random_point_in_ball(base, radius, 17, 3 * k);
      const ModelPoint pj = random_point_in_ball(base, radius, 17, 3 * k + 1);
      const ModelPoint x = random_point_in_ball(base, radius, 17, 3 * k + 2);
      const double di = distance(x, pi), dj = distance(x, pj),
                   dij = distance(pi, pj);
      if (di < 1e-3 || dj < 1e-3 || dij < 1e-3) continue;
      CHECK(angle_cosine(x, pi, pj) ==
            doctest::Approx(cosine_law_angle(M.curvature(), di, dj, dij))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("cosine_law_angle: elementary cases") {
  CHECK(cosine_law_angle(Curvature(0.0), 3, 4, 5) == doctest::Approx(0.0));
  CHECK(cosine_law_angle(Curvature(0.0), 1, 1, 2) == doctest::Approx(-1.0));
  CHECK(cosine_law_angle(Curvature(1.0), kPi / 2, kPi / 2, kPi / 2) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK_THROWS_AS(cosine_law_angle(Curvature(0.0), 1.0, 1.0, 4.0), std::domain_error);
}

TEST_CASE("laplacian_distance values") {
  CHECK(laplacian_distance(ModelSpace(3, Curvature(0.0)), 2.0) == doctest::Approx(1.0));
  CHECK(laplacian_distance(ModelSpace(3, Curvature(1.0)), kPi / 2) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(laplacian_distance(ModelSpace(4, Curvature(-1.0)), 1.0) ==
        doctest::Approx(3.0 * oracle::series_coth(1.0)).epsilon(1e-13));
}

TEST_CASE("Laplace comparison: ct_c nonincreasing in the curvature parameter") {
  const double cs[] = {-4.0, -1.0, 0.0, 1.0, 4.0};
  for (size_t a = 0; a + 1 < 5; ++a) {
    for (int k = 1; k <= 100; ++k) {
      const double r = 1.5 * k / 100.0;
      if (cs[a + 1] > 0.0 && r >= kPi / std::sqrt(cs[a + 1])) continue;
      CHECK(ct_c(Curvature(cs[a]), r) >= ct_c(Curvature(cs[a + 1]), r) - 1e-12);
    }
  }
}

TEST_CASE("PoleSet validation") {
  ModelSpace E(3, Curvature(0.0));
  CHECK_THROWS_AS(PoleSet({pt(E, {0, 0, 0})}), std::invalid_argument);
  CHECK_THROWS_AS(PoleSet({pt(E, {1, 0, 0}), pt(E, {1, 0, 0})}),
                  std::invalid_argument);
  PoleSet ps({pt(E, {1, 0, 0}), pt(E, {-1, 0, 0}), pt(E, {2, 0, 0})});
  CHECK(ps.dist(0, 1) == doctest::Approx(2.0));
  CHECK(ps.dist(1, 2) == doctest::Approx(3.0));
  CHECK(ps.min_separation() == doctest::Approx(1.0));

  ModelSpace S(3, Curvature(1.0));
  const ModelPoint upper = S.project((Vec(4) << 0.3, 0, 0, 0.95).finished());
  const ModelPoint on_equator = pt(S, {1, 0, 0, 0});
  CHECK_THROWS_AS(PoleSet({upper, on_equator}), std::invalid_argument);
}

TEST_CASE("make_point validates constraints; project repairs drift") {
  ModelSpace H(3, Curvature(-1.0));
  CHECK_THROWS_AS(pt(H, {0, 0, 0, 2.0}), std::invalid_argument);  // not on sheet
  Vec v(4);
  v << 0.3, -0.1, 0.2, std::sqrt(1.0 + 0.3 * 0.3 + 0.1 * 0.1 + 0.2 * 0.2);
  v *= 1.0 + 1e-13;  // small constraint drift
  const ModelPoint p = H.project(v);
  CHECK(std::fabs(H.form(p.coords, p.coords) + 1.0) < 1e-12);

  ModelSpace S(4, Curvature(4.0));  // radius 1/2 sphere in R^5
  Vec w = Vec::Zero(5);
  w(4) = 0.5;
  const ModelPoint q = S.make_point(w);
  CHECK(distance(q, S.origin()) == 0.0);
}

TEST_CASE("ball volumes against closed forms (n = 3)") {
  // flat: 4 pi r^3/3; hyperbolic: pi (sinh 2r - 2r); spherical: pi (2r - sin 2r)
  ModelSpace E(3, Curvature(0.0)), H(3, Curvature(-1.0)), S(3, Curvature(1.0));
  for (double r : {0.5, 1.0, 1.5}) {
    CHECK(ball_volume(E, r) ==
          doctest::Approx(4.0 * kPi * r * r * r / 3.0).epsilon(1e-12));
    CHECK(ball_volume(H, r) ==
          doctest::Approx(kPi * (oracle::series_sinh(2 * r) - 2 * r)).epsilon(1e-12));
    CHECK(ball_volume(S, r) ==
          doctest::Approx(kPi * (2 * r - oracle::series_sin(2 * r))).epsilon(1e-12));
  }
}

TEST_CASE("axis_distance agrees with embedded distances") {
  for (double c : {-1.0, 0.0, 1.0}) {
    ModelSpace M(3, Curvature(c));
    const ModelPoint base = M.origin();
    const Vec axis = M.tangent_basis_vector(base, 0);
    const Vec perp = M.tangent_basis_vector(base, 1);
    for (double a : {-0.8, 0.5, 1.1}) {
      const ModelPoint pole = exp_map(base, a * axis);
      for (double r : {0.3, 0.9}) {
        for (double th : {0.37, 1.2, 2.6}) {
          const ModelPoint node =
              exp_map(base, r * (std::cos(th) * axis + std::sin(th) * perp));
          CHECK(axis_distance(M.curvature(), r, a, std::cos(th)) ==
                doctest::Approx(distance(node, pole)).epsilon(1e-11));
        }
      }
    }
  }
}
