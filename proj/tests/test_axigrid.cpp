#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hardylab/axigrid.hpp"
#include "oracles.hpp"

using namespace hardylab;

namespace {

struct Setup {
  ModelSpace space;
  ModelPoint center;
  PoleSet poles;
  Setup(int n, double c, double a)
      : space(n, Curvature(c)),
        center(space.origin()),
        poles({exp_map(center, a * space.tangent_basis_vector(center, 0)),
               exp_map(center, -a * space.tangent_basis_vector(center, 0))}) {}
};

// u = exp(-rho^2), all partials radial
class GaussField final : public AxiField {
 public:
  double value(double rho, std::span<const double>) const override {
    return std::exp(-rho * rho);
  }
  void partials(double rho, std::span<const double>, double& u_rho,
                std::span<double> u_d) const override {
    u_rho = -2.0 * rho * std::exp(-rho * rho);
    for (auto& v : u_d) v = 0.0;
  }
};

}  // namespace

TEST_CASE("ball volumes reproduced within 0.1%") {
  Setup s(3, 0.0, 0.5);
  AxiGrid g = build_axigrid(s.space, s.poles, {s.center, 0.0, 1.0}, {}, 1e-3);
  CHECK(g.volume() == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-3));
  CHECK(g.volume_rel_error() < 1e-3);

  Setup s4(4, -1.0, 0.7);
  AxiGrid g4 = build_axigrid(s4.space, s4.poles, {s4.center, 0.0, 2.0}, {}, 1e-3);
  CHECK(g4.volume_rel_error() < 1e-3);
}

TEST_CASE("hemisphere volume: half the 3-sphere within 0.1%") {
  Setup s(3, 1.0, 0.6435);  // poles at (±a, 0, b)
  AxiGrid g = build_axigrid(s.space, s.poles, {s.center, 0.0, kPi / 2.0}, {}, 1e-3);
  CHECK(g.volume() == doctest::Approx(kPi * kPi).epsilon(1e-3));
}

TEST_CASE("small balls behave like omega_n r^n") {
  for (double c : {-1.0, 1.0}) {
    Setup s(3, c, 0.02);
    const double r = 0.05;
    AxiGrid g = build_axigrid(s.space, s.poles, {s.center, 0.0, r}, {}, 1e-5);
    const double omega3 = 4.0 * kPi / 3.0;
    CHECK(g.volume() / (omega3 * r * r * r) == doctest::Approx(1.0).epsilon(2e-3));
  }
}

TEST_CASE("Gaussian integral over a large flat ball") {
  Setup s(3, 0.0, 0.5);
  AxiGrid g = build_axigrid(s.space, s.poles, {s.center, 0.0, 6.0}, {}, 1e-3);
  const GaussField u;
  const ScalarField f = sample(g, u);
  CHECK(integrate(f) == doctest::Approx(std::pow(kPi, 1.5)).epsilon(5e-3));
}

TEST_CASE("integrate: zero field and linearity") {
  Setup s(3, -1.0, 0.5);
  AxiGrid g = build_axigrid(s.space, s.poles, {s.center, 0.0, 2.0}, {}, 1e-3);
  ScalarField f = sample(g, ZeroField{});
  CHECK(integrate(f) == 0.0);
  ScalarField h = sample(g, RadialBumpField(1.5));
  ScalarField h2 = h;
  h2.values *= 3.0;
  CHECK(integrate(h2) == doctest::Approx(3.0 * integrate(h)).epsilon(1e-14));
}

TEST_CASE("excluded nodes carry zero weight; live nodes clear the poles") {
  Setup s(3, 0.0, 0.7);
  const double delta = 5e-3;
  AxiGrid g = build_axigrid(s.space, s.poles, {s.center, 0.0, 2.0}, {}, delta);
  int excluded = 0;
  for (int k = 0; k < g.radial_nodes(); ++k)
    for (int l = 0; l < g.theta_nodes(); ++l) {
      if (g.excluded(k, l)) {
        ++excluded;
        CHECK(g.weight(k, l) == 0.0);
      } else {
        CHECK(g.weight(k, l) >= 0.0);
        for (int i = 0; i < g.num_poles(); ++i)
          CHECK(g.pole_distance(k, l, i) >= delta);
      }
    }
  CHECK(excluded > 0);
}

TEST_CASE("cached gradient cosines agree with the embedded route") {
  for (double c : {-1.0, 0.0, 1.0}) {
    Setup s(3, c, 0.6);
    AxiGrid g = build_axigrid(s.space, s.poles, {s.center, 0.0, 1.8},
                              {48, 8, 12}, 1e-3);
    for (int k = 3; k < g.radial_nodes(); k += 17) {
      for (int l = 1; l + 1 < g.theta_nodes(); l += 13) {
        if (g.excluded(k, l)) continue;
        const ModelPoint x = g.node_point(k, l);
        const double emb = angle_cosine(x, s.poles.pole(0), s.poles.pole(1));
        CHECK(g.cos_pole_pair(k, l, 0, 1) == doctest::Approx(emb).epsilon(1e-9));
        const double embc = angle_cosine(x, g.center(), s.poles.pole(0));
        CHECK(g.cos_center_pole(k, l, 0) == doctest::Approx(embc).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("analytic |grad u|^2 for a pole bump matches finite differences") {
  Setup s(3, -1.0, 0.7);
  AxiGrid g = build_axigrid(s.space, s.poles, {s.center, 0.0, 2.2}, {96, 10, 24},
                            1e-3);
  const PoleBumpField u(0.5);
  const ScalarField f = sample(g, u);
  const double fd = dirichlet_energy_fd(f);
  double exact = 0.0;
  for (int k = 0; k < g.radial_nodes(); ++k)
    for (int l = 0; l < g.theta_nodes(); ++l)
      exact += g.weight(k, l) * g.grad_square(k, l, u);
  CHECK(fd == doctest::Approx(exact).epsilon(5e-3));
}

TEST_CASE("finite-difference gradient converges at second order") {
  Setup s(3, 0.0, 0.5);
  const GaussField u;
  double errs[2];
  int idx = 0;
  for (int nt : {64, 128}) {
    AxiGrid g = build_axigrid(s.space, s.poles, {s.center, 0.0, 4.0},
                              {nt, 10, nt / 4}, 1e-3);
    const ScalarField f = sample(g, u);
    const double fd = dirichlet_energy_fd(f);
    double exact = 0.0;
    for (int k = 0; k < g.radial_nodes(); ++k)
      for (int l = 0; l < g.theta_nodes(); ++l)
        exact += g.weight(k, l) * g.grad_square(k, l, u);
    errs[idx++] = std::fabs(fd - exact);
  }
  CHECK(errs[0] / errs[1] > 3.0);  // ratio ~ 4 for a second-order scheme
}

TEST_CASE("CSV snapshot: layout and determinism") {
  Setup s(3, 0.0, 0.4);
  AxiGrid g = build_axigrid(s.space, s.poles, {s.center, 0.0, 1.0}, {16, 4, 6},
                            1e-3);
  const ScalarField f = sample(g, RadialBumpField(0.8));
  std::ostringstream a, b;
  write_csv(f, a);
  write_csv(f, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().substr(0, 21) == "r,theta,weight,value\n");
  int rows = 0;
  for (char ch : a.str())
    if (ch == '\n') ++rows;
  CHECK(rows == g.size() + 1);
}

TEST_CASE("off-axis poles are rejected") {
  ModelSpace E(3, Curvature(0.0));
  const ModelPoint c = E.origin();
  const Vec e0 = E.tangent_basis_vector(c, 0);
  const Vec e1 = E.tangent_basis_vector(c, 1);
  PoleSet bad({exp_map(c, e0), exp_map(c, e1)});
  CHECK_THROWS_AS(build_axigrid(E, bad, {c, 0.0, 2.0}, {}, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("spherical grids must stay in the open hemisphere") {
  Setup s(3, 1.0, 0.5);
  CHECK_THROWS_AS(build_axigrid(s.space, s.poles, {s.center, 0.0, 2.5}, {}, 1e-3),
                  std::invalid_argument);
}
