#include <doctest.h>

#include <cmath>

#include "kirchhoff/energy.hpp"
#include "kirchhoff/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace kirchhoff;
using testing::rel_err;

TEST_SUITE("energy") {

TEST_CASE("energy of zero vanishes") {
  const ProblemParams p = testing::unit_ball(1.0, 1.0, 0.2);
  CHECK(energy(p, p.zero()) == 0.0);
  CHECK(nehari_residual(p, p.zero()) == 0.0);
  const ProblemParams p0 = testing::unit_ball(1.0, 1.0, 0.0);
  CHECK(gradient(p0, p0.zero()).residual == 0.0);
}

TEST_CASE("energy terms match a reference quadrature of the nodal data") {
  for (DomainKind kind : {DomainKind::DirichletBall, DomainKind::WholeSpaceTruncated}) {
    const GridPtr g = build_grid(2.0, 1500, kind);
    const double q = 1.5, a = 1.3, b = 0.7, lambda = 0.2;
    const ProblemParams p(a, b, lambda, q, WeightProfile::constant(g, WeightRole::Critical, 1.0, q),
                          WeightProfile::constant(g, WeightRole::Concave, 1.0, q), g);
    const RadialFunction u = testing::random_profile(g);
    const auto r = g->nodes();
    std::vector<double> sq, six, conc;
    for (double v : u.values()) {
      sq.push_back(v * v);
      six.push_back(std::pow(std::abs(v), 6));
      conc.push_back(std::pow(std::abs(v), q));
    }
    const double D = oracle::shell_gradient_sq(r, u.values());
    const double mass = kind == DomainKind::WholeSpaceTruncated ? oracle::trapezoid_3d(r, sq) : 0.0;
    const double expected = 0.5 * (a * D + mass) + 0.25 * b * D * D - oracle::trapezoid_3d(r, six) / 6.0 -
                            lambda / q * oracle::trapezoid_3d(r, conc);
    CHECK(rel_err(energy(p, u), expected) < 1e-10);
  }
}

TEST_CASE("energy with b = lambda = 0 tracks the continuum integrals") {
  const GridPtr g = build_grid(1.0, 4000, DomainKind::DirichletBall);
  const ProblemParams p(1.0, 0.0, 0.0, 1.5, WeightProfile::constant(g, WeightRole::Critical, 1.0, 1.5),
                        WeightProfile::constant(g, WeightRole::Concave, 1.0, 1.5), g);
  auto u = [](double r) { return 2.0 * (1.0 - r * r) * (1.0 + r); };
  auto du = [](double r) { return 2.0 * (1.0 - 2.0 * r - 3.0 * r * r); };
  const double exact = 0.5 * oracle::radial_integral([&](double r) { return du(r) * du(r); }, 1.0) -
                       oracle::radial_integral([&](double r) { return std::pow(u(r), 6); }, 1.0) / 6.0;
  CHECK(rel_err(energy(p, RadialFunction::sample(g, u)), exact) < 1e-5);
}

TEST_CASE("directional derivative matches central finite differences") {
  for (int k = 0; k < 50; ++k) {
    const ProblemParams p = testing::random_problem();
    const RadialFunction u = testing::random_profile(p.grid_ptr());
    const RadialFunction v = testing::random_profile(p.grid_ptr(), false);
    const double h = 1e-5;
    const double fd = (energy(p, u + h * v) - energy(p, u - h * v)) / (2 * h);
    CHECK(rel_err(directional_derivative(p, u, v), fd) < 1e-5);
  }
}

TEST_CASE("riesz gradient represents the derivative") {
  for (int k = 0; k < 10; ++k) {
    const ProblemParams p = testing::random_problem();
    const RadialFunction u = testing::random_profile(p.grid_ptr());
    const Gradient g = gradient(p, u);
    CHECK(g.riesz.boundary_value() == 0.0);
    CHECK(g.residual == doctest::Approx(h1_norm(g.riesz, p.a())).epsilon(1e-12));
    for (int j = 0; j < 5; ++j) {
      const RadialFunction v = testing::random_profile(p.grid_ptr(), false);
      CHECK(h1_inner(g.riesz, v, p.a()) == doctest::Approx(directional_derivative(p, u, v)).epsilon(1e-9));
    }
  }
}

TEST_CASE("concave term is continuous through zeros") {
  const ProblemParams p = testing::unit_ball(1.0, 1.0, 0.3, 1.2, 400);
  RadialFunction u = RadialFunction::sample(p.grid_ptr(), [](double r) { return std::cos(3.0 * r) * (1 - r * r); });
  const Gradient g = gradient(p, u);
  CHECK(std::isfinite(g.residual));
  for (double v : g.riesz.values()) CHECK(std::isfinite(v));
}

TEST_CASE("quarter identity holds on arbitrary functions") {
  for (int k = 0; k < 20; ++k) {
    const ProblemParams p = testing::random_problem();
    const RadialFunction u = testing::random_profile(p.grid_ptr(), k % 2 == 0);
    const double lhs = energy(p, u) - 0.25 * nehari_residual(p, u);
    const EnergyParts e = energy_parts(p, u);
    const double rhs = 0.25 * e.norm_sq(p.a()) + e.critical / 12.0 - p.lambda() * (1.0 / p.q() - 0.25) * e.concave;
    CHECK(std::abs(lhs - rhs) <= 1e-9);
    CHECK(std::abs(rhs - quarter_identity_rhs(p, u)) <= 1e-12 * (1 + std::abs(rhs)));
    CHECK(nehari_residual(p, u) == doctest::Approx(directional_derivative(p, u, u)).epsilon(1e-10));
  }
}

TEST_CASE("frozen functional relations") {
  for (int k = 0; k < 20; ++k) {
    const ProblemParams p = testing::random_problem();
    const RadialFunction u = testing::random_profile(p.grid_ptr());
    const RadialFunction phi = testing::random_profile(p.grid_ptr(), false);
    const double D = dirichlet_energy(u);
    const double A2 = oracle::uniform(0.0, 3.0) * D;
    const double rel = frozen_directional_derivative(p, A2, u, phi) - directional_derivative(p, u, phi) -
                       p.b() * (A2 - D) * dirichlet_inner(u, phi);
    CHECK(std::abs(rel) <= 1e-9);
    CHECK(std::abs(frozen_directional_derivative(p, D, u, phi) - directional_derivative(p, u, phi)) <= 1e-9);
    const double gap = frozen_energy(p, A2, u) - energy(p, u);
    CHECK(std::abs(gap - (0.5 * p.b() * A2 * D - 0.25 * p.b() * D * D)) <= 1e-9);
    const ProblemParams p0 = p.with_b(0.0);
    CHECK(frozen_energy(p0, A2, u) == doctest::Approx(energy(p0, u)).epsilon(1e-14));
    const Gradient gj = frozen_gradient(p, A2, u);
    CHECK(h1_inner(gj.riesz, phi, p.a()) == doctest::Approx(frozen_directional_derivative(p, A2, u, phi)).epsilon(1e-9));
  }
  const ProblemParams p = testing::unit_ball(1.0, 1.0, 0.1);
  CHECK_THROWS_AS(frozen_energy(p, -1.0, p.zero()), Error);
}

TEST_CASE("fiber polynomial equals the energy along the ray") {
  for (int k = 0; k < 20; ++k) {
    const ProblemParams p = testing::random_problem();
    const RadialFunction u = testing::random_profile(p.grid_ptr());
    const FiberCoefficients fc = fiber_coefficients(p, u);
    CHECK(fiber_energy(fc, 0.0) == 0.0);
    CHECK(rel_err(fiber_energy(fc, 1.0), energy(p, u)) < 1e-10);
    const double t = oracle::uniform(0.0, 3.0);
    CHECK(rel_err(fiber_energy(fc, t), energy(p, t * u)) < 1e-10);
  }
}

TEST_CASE("fiber identity on a logarithmic grid of scales") {
  const ProblemParams p = testing::unit_ball(1.2, 0.8, 0.2);
  const RadialFunction u = testing::random_profile(p.grid_ptr());
  const FiberCoefficients fc = fiber_coefficients(p, u);
  for (int i = 0; i <= 60; ++i) {
    const double t = std::pow(10.0, -3.0 + 0.1 * i);
    CHECK(rel_err(fiber_energy(fc, t), energy(p, t * u)) < 1e-10);
  }
}

TEST_CASE("fiber maximizer closed forms") {
  FiberCoefficients fc;
  fc.c1t = 0.8;
  fc.c2t = 0.0;
  fc.c3t = 0.3;
  fc.fterm = 0.0;
  const double t = fiber_maximize(fc);
  CHECK(t * t == doctest::Approx(std::sqrt(fc.c1t / (3 * fc.c3t))).epsilon(1e-11));
  fc.c1t = 0.0;
  fc.c2t = 0.9;
  const double t2 = fiber_maximize(fc);
  CHECK(t2 * t2 == doctest::Approx(2 * fc.c2t / (3 * fc.c3t)).epsilon(1e-11));
}

TEST_CASE("fiber maximizer matches a dense grid search") {
  for (int k = 0; k < 20; ++k) {
    FiberCoefficients fc;
    fc.c1t = oracle::uniform(0.1, 3.0);
    fc.c2t = oracle::uniform(0.0, 3.0);
    fc.c3t = oracle::uniform(0.1, 3.0);
    fc.q = oracle::uniform(1.1, 1.9);
    fc.fterm = oracle::uniform(0.0, 0.05) * fc.c1t;
    const double t = fiber_maximize(fc);
    CHECK(fiber_slope(fc, t) == doctest::Approx(0.0).epsilon(1e-9).scale(1.0));
    CHECK(fiber_curvature(fc, t) < 0.0);
    const auto ref = oracle::brute_max([&](double s) { return fiber_energy(fc, s); }, 0.0, 4.0 * t);
    CHECK(std::abs(t - ref.arg) <= 1e-5);
  }
}

TEST_CASE("monotone fibers have no interior maximum") {
  FiberCoefficients fc;
  fc.c1t = 0.01;
  fc.c2t = 0.0;
  fc.c3t = 1.0;
  fc.fterm = 10.0;
  fc.q = 1.5;
  try {
    fiber_maximize(fc);
    FAIL("expected NoInteriorMax");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoInteriorMax);
  }
}

TEST_CASE("negative fiber point lies past the maximum") {
  FiberCoefficients fc;
  fc.c1t = 1.0;
  fc.c2t = 0.5;
  fc.c3t = 0.2;
  fc.fterm = 0.01;
  const double t = fiber_negative_point(fc);
  CHECK(t > fiber_maximize(fc));
  CHECK(fiber_energy(fc, t) < 0.0);
}

TEST_CASE("weight profiles") {
  const GridPtr g = build_grid(2.0, 800, DomainKind::DirichletBall);
  const double q = 1.5;
  SUBCASE("critical weight norm is its maximum") {
    const auto Q = WeightProfile::gaussian_bump(g, WeightRole::Critical, 0.5, 0.4, 0.2, q);
    CHECK(std::abs(Q.norm() - Q.values().max_value()) <= 1e-12);
    CHECK(Q.holder().alpha > q / 2);
    const double r0 = Q.peak_location();
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double r = g->nodes()[i];
      if (std::abs(r - r0) <= Q.holder().rho) {
        CHECK(std::abs(Q[i] - Q.norm()) <= Q.holder().constant * std::pow(std::abs(r - r0), Q.holder().alpha) + 1e-12);
      }
    }
    CHECK_NOTHROW(Q.validate(q));
  }
  SUBCASE("concave weight norm is the 6/(6-q) norm") {
    const auto f = WeightProfile::gaussian_bump(g, WeightRole::Concave, 0.0, 0.7, 0.3, q);
    const double s = 6.0 / (6.0 - q);
    CHECK(rel_err(f.norm(), lp_norm(f.values(), s)) < 1e-12);
    CHECK(f.values().min_value() > 0.0);
    const auto one = WeightProfile::constant(g, WeightRole::Concave, 1.0, q);
    CHECK(rel_err(one.norm(), std::pow(4.0 * oracle::kPi / 3.0 * 8.0, 1.0 / s)) < 1e-3);
  }
  SUBCASE("invalid weights are rejected") {
    CHECK_THROWS_AS(WeightProfile::constant(g, WeightRole::Concave, 0.0, q).validate(q), Error);
    CHECK_THROWS_AS(WeightProfile::constant(g, WeightRole::Concave, -1.0, q).validate(q), Error);
    CHECK_THROWS_AS(WeightProfile::constant(g, WeightRole::Critical, 0.0, q).validate(q), Error);
    // exp underflows to 0 at the outer nodes
    CHECK_THROWS_AS(WeightProfile::gaussian_bump(g, WeightRole::Concave, 0.0, 0.01, 0.0, q).validate(q), Error);
    CHECK_THROWS_AS(WeightProfile::gaussian_bump(g, WeightRole::Concave, 0.0, 0.5, 1.5, q), Error);
    CHECK_THROWS_AS(ProblemParams(1.0, 1.0, 0.1, q, WeightProfile::constant(g, WeightRole::Critical, 1.0, q),
                                  WeightProfile::constant(g, WeightRole::Concave, 0.0, q), g),
                    Error);
  }
}

TEST_CASE("problem invariants") {
  const GridPtr g = build_grid(1.0, 100, DomainKind::DirichletBall);
  auto Q = WeightProfile::constant(g, WeightRole::Critical, 1.0, 1.5);
  auto f = WeightProfile::constant(g, WeightRole::Concave, 1.0, 1.5);
  CHECK_THROWS_AS(ProblemParams(0.0, 1.0, 0.1, 1.5, Q, f, g), Error);
  CHECK_THROWS_AS(ProblemParams(1.0, -1.0, 0.1, 1.5, Q, f, g), Error);
  CHECK_THROWS_AS(ProblemParams(1.0, 1.0, 0.1, 2.0, Q, f, g), Error);
  CHECK_THROWS_AS(ProblemParams(1.0, 1.0, -0.1, 1.5, Q, f, g), Error);
  CHECK_NOTHROW(ProblemParams(1.0, 0.0, 0.1, 1.5, Q, f, g));
}

}  // TEST_SUITE
