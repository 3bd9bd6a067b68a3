#include <doctest.h>

#include <cmath>
#include <numeric>

#include "kirchhoff/bubbles.hpp"
#include "kirchhoff/error.hpp"
#include "kirchhoff/radial_grid.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace kirchhoff;
using oracle::kPi;
using testing::rel_err;

namespace {

double weight_sum(const RadialGrid& g) {
  const auto w = g.weights();
  return std::accumulate(w.begin(), w.end(), 0.0);
}

}  // namespace

TEST_SUITE("radial_core") {

TEST_CASE("quadrature weights reproduce the ball volume") {
  CHECK(rel_err(weight_sum(*build_grid(1.0, 1000, DomainKind::DirichletBall)), 4.0 * kPi / 3.0) < 1e-3);
  CHECK(rel_err(weight_sum(*build_grid(2.0, 500, DomainKind::DirichletBall)), 32.0 * kPi / 3.0) < 1e-3);
  CHECK(rel_err(weight_sum(*build_grid(50.0, 8000, DomainKind::WholeSpaceTruncated)),
                4.0 * kPi / 3.0 * 125000.0) < 1e-3);
}

TEST_CASE("degenerate grids are rejected") {
  CHECK_THROWS_AS(build_grid(1.0, 8, DomainKind::DirichletBall), Error);
  CHECK_THROWS_AS(build_grid(0.0, 100, DomainKind::DirichletBall), Error);
  CHECK_THROWS_AS(build_grid(-1.0, 100, DomainKind::WholeSpaceTruncated), Error);
  CHECK_NOTHROW(build_grid(1.0, 16, DomainKind::DirichletBall));
}

TEST_CASE("nodes are uniform, positive and end at R") {
  const GridPtr g = build_grid(3.0, 300, DomainKind::DirichletBall);
  const auto r = g->nodes();
  CHECK(r[0] > 0.0);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);
  CHECK(r.back() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(g->spacing() == doctest::Approx(0.01));
}

TEST_CASE("lp_norm of constants") {
  const GridPtr g = build_grid(1.0, 1000, DomainKind::DirichletBall);
  const RadialFunction one = RadialFunction::sample(g, [](double) { return 1.0; });
  CHECK(rel_err(lp_norm(one, 2.0), std::sqrt(4.0 * kPi / 3.0)) < 1e-3);
  for (double p : {1.0, 1.5, 3.0, 6.0}) {
    const RadialFunction c = RadialFunction::sample(g, [](double) { return 2.5; });
    CHECK(rel_err(lp_norm(c, p), 2.5 * std::pow(4.0 * kPi / 3.0, 1.0 / p)) < 1e-3);
  }
  CHECK_THROWS_AS(lp_norm(one, 0.5), Error);
}

TEST_CASE("sixth power of the instanton matches exact-integrand quadrature") {
  const GridPtr g = build_grid(50.0, 20000, DomainKind::WholeSpaceTruncated);
  const double discrete = std::pow(lp_norm(talenti(1.0, g), 6.0), 6.0);
  const double exact_on_ball = oracle::radial_integral(
      [](double r) { return std::pow(3.0, 1.5) / std::pow(1 + r * r, 3); }, 50.0);
  CHECK(rel_err(discrete, exact_on_ball) < 1e-4);
  CHECK(rel_err(discrete, std::pow(sobolev_constant(), 1.5)) < 1e-3);
}

TEST_CASE("dirichlet energy of 1 - r^2/R^2 is 16 pi R / 5") {
  for (double R : {1.0, 2.0, 5.0}) {
    const GridPtr g = build_grid(R, 1000, DomainKind::DirichletBall);
    const RadialFunction u = RadialFunction::sample(g, [R](double r) { return 1.0 - r * r / (R * R); });
    CHECK(rel_err(dirichlet_energy(u), 16.0 * kPi * R / 5.0) < 1e-3);
  }
  const GridPtr g = build_grid(1.0, 100, DomainKind::DirichletBall);
  CHECK(dirichlet_energy(RadialFunction(g)) == 0.0);
}

TEST_CASE("dirichlet energy of the instanton matches exact-integrand quadrature") {
  const GridPtr g = build_grid(50.0, 20000, DomainKind::WholeSpaceTruncated);
  const double exact_on_ball = oracle::radial_integral(
      [](double r) { return std::sqrt(3.0) * r * r / std::pow(1 + r * r, 3); }, 50.0);
  CHECK(rel_err(dirichlet_energy(talenti(1.0, g)), exact_on_ball) < 1e-4);
}

TEST_CASE("quadratic polynomials integrate within 0.1 percent") {
  const GridPtr g = build_grid(2.0, 500, DomainKind::DirichletBall);
  const double c0 = 0.7, c1 = -1.3, c2 = 2.1;
  std::vector<double> s;
  for (double r : g->nodes()) s.push_back(c0 + c1 * r + c2 * r * r);
  const double exact = oracle::radial_integral([&](double r) { return c0 + c1 * r + c2 * r * r; }, 2.0);
  CHECK(rel_err(g->integrate(s), exact) < 1e-3);
}

TEST_CASE("refinement error of the dirichlet energy is second order") {
  auto profile = [](double r) { return std::cos(kPi * r / 2.0) * std::exp(-r); };
  const double exact = oracle::radial_integral(
      [](double r) {
        const double d = -kPi / 2.0 * std::sin(kPi * r / 2.0) * std::exp(-r) - std::cos(kPi * r / 2.0) * std::exp(-r);
        return d * d;
      },
      1.0);
  double prev_err = 0.0;
  for (std::size_t n : {100, 200, 400, 800}) {
    const GridPtr g = build_grid(1.0, n, DomainKind::DirichletBall);
    const double err = std::abs(dirichlet_energy(RadialFunction::sample(g, profile)) - exact);
    if (prev_err > 0.0) CHECK(prev_err / err == doctest::Approx(4.0).epsilon(0.15));
    prev_err = err;
  }
}

TEST_CASE("discrete Sobolev quotient stays above 0.95 S") {
  const double S = sobolev_constant();
  const GridPtr g = build_grid(4.0, 4000, DomainKind::DirichletBall);
  std::vector<RadialFunction> tests{talenti(0.1, g), cutoff_bubble(0.05, 4.0, g),
                                    RadialFunction::sample(g, [](double r) { return 1.0 - r * r / 16.0; })};
  for (int k = 0; k < 20; ++k) tests.push_back(testing::random_profile(g, k % 2 == 0));
  for (auto& u : tests) {
    u[u.size() - 1] = 0.0;
    const double l6 = lp_norm(u, 6.0);
    CHECK(dirichlet_energy(u) / (l6 * l6) >= 0.95 * S);
  }
}

TEST_CASE("h1 inner product is symmetric, positive and bounded by Cauchy-Schwarz") {
  for (DomainKind kind : {DomainKind::DirichletBall, DomainKind::WholeSpaceTruncated}) {
    const GridPtr g = build_grid(2.0, 600, kind);
    for (int k = 0; k < 25; ++k) {
      const RadialFunction u = testing::random_profile(g, false);
      const RadialFunction v = testing::random_profile(g, false);
      const double a = oracle::uniform(0.1, 3.0);
      const double uv = h1_inner(u, v, a), vu = h1_inner(v, u, a);
      CHECK(std::abs(uv - vu) <= 1e-12 * std::abs(uv));
      CHECK(h1_inner(u, u, a) > 0.0);
      CHECK(std::abs(uv) <= h1_norm(u, a) * h1_norm(v, a) * (1 + 1e-14));
    }
    CHECK(h1_inner(RadialFunction(g), RadialFunction(g), 1.0) == 0.0);
  }
}

TEST_CASE("mass term appears only on the truncated whole space") {
  const GridPtr ball = build_grid(1.0, 400, DomainKind::DirichletBall);
  const GridPtr whole = build_grid(1.0, 400, DomainKind::WholeSpaceTruncated);
  auto profile = [](double r) { return 1.0 - r * r; };
  const RadialFunction ub = RadialFunction::sample(ball, profile);
  const RadialFunction uw = RadialFunction::sample(whole, profile);
  CHECK(h1_inner(ub, ub, 2.0) == doctest::Approx(2.0 * dirichlet_energy(ub)));
  CHECK(h1_inner(uw, uw, 2.0) == doctest::Approx(2.0 * dirichlet_energy(uw) + mass_inner(uw, uw)));
  const double mass = oracle::radial_integral([&](double r) { return profile(r) * profile(r); }, 1.0);
  CHECK(rel_err(mass_inner(uw, uw), mass) < 1e-3);
}

TEST_CASE("shell quadrature agrees with a reference implementation") {
  const GridPtr g = build_grid(1.5, 777, DomainKind::DirichletBall);
  const RadialFunction u = testing::random_profile(g, false);
  CHECK(rel_err(dirichlet_energy(u), oracle::shell_gradient_sq(g->nodes(), u.values())) < 1e-12);
  std::vector<double> sq;
  for (double v : u.values()) sq.push_back(v * v);
  CHECK(rel_err(g->integrate(sq), oracle::trapezoid_3d(g->nodes(), sq)) < 1e-12);
}

TEST_CASE("riesz map represents the load in the h1 product") {
  for (DomainKind kind : {DomainKind::DirichletBall, DomainKind::WholeSpaceTruncated}) {
    const GridPtr g = build_grid(1.0, 300, kind);
    const double a = 1.7;
    const H1Metric metric(g, a);
    const RadialFunction w = testing::random_profile(g, false);
    std::vector<double> load(g->size());
    for (std::size_t j = 0; j < load.size(); ++j) {
      RadialFunction e(g);
      e[j] = 1.0;
      load[j] = h1_inner(w, e, a);
    }
    const RadialFunction r = metric.riesz(load);
    CHECK(r.boundary_value() == 0.0);
    for (int k = 0; k < 10; ++k) {
      const RadialFunction v = testing::random_profile(g, false);
      double lv = 0.0;
      for (std::size_t j = 0; j + 1 < load.size(); ++j) lv += load[j] * v[j];
      CHECK(h1_inner(r, v, a) == doctest::Approx(lv).epsilon(1e-10));
    }
  }
}

TEST_CASE("arithmetic across grids is refused") {
  const GridPtr g1 = build_grid(1.0, 100, DomainKind::DirichletBall);
  const GridPtr g2 = build_grid(1.0, 120, DomainKind::DirichletBall);
  RadialFunction u(g1), v(g2);
  CHECK_THROWS_AS(u += v, Error);
  CHECK_THROWS_AS(h1_inner(u, v, 1.0), Error);
  try {
    u -= v;
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GridMismatch);
  }
}

}  // TEST_SUITE
