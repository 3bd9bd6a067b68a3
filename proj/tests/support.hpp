#pragma once

// Problem builders shared by the test suites.

#include <cmath>

#include "kirchhoff/energy.hpp"
#include "kirchhoff/thresholds.hpp"
#include "oracles.hpp"

namespace testing {

using namespace kirchhoff;

inline ProblemParams unit_ball(double a, double b, double lambda, double q = 1.5, std::size_t n = 2000,
                               double power = 6.0) {
  const GridPtr g = build_grid(1.0, n, DomainKind::DirichletBall);
  return ProblemParams(a, b, lambda, q, WeightProfile::constant(g, WeightRole::Critical, 1.0, q),
                       WeightProfile::constant(g, WeightRole::Concave, 1.0, q), g, power);
}

// The desk-scale instance: Q = f = 1 on the unit ball, a = b = 1, q = 1.5,
// lambda = lambda0 / 2.
inline ProblemParams desk_instance(std::size_t n = 2000) {
  const ProblemParams probe = unit_ball(1.0, 1.0, 0.0, 1.5, n);
  return probe.with_lambda(0.5 * lambda0(1.5, probe.Q().norm(), probe.f().norm()));
}

// Random instance on either domain kind with bump weights.
inline ProblemParams random_problem(std::size_t n = 400) {
  const bool ball = oracle::uniform(0.0, 1.0) < 0.5;
  const double R = ball ? oracle::uniform(0.5, 2.0) : oracle::uniform(4.0, 8.0);
  const GridPtr g = build_grid(R, n, ball ? DomainKind::DirichletBall : DomainKind::WholeSpaceTruncated);
  const double q = oracle::uniform(1.1, 1.9);
  auto Q = WeightProfile::gaussian_bump(g, WeightRole::Critical, oracle::uniform(0.0, 0.3 * R),
                                        oracle::uniform(0.3, 1.0) * R, oracle::uniform(0.1, 0.9), q);
  auto f = WeightProfile::gaussian_bump(g, WeightRole::Concave, oracle::uniform(0.0, 0.3 * R),
                                        oracle::uniform(0.3, 1.0) * R, oracle::uniform(0.1, 0.9), q);
  return ProblemParams(oracle::uniform(0.5, 2.0), oracle::uniform(0.0, 2.0), oracle::uniform(0.01, 0.5), q,
                       std::move(Q), std::move(f), g);
}

// Smooth random profile vanishing at R; strictly positive inside when positive is set.
inline RadialFunction random_profile(const GridPtr& g, bool positive = true) {
  const double R = g->radius();
  double c[3], s[3];
  for (int j = 0; j < 3; ++j) {
    c[j] = positive ? oracle::uniform(0.2, 1.5) : oracle::uniform(-1.5, 1.5);
    s[j] = oracle::uniform(0.15, 0.8) * R;
  }
  return RadialFunction::sample(g, [&](double r) {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += c[j] * std::exp(-(r / s[j]) * (r / s[j]));
    return v * (1.0 - (r / R) * (r / R));
  });
}

inline double rel_err(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

}  // namespace testing
