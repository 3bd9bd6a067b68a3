#include "kirchhoff/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kirchhoff/bubbles.hpp"
#include "kirchhoff/error.hpp"

namespace kirchhoff {

namespace {

void check_q(double q) {
  if (!(q > 1.0 && q < 2.0)) fail(ErrorKind::InvalidArgument, "q must lie in (1,2)");
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::InvalidArgument, std::string(name) + " must be positive");
}

}  // namespace

double C0(double q, double Qmax) {
  check_q(q);
  check_positive(Qmax, "Qmax");
  const double S = sobolev_constant();
  return 2.0 / (6.0 - q) * std::pow(3.0 * S * S * S * (2.0 - q) / (Qmax * (6.0 - q)), (2.0 - q) / 4.0);
}

double lambda0(double q, double Qmax, double f_norm) {
  check_positive(f_norm, "f_norm");
  return q * C0(q, Qmax) / f_norm;
}

double gmax_closed(double c1t, double c2t, double c3t) {
  check_positive(c3t, "c3t");
  require(c1t >= 0.0 && c2t >= 0.0 && (c1t > 0.0 || c2t > 0.0), "c1t, c2t must be nonnegative and not both 0");
  const double disc = c2t * c2t + 3.0 * c1t * c3t;
  return (9.0 * c1t * c2t * c3t + 2.0 * c2t * c2t * c2t + 2.0 * disc * std::sqrt(disc)) / (27.0 * c3t * c3t);
}

double critical_level(double a, double b, double Qmax) {
  check_positive(a, "a");
  check_positive(Qmax, "Qmax");
  require(b >= 0.0, "b must be nonnegative");
  const double S = sobolev_constant();
  const double S3 = S * S * S;
  const double Q2 = Qmax * Qmax;
  const double inner = b * b * S * S * S * S + 4.0 * a * Qmax * S;
  return a * b * S3 / (4.0 * Qmax) + b * b * b * S3 * S3 / (24.0 * Q2) + inner * std::sqrt(inner) / (24.0 * Q2);
}

double C1(double q, double f_norm) {
  check_q(q);
  check_positive(f_norm, "f_norm");
  const double S = sobolev_constant();
  return (2.0 - q) / (4.0 * q) * std::pow((4.0 - q) * f_norm / (2.0 * std::pow(S, q / 2.0)), 2.0 / (2.0 - q));
}

double C3(double q, double f_norm, double a) {
  check_q(q);
  check_positive(f_norm, "f_norm");
  check_positive(a, "a");
  const double S = sobolev_constant();
  return (2.0 - q) / 2.0 * std::pow(3.0 * q / (2.0 * a), q / (2.0 - q)) *
         std::pow((6.0 - q) * f_norm / (6.0 * q * std::pow(S, q / 2.0)), 2.0 / (2.0 - q));
}

double C2_scaling(double q, double f_norm, double Qmax) {
  check_q(q);
  check_positive(f_norm, "f_norm");
  check_positive(Qmax, "Qmax");
  const double S = sobolev_constant();
  const double base = 3.0 * (4.0 - q) * S * S * S / (2.0 * (6.0 - q) * Qmax);
  return q * std::pow(S, q / 2.0) / (2.0 * (6.0 - q) * f_norm) * std::pow(base, (4.0 - q) / 2.0);
}

double lambda_tilde0(double q, double f_norm, double b, double Qmax) {
  check_positive(b, "b");
  return C2_scaling(q, f_norm, Qmax) * std::pow(b, (6.0 - q) / 2.0);
}

HRoots h_roots(double a, double b, double Qmax) {
  check_positive(a, "a");
  check_positive(Qmax, "Qmax");
  require(b >= 0.0, "b must be nonnegative");
  const double S = sobolev_constant();
  const double q23 = std::cbrt(Qmax * Qmax);
  const double bs2 = b * S * S;
  const double t2 = (bs2 + std::sqrt(bs2 * bs2 + 4.0 * a * Qmax * S)) / (2.0 * q23);
  // Product of the roots is -a S Q^{-1/3}; avoids cancellation when a is small.
  const double t1 = -a * S / (std::cbrt(Qmax) * t2);
  return {t1, t2};
}

double h_value(double a, double b, double Qmax, double t) {
  const double S = sobolev_constant();
  return std::cbrt(Qmax * Qmax) * t * t - b * S * S * t - a * S * std::cbrt(Qmax);
}

double b0_of_lambda(double lambda, double q, double Qmax, double f_norm) {
  require(lambda >= 0.0, "lambda must be nonnegative");
  if (lambda < lambda0(q, Qmax, f_norm)) return 0.0;
  return std::pow(lambda / C2_scaling(q, f_norm, Qmax), 2.0 / (6.0 - q));
}

EtaBeta eta_beta(double lambda, double q, double Qmax, double f_norm) {
  check_q(q);
  check_positive(Qmax, "Qmax");
  check_positive(f_norm, "f_norm");
  require(lambda >= 0.0, "lambda must be nonnegative");
  const double S = sobolev_constant();
  FiberCoefficients env;
  env.c1t = 0.5;
  env.c2t = 0.0;
  env.c3t = Qmax / (6.0 * S * S * S);
  env.fterm = lambda * f_norm / q;
  env.q = q;
  env.power = 6.0;
  const double beta = fiber_maximize(env);
  return {fiber_energy(env, beta), beta};
}

double level_bound(double a, double b, double q, double Qmax, double f_norm, double lambda) {
  return critical_level(a, b, Qmax) - C1(q, f_norm) * std::pow(lambda, 2.0 / (2.0 - q));
}

double c2_bubble(const ProblemParams& p, double rcut) {
  check_positive(rcut, "rcut");
  const auto& g = p.grid();
  const auto r = g.nodes();
  const auto w = g.weights();
  double integral = 0.0;
  for (std::size_t i = 0; i < g.size() && r[i] <= 0.5 * rcut; ++i) integral += w[i] * p.f()[i];
  return p.lambda() * std::pow(2.0 / (rcut * rcut), p.q() / 2.0) * integral;
}

ThresholdReport threshold_report(const ProblemParams& p, double rcut) {
  ThresholdReport t;
  const double q = p.q();
  t.S = sobolev_constant();
  t.S_tolerance = sobolev_derivation().richardson_delta;
  t.Qmax = p.Q().norm();
  t.f_norm = p.f().norm();
  t.C0 = C0(q, t.Qmax);
  t.lambda0 = lambda0(q, t.Qmax, t.f_norm);
  t.C1 = C1(q, t.f_norm);
  t.C2_scaling = C2_scaling(q, t.f_norm, t.Qmax);
  t.lambda_tilde0 = p.b() > 0.0 ? lambda_tilde0(q, t.f_norm, p.b(), t.Qmax) : 0.0;
  t.C3 = C3(q, t.f_norm, p.a());
  t.Lambda = critical_level(p.a(), p.b(), t.Qmax);
  const double lam_pow = std::pow(p.lambda(), 2.0 / (2.0 - q));
  t.level_bound = t.Lambda - t.C1 * lam_pow;
  t.frozen_level_bound = t.Lambda - t.C3 * lam_pow;
  t.M = critical_level(p.a(), 1.0, t.Qmax);
  const HRoots h = h_roots(p.a(), p.b(), t.Qmax);
  t.t1 = h.t1;
  t.t2 = h.t2;
  t.b0_of_lambda = b0_of_lambda(p.lambda(), q, t.Qmax, t.f_norm);
  if (p.lambda() < t.lambda0) {
    const EtaBeta eb = eta_beta(p.lambda(), q, t.Qmax, t.f_norm);
    t.eta = eb.eta;
    t.beta = eb.beta;
  }
  t.c2_bubble = c2_bubble(p, std::min(rcut, p.grid().radius()));

  // Unit weights on a ball: |f|_{6/(6-q)} is a power of the ball volume.
  const auto Qv = p.Q().values().values();
  const auto fv = p.f().values().values();
  const bool unit = std::all_of(Qv.begin(), Qv.end(), [](double v) { return v == 1.0; }) &&
                    std::all_of(fv.begin(), fv.end(), [](double v) { return v == 1.0; });
  if (unit && p.grid().kind() == DomainKind::DirichletBall) {
    const double R = p.grid().radius();
    const double volume = 4.0 * std::numbers::pi * R * R * R / 3.0;
    t.lambda1_candidate = lambda0(q, 1.0, std::pow(volume, (6.0 - q) / 6.0));
  }
  return t;
}

}  // namespace kirchhoff
