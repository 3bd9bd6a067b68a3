#pragma once

#include <optional>

#include "kirchhoff/energy.hpp"

namespace kirchhoff {

// Every constant below uses S = sobolev_constant() unless S is passed in.

double C0(double q, double Qmax);
double lambda0(double q, double Qmax, double f_norm);

// max_{t >= 0} c1t t^2 + c2t t^4 - c3t t^6
double gmax_closed(double c1t, double c2t, double c3t);

// abS^3/(4Q) + b^3 S^6/(24Q^2) + (b^2 S^4 + 4aQS)^{3/2}/(24Q^2)
double critical_level(double a, double b, double Qmax);

double C1(double q, double f_norm);
double C3(double q, double f_norm, double a);

// lambda_tilde0 = C2_scaling * b^{(6-q)/2}. Includes Qmax^{-(4-q)/2}, which
// is 1 for a unit peak.
double C2_scaling(double q, double f_norm, double Qmax = 1.0);
double lambda_tilde0(double q, double f_norm, double b, double Qmax = 1.0);

struct HRoots {
  double t1;
  double t2;
};

// Roots of h(t) = Q^{2/3} t^2 - b S^2 t - a S Q^{1/3}.
HRoots h_roots(double a, double b, double Qmax);
double h_value(double a, double b, double Qmax, double t);

double b0_of_lambda(double lambda, double q, double Qmax, double f_norm);

// Maximizer (beta) and maximum (eta) of
// m(rho) = rho^2/2 - Qmax/(6 S^3) rho^6 - lambda |f| rho^q / q.
struct EtaBeta {
  double eta;
  double beta;
};
EtaBeta eta_beta(double lambda, double q, double Qmax, double f_norm);

// Lambda - C1 lambda^{2/(2-q)}
double level_bound(double a, double b, double q, double Qmax, double f_norm, double lambda);

// lambda (2/R^2)^{q/2} int_{B_{R/2}} f, with R the cutoff radius.
double c2_bubble(const ProblemParams& p, double rcut);

struct ThresholdReport {
  double S = 0.0;
  double S_tolerance = 0.0;
  double Qmax = 0.0;
  double f_norm = 0.0;
  double lambda0 = 0.0;
  double C0 = 0.0;
  double C1 = 0.0;
  double C2_scaling = 0.0;
  double lambda_tilde0 = 0.0;
  double C3 = 0.0;
  double Lambda = 0.0;
  double level_bound = 0.0;         // Lambda - C1 lambda^{2/(2-q)}
  double frozen_level_bound = 0.0;  // Lambda - C3 lambda^{2/(2-q)}
  double M = 0.0;                   // Lambda at b = 1
  double t1 = 0.0;
  double t2 = 0.0;
  double b0_of_lambda = 0.0;
  double eta = 0.0;
  double beta = 0.0;
  double c2_bubble = 0.0;
  std::optional<double> lambda1_candidate;
};

ThresholdReport threshold_report(const ProblemParams& p, double rcut = 1.0);

}  // namespace kirchhoff
