#pragma once

#include <map>
#include <vector>

#include "kirchhoff/radial_grid.hpp"

namespace kirchhoff {

// U_eps(r) = eps^{-1/2} 3^{1/4} (1 + (r/eps)^2)^{-1/2}, the extremal of the
// Sobolev quotient in R^3.
double talenti_value(double eps, double r);
RadialFunction talenti(double eps, const GridPtr& grid);

// phi * U_eps with phi = 1 on [0, rcut/2], 0 on [rcut, inf) and a cubic
// smoothstep in between. The peak sits at the origin.
double cutoff_factor(double rcut, double r);
RadialFunction cutoff_bubble(double eps, double rcut, const GridPtr& grid, double center_radius = 0.0);

struct SobolevDerivation {
  double value = 0.0;       // extrapolated quotient
  double grad_sq = 0.0;     // |grad U|_2^2, extrapolated with tail
  double l6_pow6 = 0.0;     // |U|_6^6, extrapolated with tail
  double grad_tail = 0.0;   // analytic contribution of r > R to grad_sq
  double l6_tail = 0.0;
  double richardson_delta = 0.0;  // |extrapolated - fine grid| for the quotient
  double radius = 0.0;
  std::size_t nodes = 0;    // fine grid size
};

// Computed once and cached; thread-safe.
const SobolevDerivation& sobolev_derivation();
double sobolev_constant();

struct BubbleReport {
  double eps = 0.0;
  double grad_norm_sq = 0.0;
  double l6_norm_sq = 0.0;
  std::map<int, double> ls_norms;  // s -> |v_eps|_s^s, s = 2..5
  double sobolev_quotient = 0.0;
};

BubbleReport bubble_report(const RadialFunction& v, double eps);

// Grid resolving the finest eps in the list on [0, rcut].
GridPtr bubble_grid(double rcut, double eps_min, DomainKind kind = DomainKind::DirichletBall);

// Least-squares slope of log |v_eps|_s^s against log eps; for s = 3 the
// ordinate is |v_eps|_3^3 / |log eps|.
double asymptotics_check(double s, const std::vector<double>& eps_list, double rcut = 4.0);

// Slope of a least-squares line through (x_i, y_i).
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace kirchhoff
