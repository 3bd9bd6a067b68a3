#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kirchhoff/radial_grid.hpp"

namespace kirchhoff {

// Q multiplies the critical term, f the concave one.
enum class WeightRole { Critical, Concave };

struct HolderData {
  double alpha = 2.0;
  double constant = 0.0;
  double rho = 1.0;
};

class WeightProfile {
 public:
  static WeightProfile constant(GridPtr grid, WeightRole role, double value, double q);
  // floor + (1 - floor) * exp(-((r - center) / width)^2); peak value 1 at r = center.
  static WeightProfile gaussian_bump(GridPtr grid, WeightRole role, double center, double width, double floor,
                                     double q);

  WeightRole role() const noexcept { return role_; }
  const RadialFunction& values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // |Q|_inf for the critical weight, |f|_{6/(6-q)} for the concave one.
  double norm() const noexcept { return norm_; }
  double peak_location() const noexcept { return peak_location_; }
  const HolderData& holder() const noexcept { return holder_; }
  const std::string& description() const noexcept { return description_; }

  void validate(double q) const;

 private:
  WeightProfile(RadialFunction values, WeightRole role, double q, double peak, HolderData holder,
                std::string description);

  RadialFunction values_;
  WeightRole role_;
  double norm_ = 0.0;
  double peak_location_ = 0.0;
  HolderData holder_;
  std::string description_;
};

class ProblemParams {
 public:
  // power is the exponent of the Q-term; 6 is the critical case, other values
  // exist only for subcritical oracle comparisons.
  ProblemParams(double a, double b, double lambda, double q, WeightProfile Q, WeightProfile f, GridPtr grid,
                double power = 6.0);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double lambda() const noexcept { return lambda_; }
  double q() const noexcept { return q_; }
  double power() const noexcept { return power_; }
  bool is_critical() const noexcept { return power_ == 6.0; }
  const WeightProfile& Q() const noexcept { return Q_; }
  const WeightProfile& f() const noexcept { return f_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const RadialGrid& grid() const noexcept { return *grid_; }
  const H1Metric& metric() const noexcept { return *metric_; }

  ProblemParams with_b(double b) const;
  ProblemParams with_lambda(double lambda) const;

  RadialFunction zero() const { return RadialFunction(grid_); }

 private:
  void validate() const;

  double a_, b_, lambda_, q_, power_;
  WeightProfile Q_, f_;
  GridPtr grid_;
  std::shared_ptr<const H1Metric> metric_;
};

// The four integrals the energy is built from.
struct EnergyParts {
  double dirichlet = 0.0;  // int |grad u|^2
  double mass = 0.0;       // int u^2 (zero weight on the ball)
  double critical = 0.0;   // int Q |u|^p
  double concave = 0.0;    // int f |u|^q

  double norm_sq(double a) const { return a * dirichlet + mass; }
};

EnergyParts energy_parts(const ProblemParams& p, const RadialFunction& u);

double energy(const ProblemParams& p, const RadialFunction& u);

// <I'(u), v> from the closed form of the derivative.
double directional_derivative(const ProblemParams& p, const RadialFunction& u, const RadialFunction& v);

struct Gradient {
  RadialFunction riesz;  // H^1 representative, vanishes at r = R
  double residual;       // its H^1 norm
};

// Nodal representation of I'(u): load[j] = <I'(u), e_j>.
std::vector<double> derivative_load(const ProblemParams& p, const RadialFunction& u);
Gradient gradient(const ProblemParams& p, const RadialFunction& u);
double residual_norm(const ProblemParams& p, const RadialFunction& u);

// <I'(u), u>
double nehari_residual(const ProblemParams& p, const RadialFunction& u);

// Right-hand side of I(u) - 1/4 <I'(u), u>:
// 1/4 |u|^2 + (1/4 - 1/p) int Q|u|^p - lambda (1/q - 1/4) int f|u|^q.
double quarter_identity_rhs(const ProblemParams& p, const RadialFunction& u);

// J(u) = (a + b A2)/2 int|grad u|^2 + 1/2 int u^2 - 1/p int Q|u|^p - lambda/q int f|u|^q.
double frozen_energy(const ProblemParams& p, double A2, const RadialFunction& u);
double frozen_directional_derivative(const ProblemParams& p, double A2, const RadialFunction& u,
                                     const RadialFunction& v);
Gradient frozen_gradient(const ProblemParams& p, double A2, const RadialFunction& u);

// I(t u) = c1t t^2 + c2t t^4 - c3t t^p - fterm t^q.
struct FiberCoefficients {
  double c1t = 0.0;
  double c2t = 0.0;
  double c3t = 0.0;
  double fterm = 0.0;
  double q = 1.5;
  double power = 6.0;
};

FiberCoefficients fiber_coefficients(const ProblemParams& p, const RadialFunction& u);
double fiber_energy(const FiberCoefficients& fc, double t);
double fiber_slope(const FiberCoefficients& fc, double t);
double fiber_curvature(const FiberCoefficients& fc, double t);

// Largest t > 0 where the fiber has a strict local maximum. Throws
// NoInteriorMax when the fiber only decreases after t = 0.
double fiber_maximize(const FiberCoefficients& fc);

// Positive t with fiber_energy(fc, t) < 0 beyond the interior maximum.
double fiber_negative_point(const FiberCoefficients& fc);

}  // namespace kirchhoff
