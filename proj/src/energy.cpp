#include "kirchhoff/energy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

namespace {

double abs_pow(double x, double p) {
  const double ax = std::abs(x);
  if (p == 6.0) {
    const double x2 = ax * ax;
    return x2 * x2 * x2;
  }
  return ax == 0.0 ? 0.0 : std::pow(ax, p);
}

// |x|^{p-2} x, continuous at 0 for p > 1.
double signed_pow(double x, double p) {
  if (x == 0.0) return 0.0;
  if (p == 6.0) {
    const double x2 = x * x;
    return x2 * x2 * x;
  }
  return std::copysign(std::pow(std::abs(x), p - 1.0), x);
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Loads of the non-gradient terms with the Dirichlet coefficient supplied.
std::vector<double> assemble_load(const ProblemParams& p, double coef, const RadialFunction& u) {
  if (!u.grid().same_as(p.grid())) fail(ErrorKind::GridMismatch, "function is not on the problem grid");
  std::vector<double> load = dirichlet_load(u);
  for (double& v : load) v *= coef;
  const auto w = p.grid().weights();
  const auto Q = p.Q().values().values();
  const auto f = p.f().values().values();
  const bool mass = p.grid().has_mass_term();
  const double lambda = p.lambda();
  for (std::size_t i = 0; i < u.size(); ++i) {
    double s = 0.0;
    if (mass) s += u[i];
    s -= Q[i] * signed_pow(u[i], p.power());
    if (lambda != 0.0) s -= lambda * f[i] * signed_pow(u[i], p.q());
    load[i] += w[i] * s;
  }
  return load;
}

double dot(const std::vector<double>& load, const RadialFunction& v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < load.size(); ++i) sum += load[i] * v[i];
  return sum;
}

Gradient riesz_of(const ProblemParams& p, const std::vector<double>& load) {
  RadialFunction g = p.metric().riesz(load);
  const double res = h1_norm(g, p.a());
  return Gradient{std::move(g), res};
}

}  // namespace

WeightProfile::WeightProfile(RadialFunction values, WeightRole role, double q, double peak, HolderData holder,
                             std::string description)
    : values_(std::move(values)),
      role_(role),
      peak_location_(peak),
      holder_(holder),
      description_(std::move(description)) {
  if (role_ == WeightRole::Critical) {
    norm_ = values_.max_value();
  } else {
    require(q > 1.0 && q < 2.0, "q must lie in (1,2)");
    norm_ = lp_norm(values_, 6.0 / (6.0 - q));
  }
}

WeightProfile WeightProfile::constant(GridPtr grid, WeightRole role, double value, double q) {
  require(std::isfinite(value), "weight value must be finite");
  auto values = RadialFunction::sample(std::move(grid), [value](double) { return value; });
  HolderData holder{2.0, 0.0, values.grid().radius()};
  return WeightProfile(std::move(values), role, q, 0.0, holder, "constant(" + format_number(value) + ")");
}

WeightProfile WeightProfile::gaussian_bump(GridPtr grid, WeightRole role, double center, double width, double floor,
                                           double q) {
  require(width > 0.0, "gaussian-bump width must be positive");
  require(center >= 0.0, "gaussian-bump center must be nonnegative");
  require(floor >= 0.0 && floor <= 1.0, "gaussian-bump floor must lie in [0,1]");
  auto values = RadialFunction::sample(std::move(grid), [=](double r) {
    const double x = (r - center) / width;
    return floor + (1.0 - floor) * std::exp(-x * x);
  });
  // |Q(r) - Q(c)| = (1 - floor)(1 - e^{-x^2}) <= (1 - floor) x^2.
  HolderData holder{2.0, (1.0 - floor) / (width * width), width};
  return WeightProfile(std::move(values), role, q, center, holder,
                       "gaussian-bump(" + format_number(center) + "," + format_number(width) + "," +
                           format_number(floor) + ")");
}

void WeightProfile::validate(double q) const {
  const auto v = values_.values();
  if (role_ == WeightRole::Concave) {
    for (double x : v) {
      if (!(x > 0.0) || !std::isfinite(x)) fail(ErrorKind::InvalidArgument, "f must be strictly positive at every node");
    }
    if (!std::isfinite(norm_) || !(norm_ > 0.0)) fail(ErrorKind::InvalidArgument, "|f|_{6/(6-q)} must be finite");
    return;
  }
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorKind::InvalidArgument, "Q must be nonnegative at every node");
  }
  if (!(norm_ > 0.0)) fail(ErrorKind::InvalidArgument, "Q must be positive somewhere");
  if (std::abs(values_.max_value() - norm_) > 1e-12 * norm_) fail(ErrorKind::InvalidArgument, "Q max mismatch");
  if (!(holder_.alpha > q / 2.0)) fail(ErrorKind::InvalidArgument, "Hoelder exponent of Q must exceed q/2");

  // The peak value is exact at r0 even when r0 falls between nodes.
  const auto r = values_.grid().nodes();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double dist = std::abs(r[i] - peak_location_);
    if (dist > holder_.rho) continue;
    const double bound = holder_.constant * std::pow(dist, holder_.alpha);
    if (std::abs(v[i] - norm_) > bound + 1e-12 * norm_) {
      fail(ErrorKind::InvalidArgument, "Q violates its declared Hoelder bound near the peak");
    }
  }
}

ProblemParams::ProblemParams(double a, double b, double lambda, double q, WeightProfile Q, WeightProfile f,
                             GridPtr grid, double power)
    : a_(a), b_(b), lambda_(lambda), q_(q), power_(power), Q_(std::move(Q)), f_(std::move(f)), grid_(std::move(grid)) {
  validate();
  metric_ = std::make_shared<const H1Metric>(grid_, a_);
}

void ProblemParams::validate() const {
  require(grid_ != nullptr, "problem needs a grid");
  if (!(a_ > 0.0) || !std::isfinite(a_)) fail(ErrorKind::InvalidArgument, "a must be positive");
  if (!(b_ >= 0.0) || !std::isfinite(b_)) fail(ErrorKind::InvalidArgument, "b must be nonnegative");
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) fail(ErrorKind::InvalidArgument, "lambda must be nonnegative");
  if (!(q_ > 1.0 && q_ < 2.0)) fail(ErrorKind::InvalidArgument, "q must lie in (1,2)");
  if (!(power_ > 2.0 && power_ <= 6.0)) fail(ErrorKind::InvalidArgument, "power must lie in (2,6]");
  if (Q_.role() != WeightRole::Critical) fail(ErrorKind::InvalidArgument, "Q must carry the critical role");
  if (f_.role() != WeightRole::Concave) fail(ErrorKind::InvalidArgument, "f must carry the concave role");
  if (!Q_.values().grid().same_as(*grid_) || !f_.values().grid().same_as(*grid_)) {
    fail(ErrorKind::GridMismatch, "weights must live on the problem grid");
  }
  Q_.validate(q_);
  f_.validate(q_);
}

ProblemParams ProblemParams::with_b(double b) const {
  ProblemParams out = *this;
  out.b_ = b;
  out.validate();
  return out;
}

ProblemParams ProblemParams::with_lambda(double lambda) const {
  ProblemParams out = *this;
  out.lambda_ = lambda;
  out.validate();
  return out;
}

EnergyParts energy_parts(const ProblemParams& p, const RadialFunction& u) {
  if (!u.grid().same_as(p.grid())) fail(ErrorKind::GridMismatch, "function is not on the problem grid");
  EnergyParts parts;
  parts.dirichlet = dirichlet_energy(u);
  const auto w = p.grid().weights();
  const auto Q = p.Q().values().values();
  const auto f = p.f().values().values();
  const bool mass = p.grid().has_mass_term();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (mass) parts.mass += w[i] * u[i] * u[i];
    parts.critical += w[i] * Q[i] * abs_pow(u[i], p.power());
    parts.concave += w[i] * f[i] * abs_pow(u[i], p.q());
  }
  return parts;
}

double energy(const ProblemParams& p, const RadialFunction& u) {
  const EnergyParts e = energy_parts(p, u);
  return 0.5 * e.norm_sq(p.a()) + 0.25 * p.b() * e.dirichlet * e.dirichlet - e.critical / p.power() -
         p.lambda() / p.q() * e.concave;
}

std::vector<double> derivative_load(const ProblemParams& p, const RadialFunction& u) {
  return assemble_load(p, p.a() + p.b() * dirichlet_energy(u), u);
}

double directional_derivative(const ProblemParams& p, const RadialFunction& u, const RadialFunction& v) {
  require_same_grid(u, v);
  return dot(derivative_load(p, u), v);
}

Gradient gradient(const ProblemParams& p, const RadialFunction& u) { return riesz_of(p, derivative_load(p, u)); }

double residual_norm(const ProblemParams& p, const RadialFunction& u) { return gradient(p, u).residual; }

double nehari_residual(const ProblemParams& p, const RadialFunction& u) {
  const EnergyParts e = energy_parts(p, u);
  return e.norm_sq(p.a()) + p.b() * e.dirichlet * e.dirichlet - e.critical - p.lambda() * e.concave;
}

double quarter_identity_rhs(const ProblemParams& p, const RadialFunction& u) {
  const EnergyParts e = energy_parts(p, u);
  return 0.25 * e.norm_sq(p.a()) + (0.25 - 1.0 / p.power()) * e.critical -
         p.lambda() * (1.0 / p.q() - 0.25) * e.concave;
}

double frozen_energy(const ProblemParams& p, double A2, const RadialFunction& u) {
  require(A2 >= 0.0, "A2 must be nonnegative");
  const EnergyParts e = energy_parts(p, u);
  return 0.5 * (p.a() + p.b() * A2) * e.dirichlet + 0.5 * e.mass - e.critical / p.power() -
         p.lambda() / p.q() * e.concave;
}

double frozen_directional_derivative(const ProblemParams& p, double A2, const RadialFunction& u,
                                     const RadialFunction& v) {
  require(A2 >= 0.0, "A2 must be nonnegative");
  require_same_grid(u, v);
  return dot(assemble_load(p, p.a() + p.b() * A2, u), v);
}

Gradient frozen_gradient(const ProblemParams& p, double A2, const RadialFunction& u) {
  require(A2 >= 0.0, "A2 must be nonnegative");
  return riesz_of(p, assemble_load(p, p.a() + p.b() * A2, u));
}

FiberCoefficients fiber_coefficients(const ProblemParams& p, const RadialFunction& u) {
  const EnergyParts e = energy_parts(p, u);
  FiberCoefficients fc;
  fc.c1t = 0.5 * e.norm_sq(p.a());
  fc.c2t = 0.25 * p.b() * e.dirichlet * e.dirichlet;
  fc.c3t = e.critical / p.power();
  fc.fterm = p.lambda() / p.q() * e.concave;
  fc.q = p.q();
  fc.power = p.power();
  return fc;
}

double fiber_energy(const FiberCoefficients& fc, double t) {
  if (t == 0.0) return 0.0;
  const double t2 = t * t;
  return fc.c1t * t2 + fc.c2t * t2 * t2 - fc.c3t * std::pow(t, fc.power) - fc.fterm * std::pow(t, fc.q);
}

double fiber_slope(const FiberCoefficients& fc, double t) {
  const double t2 = t * t;
  double s = 2.0 * fc.c1t * t + 4.0 * fc.c2t * t2 * t - fc.power * fc.c3t * std::pow(t, fc.power - 1.0);
  if (fc.fterm != 0.0) s -= fc.q * fc.fterm * std::pow(t, fc.q - 1.0);
  return s;
}

double fiber_curvature(const FiberCoefficients& fc, double t) {
  double s = 2.0 * fc.c1t + 12.0 * fc.c2t * t * t -
             fc.power * (fc.power - 1.0) * fc.c3t * std::pow(t, fc.power - 2.0);
  if (fc.fterm != 0.0) s -= fc.q * (fc.q - 1.0) * fc.fterm * std::pow(t, fc.q - 2.0);
  return s;
}

double fiber_maximize(const FiberCoefficients& fc) {
  require(fc.c3t > 0.0, "fiber needs a positive critical coefficient");
  require(fc.c1t >= 0.0 && fc.c2t >= 0.0 && fc.fterm >= 0.0, "fiber coefficients must be nonnegative");

  // Past T the slope stays negative: p c3 t^{p-2} - 4 c2 t^2 - 2 c1 > 0 and
  // its ratio to t^2 grows with t.
  double T = 1.0;
  auto dominated = [&](double t) {
    return fc.power * fc.c3t * std::pow(t, fc.power - 2.0) > 4.0 * fc.c2t * t * t + 2.0 * fc.c1t;
  };
  for (int k = 0; k < 2000 && !(dominated(T) && fiber_energy(fc, T) < 0.0); ++k) T *= 2.0;
  if (!(dominated(T) && fiber_energy(fc, T) < 0.0)) fail(ErrorKind::NoInteriorMax, "fiber never turns negative");

  constexpr int kScan = 4000;
  const double lo_log = std::log(1e-8);
  const double hi_log = std::log(T);
  double prev_t = 1e-8;
  double prev_s = fiber_slope(fc, prev_t);
  double bracket_lo = -1.0;
  double bracket_hi = -1.0;
  for (int k = 1; k <= kScan; ++k) {
    const double t = std::exp(lo_log + (hi_log - lo_log) * k / kScan);
    const double s = fiber_slope(fc, t);
    if (prev_s > 0.0 && s <= 0.0) {
      bracket_lo = prev_t;
      bracket_hi = t;
    }
    prev_t = t;
    prev_s = s;
  }
  if (bracket_lo < 0.0) fail(ErrorKind::NoInteriorMax, "fiber map has no positive local maximum");

  double lo = bracket_lo;
  double hi = bracket_hi;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (fiber_slope(fc, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double fiber_negative_point(const FiberCoefficients& fc) {
  double t = fiber_maximize(fc);
  for (int k = 0; k < 2000; ++k) {
    t *= 1.25;
    if (fiber_energy(fc, t) < 0.0) return t;
  }
  fail(ErrorKind::NoInteriorMax, "fiber never turns negative");
}

}  // namespace kirchhoff
