#include "kirchhoff/bubbles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kReferenceRadius = 200.0;
constexpr std::size_t kReferenceNodes = 100000;

struct Moments {
  double grad_sq;
  double l6;
};

Moments talenti_moments(std::size_t n) {
  const auto grid = build_grid(kReferenceRadius, n, DomainKind::DirichletBall);
  const auto u = talenti(1.0, grid);
  const double l6 = lp_norm(u, 6.0);
  return {dirichlet_energy(u), std::pow(l6, 6.0)};
}

}  // namespace

double talenti_value(double eps, double r) {
  const double x = r / eps;
  return std::pow(3.0, 0.25) / std::sqrt(eps * (1.0 + x * x));
}

RadialFunction talenti(double eps, const GridPtr& grid) {
  require(eps > 0.0, "talenti needs eps > 0");
  return RadialFunction::sample(grid, [eps](double r) { return talenti_value(eps, r); });
}

double cutoff_factor(double rcut, double r) {
  const double half = 0.5 * rcut;
  if (r <= half) return 1.0;
  if (r >= rcut) return 0.0;
  const double x = (r - half) / half;
  return 1.0 - x * x * (3.0 - 2.0 * x);
}

RadialFunction cutoff_bubble(double eps, double rcut, const GridPtr& grid, double center_radius) {
  require(grid != nullptr, "cutoff_bubble needs a grid");
  require(center_radius == 0.0, "radial bubbles are centred at the origin");
  require(eps > 0.0, "cutoff_bubble needs eps > 0");
  require(eps < 0.5 * rcut, "cutoff_bubble needs eps < rcut/2");
  require(rcut <= grid->radius() * (1.0 + 1e-12), "cutoff radius exceeds the grid");
  return RadialFunction::sample(grid, [=](double r) { return cutoff_factor(rcut, r) * talenti_value(eps, r); });
}

const SobolevDerivation& sobolev_derivation() {
  static const SobolevDerivation cached = [] {
    const Moments coarse = talenti_moments(kReferenceNodes);
    const Moments fine = talenti_moments(2 * kReferenceNodes);
    const double R = kReferenceRadius;
    const double R3 = R * R * R;
    const double R5 = R3 * R * R;
    // Tails from r^4/(1+r^2)^3 and r^2/(1+r^2)^3 expanded in 1/r^2.
    const double grad_tail = kFourPi * std::sqrt(3.0) * (1.0 / R - 1.0 / R3 + 1.2 / R5);
    const double l6_tail = kFourPi * std::pow(3.0, 1.5) * (1.0 / (3.0 * R3) - 0.6 / R5);

    SobolevDerivation d;
    d.grad_sq = (4.0 * fine.grad_sq - coarse.grad_sq) / 3.0 + grad_tail;
    d.l6_pow6 = (4.0 * fine.l6 - coarse.l6) / 3.0 + l6_tail;
    d.grad_tail = grad_tail;
    d.l6_tail = l6_tail;
    d.value = d.grad_sq / std::cbrt(d.l6_pow6);
    const double fine_quotient = (fine.grad_sq + grad_tail) / std::cbrt(fine.l6 + l6_tail);
    d.richardson_delta = std::abs(d.value - fine_quotient);
    d.radius = R;
    d.nodes = 2 * kReferenceNodes;
    return d;
  }();
  return cached;
}

double sobolev_constant() { return sobolev_derivation().value; }

BubbleReport bubble_report(const RadialFunction& v, double eps) {
  BubbleReport rep;
  rep.eps = eps;
  rep.grad_norm_sq = dirichlet_energy(v);
  const double l6 = lp_norm(v, 6.0);
  rep.l6_norm_sq = l6 * l6;
  for (int s = 2; s <= 5; ++s) rep.ls_norms[s] = std::pow(lp_norm(v, s), s);
  rep.sobolev_quotient = rep.grad_norm_sq / rep.l6_norm_sq;
  return rep;
}

GridPtr bubble_grid(double rcut, double eps_min, DomainKind kind) {
  require(eps_min > 0.0 && rcut > 0.0, "bubble grid needs positive eps and rcut");
  const double n = std::ceil(20.0 * rcut / eps_min);
  const auto nodes = static_cast<std::size_t>(std::max(n, 2000.0));
  return build_grid(rcut, nodes, kind);
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "slope fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  require(sxx > 0.0, "slope fit needs distinct abscissae");
  return sxy / sxx;
}

double asymptotics_check(double s, const std::vector<double>& eps_list, double rcut) {
  require(s >= 2.0 && s < 6.0, "asymptotics_check needs s in [2,6)");
  require(eps_list.size() >= 2, "asymptotics_check needs at least two eps values");
  for (double e : eps_list) require(e > 0.0 && e < 0.5 * rcut, "every eps must lie in (0, rcut/2)");
  const double eps_min = *std::min_element(eps_list.begin(), eps_list.end());
  const auto grid = bubble_grid(rcut, eps_min);
  std::vector<double> x, y;
  for (double e : eps_list) {
    const auto v = cutoff_bubble(e, rcut, grid);
    double value = std::pow(lp_norm(v, s), s);
    if (s == 3.0) value /= std::abs(std::log(e));
    x.push_back(std::log(e));
    y.push_back(std::log(value));
  }
  return fit_slope(x, y);
}

}  // namespace kirchhoff
