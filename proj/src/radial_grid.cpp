#include "kirchhoff/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kirchhoff/error.hpp"

namespace kirchhoff {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
}

RadialGrid::RadialGrid(double radius, std::size_t node_count, DomainKind kind)
    : radius_(radius), spacing_(0.0), kind_(kind) {
  if (!(radius > 0.0) || !std::isfinite(radius)) fail(ErrorKind::InvalidArgument, "grid radius must be positive");
  if (node_count < kMinNodes) {
    fail(ErrorKind::InvalidArgument,
         "grid needs at least " + std::to_string(kMinNodes) + " nodes, got " + std::to_string(node_count));
  }
  spacing_ = radius / static_cast<double>(node_count);
  nodes_.resize(node_count);
  weights_.resize(node_count);
  shells_.resize(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    const double r = spacing_ * static_cast<double>(i + 1);
    const double r_inner = spacing_ * static_cast<double>(i);
    nodes_[i] = r;
    weights_[i] = kFourPi * r * r * spacing_;
    shells_[i] = kFourPi * (r * r * r - r_inner * r_inner * r_inner) / 3.0;
  }
  nodes_.back() = radius;
  weights_.back() *= 0.5;
}

double RadialGrid::integrate(std::span<const double> samples) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) sum += weights_[i] * samples[i];
  return sum;
}

GridPtr build_grid(double radius, std::size_t node_count, DomainKind kind) {
  return std::make_shared<const RadialGrid>(radius, node_count, kind);
}

RadialFunction::RadialFunction(GridPtr grid) : grid_(std::move(grid)) {
  require(grid_ != nullptr, "RadialFunction needs a grid");
  values_.assign(grid_->size(), 0.0);
}

RadialFunction::RadialFunction(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  require(grid_ != nullptr, "RadialFunction needs a grid");
  if (values_.size() != grid_->size()) fail(ErrorKind::GridMismatch, "value count does not match grid size");
}

RadialFunction RadialFunction::sample(GridPtr grid, const std::function<double(double)>& profile) {
  RadialFunction u(std::move(grid));
  const auto r = u.grid().nodes();
  for (std::size_t i = 0; i < u.size(); ++i) u.values_[i] = profile(r[i]);
  return u;
}

double RadialFunction::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double RadialFunction::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

RadialFunction& RadialFunction::operator+=(const RadialFunction& other) { return axpy(1.0, other); }
RadialFunction& RadialFunction::operator-=(const RadialFunction& other) { return axpy(-1.0, other); }

RadialFunction& RadialFunction::operator*=(double factor) {
  for (double& v : values_) v *= factor;
  return *this;
}

RadialFunction& RadialFunction::axpy(double factor, const RadialFunction& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += factor * other.values_[i];
  return *this;
}

RadialFunction operator+(RadialFunction lhs, const RadialFunction& rhs) { return lhs += rhs; }
RadialFunction operator-(RadialFunction lhs, const RadialFunction& rhs) { return lhs -= rhs; }
RadialFunction operator*(double factor, RadialFunction u) { return u *= factor; }

void require_same_grid(const RadialFunction& u, const RadialFunction& v) {
  if (!u.grid().same_as(v.grid())) fail(ErrorKind::GridMismatch, "functions live on different grids");
}

double lp_norm(const RadialFunction& u, double p) {
  require(p >= 1.0, "lp_norm needs p >= 1");
  const auto w = u.grid().weights();
  const auto x = u.values();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::pow(std::abs(x[i]), p);
  return std::pow(sum, 1.0 / p);
}

std::vector<double> shell_differences(const RadialFunction& u) {
  const auto x = u.values();
  std::vector<double> d(x.size());
  d[0] = (x[1] - x[0]) / 3.0;  // u_1 - ghost
  for (std::size_t k = 1; k < x.size(); ++k) d[k] = x[k] - x[k - 1];
  return d;
}

double dirichlet_inner(const RadialFunction& u, const RadialFunction& v) {
  require_same_grid(u, v);
  const auto& g = u.grid();
  const auto shells = g.shell_volumes();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  const auto du = shell_differences(u);
  const auto dv = shell_differences(v);
  double sum = 0.0;
  for (std::size_t k = 0; k < du.size(); ++k) sum += shells[k] * du[k] * dv[k];
  return sum * inv_h2;
}

double dirichlet_energy(const RadialFunction& u) { return dirichlet_inner(u, u); }

double mass_inner(const RadialFunction& u, const RadialFunction& v) {
  require_same_grid(u, v);
  const auto w = u.grid().weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += w[i] * u[i] * v[i];
  return sum;
}

double h1_inner(const RadialFunction& u, const RadialFunction& v, double a, DomainKind kind) {
  double value = a * dirichlet_inner(u, v);
  if (kind == DomainKind::WholeSpaceTruncated) value += mass_inner(u, v);
  return value;
}

double h1_inner(const RadialFunction& u, const RadialFunction& v, double a) {
  return h1_inner(u, v, a, u.grid().kind());
}

double h1_norm(const RadialFunction& u, double a) { return std::sqrt(std::max(h1_inner(u, u, a), 0.0)); }

std::vector<double> dirichlet_load(const RadialFunction& u) {
  const auto& g = u.grid();
  const auto shells = g.shell_volumes();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
  const auto d = shell_differences(u);
  std::vector<double> load(u.size(), 0.0);
  const double s0 = shells[0] * d[0] * inv_h2 / 3.0;
  load[0] -= s0;
  load[1] += s0;
  for (std::size_t k = 1; k < d.size(); ++k) {
    const double s = shells[k] * d[k] * inv_h2;
    load[k] += s;
    load[k - 1] -= s;
  }
  return load;
}

H1Metric::H1Metric(GridPtr grid, double a) : grid_(std::move(grid)), a_(a) {
  require(grid_ != nullptr, "H1Metric needs a grid");
  require(a > 0.0, "H1Metric needs a > 0");
  const auto& g = *grid_;
  const std::size_t m = g.size() - 1;  // free nodes; r = R is pinned
  const auto shells = g.shell_volumes();
  const double inv_h2 = 1.0 / (g.spacing() * g.spacing());

  std::vector<double> diag(m, 0.0);
  std::vector<double> off(m, 0.0);  // off[i] couples i and i+1
  const double k0 = a * shells[0] * inv_h2 / 9.0;
  diag[0] += k0;
  diag[1] += k0;
  off[0] -= k0;
  for (std::size_t k = 1; k < g.size(); ++k) {
    const double kk = a * shells[k] * inv_h2;
    if (k < m) {
      diag[k] += kk;
      off[k - 1] -= kk;
    }
    diag[k - 1] += kk;
  }
  if (g.has_mass_term()) {
    const auto w = g.weights();
    for (std::size_t i = 0; i < m; ++i) diag[i] += w[i];
  }

  diag_.resize(m);
  lower_.assign(m, 0.0);
  diag_[0] = diag[0];
  for (std::size_t i = 1; i < m; ++i) {
    lower_[i] = off[i - 1] / diag_[i - 1];
    diag_[i] = diag[i] - lower_[i] * off[i - 1];
  }
}

RadialFunction H1Metric::riesz(std::span<const double> load) const {
  const std::size_t m = diag_.size();
  if (load.size() != m + 1 && load.size() != m) fail(ErrorKind::GridMismatch, "load vector does not match grid");
  RadialFunction g(grid_);
  auto x = g.values();
  x[0] = load[0];
  for (std::size_t i = 1; i < m; ++i) x[i] = load[i] - lower_[i] * x[i - 1];
  for (std::size_t i = 0; i < m; ++i) x[i] /= diag_[i];
  for (std::size_t i = m - 1; i-- > 0;) x[i] -= lower_[i + 1] * x[i + 1];
  x[m] = 0.0;
  return g;
}

}  // namespace kirchhoff
