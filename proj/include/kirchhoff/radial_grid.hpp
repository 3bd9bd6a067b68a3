#pragma once

// Radial discretization of B_R(0) in R^3.
//
// Nodes r_i = i*dr, i = 1..n, dr = R/n. The origin is not a node; the
// symmetry condition u'(0) = 0 is imposed through the quadratic ghost value
// u(0) = (4 u_1 - u_2) / 3. Point integrals use composite-trapezoid weights
// against 4 pi r^2 dr; gradient integrals use one difference per shell
// [r_{i-1}, r_i] weighted by the exact shell volume.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace kirchhoff {

enum class DomainKind { DirichletBall, WholeSpaceTruncated };

class RadialGrid {
 public:
  static constexpr std::size_t kMinNodes = 16;

  RadialGrid(double radius, std::size_t node_count, DomainKind kind);

  double radius() const noexcept { return radius_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double spacing() const noexcept { return spacing_; }
  DomainKind kind() const noexcept { return kind_; }

  // Mass term of the H^1 norm is present only for the truncated whole space.
  bool has_mass_term() const noexcept { return kind_ == DomainKind::WholeSpaceTruncated; }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  // Shell i spans [r_{i-1}, r_i] with r_0 = 0; there are n shells.
  std::span<const double> shell_volumes() const noexcept { return shells_; }

  double integrate(std::span<const double> samples) const;

  bool same_as(const RadialGrid& other) const noexcept {
    return this == &other || (kind_ == other.kind_ && size() == other.size() && radius_ == other.radius_);
  }

 private:
  double radius_;
  double spacing_;
  DomainKind kind_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> shells_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

GridPtr build_grid(double radius, std::size_t node_count, DomainKind kind);

class RadialFunction {
 public:
  explicit RadialFunction(GridPtr grid);
  RadialFunction(GridPtr grid, std::vector<double> values);

  static RadialFunction sample(GridPtr grid, const std::function<double(double)>& profile);

  const RadialGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  double boundary_value() const { return values_.back(); }
  double max_value() const;
  double min_value() const;

  RadialFunction& operator+=(const RadialFunction& other);
  RadialFunction& operator-=(const RadialFunction& other);
  RadialFunction& operator*=(double factor);
  // this += factor * other
  RadialFunction& axpy(double factor, const RadialFunction& other);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

RadialFunction operator+(RadialFunction lhs, const RadialFunction& rhs);
RadialFunction operator-(RadialFunction lhs, const RadialFunction& rhs);
RadialFunction operator*(double factor, RadialFunction u);

void require_same_grid(const RadialFunction& u, const RadialFunction& v);

double lp_norm(const RadialFunction& u, double p);

// Shell differences u(r_i) - u(r_{i-1}) with the ghost value at the origin.
std::vector<double> shell_differences(const RadialFunction& u);

double dirichlet_energy(const RadialFunction& u);
double dirichlet_inner(const RadialFunction& u, const RadialFunction& v);
double mass_inner(const RadialFunction& u, const RadialFunction& v);

double h1_inner(const RadialFunction& u, const RadialFunction& v, double a, DomainKind kind);
double h1_inner(const RadialFunction& u, const RadialFunction& v, double a);
double h1_norm(const RadialFunction& u, double a);

// Nodal load vector L_j = dirichlet_inner(u, e_j) for every node j.
std::vector<double> dirichlet_load(const RadialFunction& u);

// Gram matrix of h1_inner restricted to functions vanishing at r = R.
// Tridiagonal and SPD; factorized once, then used as the Riesz map.
class H1Metric {
 public:
  H1Metric(GridPtr grid, double a);

  double a() const noexcept { return a_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }

  // Solves G g = load on nodes 1..n-1; g vanishes at r = R.
  RadialFunction riesz(std::span<const double> load) const;

 private:
  GridPtr grid_;
  double a_;
  std::vector<double> diag_;   // LDL^T pivots
  std::vector<double> lower_;  // unit-lower multipliers
};

}  // namespace kirchhoff
