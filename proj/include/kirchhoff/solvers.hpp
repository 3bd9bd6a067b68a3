#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kirchhoff/energy.hpp"
#include "kirchhoff/error.hpp"

namespace kirchhoff {

enum class SolutionKind { LocalMin, MountainPass, GroundState };

std::string_view solution_kind_name(SolutionKind kind) noexcept;

struct Solution {
  RadialFunction u;
  double energy = 0.0;
  double residual = 0.0;   // H^1 norm of the Riesz gradient
  double tolerance = 0.0;  // residual target it was certified against
  SolutionKind classification = SolutionKind::LocalMin;
  SolutionKind origin = SolutionKind::LocalMin;  // mechanism that produced u
  double nehari = 0.0;
  bool positive = false;
  double level_margin = 0.0;  // Lambda - C1 lambda^{2/(2-q)} - energy
  double identity_gap = 0.0;  // |I - <I',u>/4 - quarter_identity_rhs|
  bool level_breach = false;
  std::size_t iterations = 0;
};

struct PathState {
  std::vector<RadialFunction> knots;  // knots[0] = 0, I(knots.back()) < 0
  std::size_t max_index = 0;
  double max_energy = 0.0;  // sup of I along the path
  std::vector<double> history;  // max_energy after every sweep
};

struct ContinuationRecord {
  std::vector<double> b_values;
  std::vector<Solution> solutions;
  std::vector<double> successive_h1_gaps;  // gap[k] = |u_{b_k} - u_{b_{k+1}}|
  double limit_residual_b0 = 0.0;
  // Set when a b-step failed; earlier steps are kept.
  std::optional<ErrorKind> failure_kind;
  std::string failure;
  double failed_b = 0.0;
};

struct SolverOptions {
  double local_min_tol = 1e-6;
  double mountain_pass_tol = 1e-4;
  double continuation_tol = 1e-12;  // minimizers are polished to this before gaps are taken
  std::size_t local_min_budget = 20000;
  std::size_t mountain_pass_budget = 500;  // deformation sweeps
  std::size_t path_knots = 41;
  bool enforce_level_bound = true;
  std::size_t multi_start = 4;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

class LevelBreachError : public Error {
 public:
  LevelBreachError(const std::string& what, Solution solution)
      : Error(ErrorKind::LevelBreach, what), solution_(std::move(solution)) {}
  const Solution& solution() const noexcept { return solution_; }

 private:
  Solution solution_;
};

// |u| nodewise.
RadialFunction positivize(const RadialFunction& u);

// Fixed positive start profile 1 - (r/R)^2 and randomized positive seeds.
RadialFunction default_bump(const ProblemParams& p);
RadialFunction random_positive_seed(const ProblemParams& p, std::uint64_t seed);

// Projected Armijo descent in the closed ball |u| <= beta, started from
// t0 * start with the largest t0 = 2^{-k} that lies in the ball and has I < 0.
Solution local_min(const ProblemParams& p, double beta, double tol, const SolverOptions& opt = {},
                   const RadialFunction* start = nullptr);

// Min-max over straight paths 0 -> e: descent of the path maximum.
Solution mountain_pass(const ProblemParams& p, double tol, const SolverOptions& opt = {},
                       const RadialFunction* start = nullptr, PathState* path = nullptr);

// Least-energy certified critical point among local_min, mountain_pass and
// multi-start descents. A mountain-pass point that breaches the level bound
// still competes, flagged with level_breach.
struct GroundStateResult {
  Solution ground;
  std::optional<Solution> local;
  std::optional<Solution> pass;
  std::vector<Solution> starts;
  bool below_pass_level = true;  // m <= c + tol
};

GroundStateResult ground_state(const ProblemParams& p, double tol, const SolverOptions& opt = {},
                               const Solution* warm = nullptr, const Solution* warm_pass = nullptr);

ContinuationRecord continuation_b(const ProblemParams& p, const std::vector<double>& b_seq, double tol,
                                  const SolverOptions& opt = {});

// Fills energy, residual, nehari, identity gap, positivity and level margin.
Solution certify(const ProblemParams& p, RadialFunction u, SolutionKind kind, double tol, std::size_t iterations);

}  // namespace kirchhoff
