#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kirchhoff/energy.hpp"
#include "kirchhoff/solvers.hpp"

namespace kirchhoff {

enum class Command { Thresholds, BubbleCheck, Solve, Continuation, ScanLambda };

std::string_view command_name(Command c) noexcept;
std::optional<Command> parse_command(std::string_view name) noexcept;

struct WeightSpec {
  enum class Kind { Constant, GaussianBump } kind = Kind::Constant;
  double value = 1.0;
  double center = 0.0;
  double width = 1.0;
  double floor = 0.0;

  std::string text() const;
  WeightProfile build(const GridPtr& grid, WeightRole role, double q) const;
};

// "constant(v)" or "gaussian-bump(center,width,floor)"
WeightSpec parse_weight(std::string_view text);

struct GridSpec {
  DomainKind domain = DomainKind::DirichletBall;
  double radius = 1.0;
  std::size_t nodes = 2000;
};

struct ExperimentConfig {
  Command command = Command::Thresholds;
  double a = 1.0;
  double b = 1.0;
  std::optional<double> lambda;
  double lambda_fraction = 0.5;  // of lambda0; used when lambda is absent
  double q = 1.5;
  WeightSpec Q;
  WeightSpec f;
  GridSpec grid;
  SolverOptions solver;
  std::vector<double> b_values;
  std::vector<double> lambda_fractions;
  std::vector<double> eps_list;
  double rcut = 4.0;
  std::string output;
};

// Throws Error(ConfigParse) for malformed JSON and Error(ConfigValidation)
// for unknown keys or violated invariants.
ExperimentConfig parse_config(std::string_view text);

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

// Problem instance for the config; lambda resolved against lambda0.
ProblemParams build_problem(const ExperimentConfig& cfg);

struct ReportBundle {
  nlohmann::ordered_json json;
  std::string csv;  // empty unless the command produces a table
  int exit_code = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

ReportBundle run(const ExperimentConfig& cfg);

nlohmann::ordered_json solution_json(const Solution& s, double a);

}  // namespace kirchhoff
