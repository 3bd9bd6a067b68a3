#include "kirchhoff/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <regex>
#include <set>

#include "kirchhoff/bubbles.hpp"
#include "kirchhoff/error.hpp"
#include "kirchhoff/thresholds.hpp"
#include "parallel.hpp"

#ifndef KH_VERSION
#define KH_VERSION "0.0.0"
#endif

namespace kirchhoff {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr double kLevelEps = 0.05;

[[noreturn]] void invalid(const std::string& what) { fail(ErrorKind::ConfigValidation, what); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) invalid("key '" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid("key '" + key + "' must be finite");
  return v;
}

std::uint64_t count(const json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<long long>() < 0) invalid("key '" + key + "' must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::vector<double> number_list(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) invalid("key '" + key + "' must be a nonempty array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number(v, key));
  return out;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  std::string unknown;
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
  }
  if (!unknown.empty()) invalid("unknown key(s) in " + where + ": " + unknown);
}

WeightSpec weight_from(const json& j, const std::string& key) {
  if (j.is_number()) {
    WeightSpec w;
    w.value = number(j, key);
    return w;
  }
  if (!j.is_string()) invalid("key '" + key + "' must be a weight string such as \"constant(1)\"");
  try {
    return parse_weight(j.get<std::string>());
  } catch (const Error& e) {
    invalid("key '" + key + "': " + e.what());
  }
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col > 1 ? col - 1 : col};
}

double support_radius(const RadialFunction& u) {
  const double peak = u.max_value();
  if (!(peak > 0.0)) return 0.0;
  const auto r = u.grid().nodes();
  double out = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] >= 1e-6 * peak) out = r[i];
  }
  return out;
}

ojson finite_or_null(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson thresholds_json(const ThresholdReport& t, double lambda) {
  ojson j;
  j["S"] = t.S;
  j["S_tolerance"] = t.S_tolerance;
  j["Qmax"] = t.Qmax;
  j["f_norm"] = t.f_norm;
  j["lambda"] = lambda;
  j["lambda0"] = t.lambda0;
  j["C0"] = t.C0;
  j["C1"] = t.C1;
  j["C2_scaling"] = t.C2_scaling;
  j["lambda_tilde0"] = t.lambda_tilde0;
  j["C3"] = t.C3;
  j["Lambda"] = t.Lambda;
  j["level_bound"] = t.level_bound;
  j["frozen_level_bound"] = t.frozen_level_bound;
  j["M"] = t.M;
  j["t1"] = t.t1;
  j["t2"] = t.t2;
  j["b0_of_lambda"] = t.b0_of_lambda;
  j["eta"] = t.eta;
  j["beta"] = t.beta;
  j["c2_bubble"] = t.c2_bubble;
  j["lambda1_candidate"] = t.lambda1_candidate ? ojson(*t.lambda1_candidate) : ojson(nullptr);
  return j;
}

std::string csv_table(const std::vector<std::array<std::optional<double>, 5>>& rows) {
  std::string out = "b_or_lambda,energy,residual,h1_gap,level_margin\r\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      if (row[c] && std::isfinite(*row[c])) out += fmt(*row[c]);
    }
    out += "\r\n";
  }
  return out;
}

double resolved_lambda(const ExperimentConfig& cfg, const ProblemParams& base) {
  if (cfg.lambda) return *cfg.lambda;
  return cfg.lambda_fraction * lambda0(cfg.q, base.Q().norm(), base.f().norm());
}

ProblemParams problem_on(const ExperimentConfig& cfg, const GridPtr& grid, double lambda, double b) {
  return ProblemParams(cfg.a, b, lambda, cfg.q, cfg.Q.build(grid, WeightRole::Critical, cfg.q),
                       cfg.f.build(grid, WeightRole::Concave, cfg.q), grid);
}

double solver_tol(const ExperimentConfig& cfg) {
  return std::max(cfg.solver.local_min_tol, cfg.solver.mountain_pass_tol);
}

void run_thresholds(const ExperimentConfig& cfg, ojson& rep) {
  const ProblemParams p = build_problem(cfg);
  rep["thresholds"] = thresholds_json(threshold_report(p, cfg.grid.radius), p.lambda());
}

void run_bubble_check(const ExperimentConfig& cfg, ojson& rep) {
  ojson bub;
  const SobolevDerivation& sd = sobolev_derivation();
  bub["sobolev"] = {{"value", sd.value},
                    {"grad_sq", sd.grad_sq},
                    {"l6_pow6", sd.l6_pow6},
                    {"grad_l6_ratio", sd.grad_sq / sd.l6_pow6},
                    {"grad_tail", sd.grad_tail},
                    {"l6_tail", sd.l6_tail},
                    {"richardson_delta", sd.richardson_delta},
                    {"radius", sd.radius},
                    {"nodes", sd.nodes}};

  const double eps_min = *std::min_element(cfg.eps_list.begin(), cfg.eps_list.end());
  const GridPtr grid = bubble_grid(cfg.rcut, eps_min);
  bub["rcut"] = cfg.rcut;
  bub["nodes"] = grid->size();
  ojson per_eps = ojson::array();
  for (double e : cfg.eps_list) {
    const BubbleReport r = bubble_report(cutoff_bubble(e, cfg.rcut, grid), e);
    ojson ls;
    for (const auto& [s, v] : r.ls_norms) ls[std::to_string(s)] = v;
    per_eps.push_back({{"eps", r.eps},
                       {"grad_norm_sq", r.grad_norm_sq},
                       {"l6_norm_sq", r.l6_norm_sq},
                       {"ls_norms", ls},
                       {"sobolev_quotient", r.sobolev_quotient},
                       {"quotient_over_S", r.sobolev_quotient / sd.value}});
  }
  bub["eps"] = per_eps;

  ojson slopes = ojson::array();
  for (double s : {2.0, 3.0, 4.0, 5.0}) {
    const double expected = s < 3.0 ? s / 2.0 : (s == 3.0 ? 1.5 : (6.0 - s) / 2.0);
    const double fitted = asymptotics_check(s, cfg.eps_list, cfg.rcut);
    slopes.push_back({{"s", s}, {"fitted", fitted}, {"expected", expected}, {"deviation", fitted - expected}});
  }
  bub["slopes"] = slopes;

  // Exponent of int f |v_eps|^q, reported without an expected value.
  {
    const ProblemParams p = problem_on(cfg, grid, 0.0, cfg.b);
    std::vector<double> x, y;
    for (double e : cfg.eps_list) {
      const EnergyParts parts = energy_parts(p, cutoff_bubble(e, cfg.rcut, grid));
      x.push_back(std::log(e));
      y.push_back(std::log(parts.concave));
    }
    bub["concave_term_exponent"] = fit_slope(x, y);
  }

  {
    const GridPtr wide = build_grid(50.0, 10000, DomainKind::DirichletBall);
    ojson vals = ojson::array();
    double lo = INFINITY, hi = -INFINITY;
    for (double e : {0.1, 0.2, 0.5}) {
      const double d = dirichlet_energy(talenti(e, wide));
      lo = std::min(lo, d);
      hi = std::max(hi, d);
      vals.push_back({{"eps", e}, {"grad_sq", d}});
    }
    bub["eps_invariance"] = {{"radius", 50.0}, {"nodes", 10000}, {"values", vals}, {"relative_spread", (hi - lo) / lo}};
  }

  {
    // K1, K2 carry O(eps) cutoff errors; the limit is taken by linear
    // extrapolation from the two finest scales.
    const GridPtr fine = bubble_grid(cfg.rcut, eps_min / 4.0);
    ojson seq = ojson::array();
    std::vector<BubbleReport> rs;
    for (double e : {eps_min, eps_min / 2.0, eps_min / 4.0}) {
      rs.push_back(bubble_report(cutoff_bubble(e, cfg.rcut, fine), e));
      seq.push_back({{"eps", e},
                     {"K1", rs.back().grad_norm_sq},
                     {"K2", rs.back().l6_norm_sq},
                     {"ratio", rs.back().sobolev_quotient}});
    }
    const double K1 = 2.0 * rs[2].grad_norm_sq - rs[1].grad_norm_sq;
    const double K2 = 2.0 * rs[2].l6_norm_sq - rs[1].l6_norm_sq;
    bub["k_ratio"] = {{"nodes", fine->size()},
                      {"sequence", seq},
                      {"K1", K1},
                      {"K2", K2},
                      {"ratio", K1 / K2},
                      {"relative_to_S", K1 / K2 / sd.value - 1.0}};
  }

  const ProblemParams base = build_problem(cfg);
  const double Qmax = base.Q().norm();
  {
    const GridPtr wide = build_grid(50.0, 20000, DomainKind::DirichletBall);
    const auto Q = WeightProfile::constant(wide, WeightRole::Critical, Qmax, cfg.q);
    const auto f = WeightProfile::constant(wide, WeightRole::Concave, 1.0, cfg.q);
    const ProblemParams p(cfg.a, cfg.b, 0.0, cfg.q, Q, f, wide);
    const FiberCoefficients fc = fiber_coefficients(p, talenti(kLevelEps, wide));
    const double gmax = fiber_energy(fc, fiber_maximize(fc));
    const double Lambda = critical_level(cfg.a, cfg.b, Qmax);
    bub["lambda_consistency"] = {{"eps", kLevelEps},
                                 {"radius", 50.0},
                                 {"nodes", 20000},
                                 {"fiber_max", gmax},
                                 {"Lambda", Lambda},
                                 {"relative_error", (gmax - Lambda) / Lambda}};
  }

  {
    const double rcut = cfg.grid.domain == DomainKind::DirichletBall ? cfg.grid.radius : cfg.rcut;
    const auto n = std::max<std::size_t>(cfg.grid.nodes, static_cast<std::size_t>(std::ceil(20.0 * rcut / kLevelEps)));
    const GridPtr g = build_grid(cfg.grid.radius, n, cfg.grid.domain);
    const ProblemParams p = problem_on(cfg, g, base.lambda(), cfg.b);
    const FiberCoefficients fc = fiber_coefficients(p, cutoff_bubble(kLevelEps, rcut, g));
    const double t = fiber_maximize(fc);
    const double fmax = fiber_energy(fc, t);
    const double bound = level_bound(cfg.a, cfg.b, cfg.q, p.Q().norm(), p.f().norm(), p.lambda());
    bub["level_check"] = {{"eps", kLevelEps},   {"rcut", rcut},       {"nodes", n},
                          {"lambda", p.lambda()}, {"t_eps", t},         {"fiber_max", fmax},
                          {"bound", bound},       {"margin", bound - fmax}, {"holds", fmax < bound}};
  }
  rep["bubble"] = bub;
}

void run_solve(const ExperimentConfig& cfg, ojson& rep) {
  const ProblemParams p = build_problem(cfg);
  const ThresholdReport tr = threshold_report(p, cfg.grid.radius);
  rep["thresholds"] = thresholds_json(tr, p.lambda());
  const GroundStateResult gs = ground_state(p, solver_tol(cfg), cfg.solver);

  ojson sols = ojson::array();
  sols.push_back(solution_json(*gs.local, p.a()));
  sols.push_back(solution_json(*gs.pass, p.a()));
  for (const auto& s : gs.starts) sols.push_back(solution_json(s, p.a()));
  rep["solutions"] = sols;
  ojson ground = solution_json(gs.ground, p.a());
  ground["below_pass_level"] = gs.below_pass_level;
  rep["ground_state"] = ground;
  const double lnorm = h1_norm(gs.local->u, p.a());
  rep["checks"] = {{"local_negative", gs.local->energy < 0.0},
                   {"local_inside_ball", lnorm < tr.beta},
                   {"pass_above_eta", gs.pass->energy >= tr.eta},
                   {"pass_below_bound", gs.pass->energy < tr.level_bound},
                   {"ground_le_min",
                    gs.ground.energy <= std::min(gs.local->energy, gs.pass->energy) + 1e-9},
                   {"h1_gap", h1_norm(gs.local->u - gs.pass->u, p.a())}};
  if (gs.pass->level_breach && cfg.solver.enforce_level_bound) {
    fail(ErrorKind::LevelBreach, "mountain-pass level " + fmt(gs.pass->energy) + " is not below the bound " +
                                     fmt(tr.level_bound));
  }
}

void run_continuation(const ExperimentConfig& cfg, ojson& rep, std::string& csv) {
  const ProblemParams p = build_problem(cfg).with_b(cfg.b_values.front());
  const double M = critical_level(cfg.a, 1.0, p.Q().norm());
  const ContinuationRecord rec = continuation_b(p, cfg.b_values, solver_tol(cfg), cfg.solver);

  std::vector<std::array<std::optional<double>, 5>> rows;
  ojson jrows = ojson::array();
  bool below_M = true;
  for (std::size_t k = 0; k < rec.solutions.size(); ++k) {
    const Solution& s = rec.solutions[k];
    std::optional<double> gap;
    if (k > 0) gap = rec.successive_h1_gaps[k - 1];
    below_M = below_M && s.energy < M;
    rows.push_back({rec.b_values[k], s.energy, s.residual, gap, s.level_margin});
    ojson row = solution_json(s, p.a());
    row["b"] = rec.b_values[k];
    row["h1_gap"] = gap ? ojson(*gap) : ojson(nullptr);
    jrows.push_back(row);
  }
  rep["continuation"] = {{"b_values", rec.b_values},
                         {"rows", jrows},
                         {"successive_h1_gaps", rec.successive_h1_gaps},
                         {"limit_residual_b0", rec.limit_residual_b0},
                         {"M", M},
                         {"all_below_M", below_M},
                         {"failure", rec.failure_kind ? ojson(rec.failure) : ojson(nullptr)}};
  csv = csv_table(rows);
  if (rec.failure_kind) fail(*rec.failure_kind, "b = " + fmt(rec.failed_b) + ": " + rec.failure);
}

void run_scan(const ExperimentConfig& cfg, ojson& rep, std::string& csv) {
  const ProblemParams base = build_problem(cfg);
  const double l0 = lambda0(cfg.q, base.Q().norm(), base.f().norm());
  const std::size_t m = cfg.lambda_fractions.size();
  std::vector<std::optional<GroundStateResult>> slots(m);
  SolverOptions inner = cfg.solver;
  inner.jobs = 1;
  const auto errors = detail::parallel_for(m, cfg.solver.jobs, [&](std::size_t i) {
    slots[i] = ground_state(base.with_lambda(cfg.lambda_fractions[i] * l0), solver_tol(cfg), inner);
  });

  std::vector<std::array<std::optional<double>, 5>> rows;
  ojson jrows = ojson::array();
  std::optional<Error> first_error;
  for (std::size_t i = 0; i < m; ++i) {
    const double lam = cfg.lambda_fractions[i] * l0;
    ojson row;
    row["lambda_fraction"] = cfg.lambda_fractions[i];
    row["lambda"] = lam;
    if (errors[i]) {
      try {
        std::rethrow_exception(errors[i]);
      } catch (const Error& e) {
        row["error"] = {{"name", std::string(e.name())}, {"message", e.what()}};
        if (!first_error) first_error = e;
      }
      rows.push_back({lam, std::nullopt, std::nullopt, std::nullopt, std::nullopt});
      jrows.push_back(row);
      continue;
    }
    const GroundStateResult& gs = *slots[i];
    const double gap = h1_norm(gs.local->u - gs.pass->u, base.a());
    row["local"] = solution_json(*gs.local, base.a());
    row["pass"] = solution_json(*gs.pass, base.a());
    row["ground"] = solution_json(gs.ground, base.a());
    row["h1_gap"] = gap;
    row["two_solutions"] = gs.local->residual <= gs.local->tolerance && gs.pass->residual <= gs.pass->tolerance &&
                           gs.local->energy < 0.0 && gs.pass->energy > 0.0 && gap > 0.0;
    row["error"] = nullptr;
    rows.push_back({lam, gs.ground.energy, gs.ground.residual, gap, gs.pass->level_margin});
    jrows.push_back(row);
    if (!first_error && gs.pass->level_breach && cfg.solver.enforce_level_bound) {
      first_error = Error(ErrorKind::LevelBreach, "lambda = " + fmt(lam) + ": mountain-pass level " +
                                                      fmt(gs.pass->energy) + " is not below the bound");
    }
  }
  rep["scan"] = {{"lambda0", l0}, {"rows", jrows}};
  csv = csv_table(rows);
  if (first_error) throw *first_error;
}

}  // namespace

std::string_view command_name(Command c) noexcept {
  switch (c) {
    case Command::Thresholds: return "thresholds";
    case Command::BubbleCheck: return "bubble-check";
    case Command::Solve: return "solve";
    case Command::Continuation: return "continuation";
    case Command::ScanLambda: return "scan-lambda";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (Command c : {Command::Thresholds, Command::BubbleCheck, Command::Solve, Command::Continuation,
                    Command::ScanLambda}) {
    if (command_name(c) == name) return c;
  }
  return std::nullopt;
}

std::string WeightSpec::text() const {
  if (kind == Kind::Constant) return "constant(" + fmt(value) + ")";
  return "gaussian-bump(" + fmt(center) + "," + fmt(width) + "," + fmt(floor) + ")";
}

WeightProfile WeightSpec::build(const GridPtr& grid, WeightRole role, double q) const {
  if (kind == Kind::Constant) return WeightProfile::constant(grid, role, value, q);
  return WeightProfile::gaussian_bump(grid, role, center, width, floor, q);
}

WeightSpec parse_weight(std::string_view text) {
  static const std::regex num(R"(\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*)");
  static const std::regex constant(R"(\s*constant\(([^()]*)\)\s*)");
  static const std::regex bump(R"(\s*gaussian-bump\(([^(),]*),([^(),]*),([^(),]*)\)\s*)");
  const std::string s(text);
  auto to_number = [](const std::string& part) {
    std::smatch m;
    if (!std::regex_match(part, m, num)) fail(ErrorKind::ConfigValidation, "not a number: '" + part + "'");
    return std::stod(m[1].str());
  };
  std::smatch m;
  WeightSpec w;
  if (std::regex_match(s, m, constant)) {
    w.kind = WeightSpec::Kind::Constant;
    w.value = to_number(m[1].str());
    return w;
  }
  if (std::regex_match(s, m, bump)) {
    w.kind = WeightSpec::Kind::GaussianBump;
    w.center = to_number(m[1].str());
    w.width = to_number(m[2].str());
    w.floor = to_number(m[3].str());
    return w;
  }
  fail(ErrorKind::ConfigValidation, "unknown weight profile '" + s + "'");
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    fail(ErrorKind::ConfigParse,
         "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  if (!j.is_object()) fail(ErrorKind::ConfigParse, "config must be a JSON object");

  reject_unknown(j,
                 {"command", "a", "b", "lambda", "lambda_fraction", "q", "Q", "f", "grid", "tolerances",
                  "enforce_level_bound", "multi_start", "b_values", "lambda_fractions", "eps_list", "rcut", "seed",
                  "jobs", "output"},
                 "config");

  ExperimentConfig cfg;
  if (j.contains("command")) {
    if (!j["command"].is_string()) invalid("key 'command' must be a string");
    const auto c = parse_command(j["command"].get<std::string>());
    if (!c) invalid("unknown command '" + j["command"].get<std::string>() + "'");
    cfg.command = *c;
  }
  if (j.contains("a")) cfg.a = number(j["a"], "a");
  if (j.contains("b")) cfg.b = number(j["b"], "b");
  if (j.contains("q")) cfg.q = number(j["q"], "q");
  // A null lambda is what the config echo writes when lambda_fraction applies.
  const bool has_lambda = j.contains("lambda") && !j["lambda"].is_null();
  const bool has_fraction = j.contains("lambda_fraction") && !j["lambda_fraction"].is_null();
  if (has_lambda && has_fraction) invalid("give either 'lambda' or 'lambda_fraction'");
  if (has_lambda) cfg.lambda = number(j["lambda"], "lambda");
  if (has_fraction) cfg.lambda_fraction = number(j["lambda_fraction"], "lambda_fraction");
  if (j.contains("Q")) cfg.Q = weight_from(j["Q"], "Q");
  if (j.contains("f")) cfg.f = weight_from(j["f"], "f");

  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_object()) invalid("key 'grid' must be an object");
    reject_unknown(g, {"domain", "R", "n"}, "grid");
    if (g.contains("domain")) {
      if (!g["domain"].is_string()) invalid("key 'grid.domain' must be a string");
      const std::string d = g["domain"].get<std::string>();
      if (d == "ball") {
        cfg.grid.domain = DomainKind::DirichletBall;
      } else if (d == "whole-space") {
        cfg.grid.domain = DomainKind::WholeSpaceTruncated;
        cfg.grid.radius = 50.0;
        cfg.grid.nodes = 8000;
      } else {
        invalid("grid.domain must be 'ball' or 'whole-space'");
      }
    }
    if (g.contains("R")) cfg.grid.radius = number(g["R"], "grid.R");
    if (g.contains("n")) cfg.grid.nodes = count(g["n"], "grid.n");
  }

  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) invalid("key 'tolerances' must be an object");
    reject_unknown(t, {"local_min", "mountain_pass", "continuation", "local_min_budget", "mountain_pass_budget"},
                   "tolerances");
    if (t.contains("local_min")) cfg.solver.local_min_tol = number(t["local_min"], "tolerances.local_min");
    if (t.contains("mountain_pass")) cfg.solver.mountain_pass_tol = number(t["mountain_pass"], "tolerances.mountain_pass");
    if (t.contains("continuation")) cfg.solver.continuation_tol = number(t["continuation"], "tolerances.continuation");
    if (t.contains("local_min_budget")) cfg.solver.local_min_budget = count(t["local_min_budget"], "tolerances.local_min_budget");
    if (t.contains("mountain_pass_budget")) {
      cfg.solver.mountain_pass_budget = count(t["mountain_pass_budget"], "tolerances.mountain_pass_budget");
    }
  }
  if (j.contains("enforce_level_bound")) {
    if (!j["enforce_level_bound"].is_boolean()) invalid("key 'enforce_level_bound' must be a boolean");
    cfg.solver.enforce_level_bound = j["enforce_level_bound"].get<bool>();
  }
  if (j.contains("multi_start")) cfg.solver.multi_start = count(j["multi_start"], "multi_start");
  if (j.contains("seed")) cfg.solver.seed = count(j["seed"], "seed");
  if (j.contains("jobs")) cfg.solver.jobs = static_cast<unsigned>(count(j["jobs"], "jobs"));
  if (j.contains("output")) {
    if (!j["output"].is_string()) invalid("key 'output' must be a string");
    cfg.output = j["output"].get<std::string>();
  }

  cfg.b_values.clear();
  for (int k = 0; k <= 10; ++k) cfg.b_values.push_back(std::ldexp(1.0, -k));
  cfg.lambda_fractions = {0.25, 0.5, 0.75};
  cfg.eps_list = {0.2, 0.1, 0.05, 0.025};
  if (j.contains("b_values")) cfg.b_values = number_list(j["b_values"], "b_values");
  if (j.contains("lambda_fractions")) cfg.lambda_fractions = number_list(j["lambda_fractions"], "lambda_fractions");
  if (j.contains("eps_list")) cfg.eps_list = number_list(j["eps_list"], "eps_list");
  if (j.contains("rcut")) cfg.rcut = number(j["rcut"], "rcut");

  // Invariants.
  if (!(cfg.q > 1.0 && cfg.q < 2.0)) invalid("q must lie in (1,2)");
  if (!(cfg.a > 0.0)) invalid("a must be positive");
  if (!(cfg.b >= 0.0)) invalid("b must be nonnegative");
  if (cfg.lambda && !(*cfg.lambda >= 0.0)) invalid("lambda must be nonnegative");
  if (!(cfg.lambda_fraction >= 0.0)) invalid("lambda_fraction must be nonnegative");
  if (!(cfg.grid.radius > 0.0)) invalid("grid.R must be positive");
  if (cfg.grid.nodes < RadialGrid::kMinNodes) invalid("grid.n must be at least 16");
  if (!(cfg.solver.local_min_tol > 0.0) || !(cfg.solver.mountain_pass_tol > 0.0) ||
      !(cfg.solver.continuation_tol > 0.0)) {
    invalid("tolerances must be positive");
  }
  if (cfg.solver.jobs == 0) invalid("jobs must be at least 1");
  if (cfg.f.kind == WeightSpec::Kind::Constant && !(cfg.f.value > 0.0)) invalid("f must be strictly positive");
  if (cfg.f.kind == WeightSpec::Kind::GaussianBump && !(cfg.f.floor > 0.0)) {
    invalid("f must be strictly positive (gaussian-bump floor must exceed 0)");
  }
  if (cfg.Q.kind == WeightSpec::Kind::Constant && !(cfg.Q.value > 0.0)) invalid("Q must be positive");
  if (!(cfg.rcut > 0.0)) invalid("rcut must be positive");
  for (double e : cfg.eps_list) {
    if (!(e > 0.0 && e < 0.5 * cfg.rcut)) invalid("eps_list entries must lie in (0, rcut/2)");
  }
  for (std::size_t k = 0; k < cfg.b_values.size(); ++k) {
    if (!(cfg.b_values[k] > 0.0)) invalid("b_values must be positive");
    if (k > 0 && !(cfg.b_values[k] < cfg.b_values[k - 1])) invalid("b_values must be strictly decreasing");
  }
  for (double fr : cfg.lambda_fractions) {
    if (!(fr > 0.0 && fr < 1.0)) invalid("lambda_fractions must lie in (0,1)");
  }
  const bool solving = cfg.command == Command::Solve || cfg.command == Command::ScanLambda;
  if (solving && !(cfg.b > 0.0)) invalid("b must be positive for solver commands");

  // Weight and problem invariants on the actual grid.
  try {
    const ProblemParams p = build_problem(cfg);
    if (cfg.command == Command::Solve || cfg.command == Command::Continuation) {
      const double l0 = lambda0(cfg.q, p.Q().norm(), p.f().norm());
      if (!(p.lambda() > 0.0 && p.lambda() < l0)) invalid("lambda must lie in (0, lambda0) for solver commands");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigValidation) throw;
    invalid(e.what());
  }
  return cfg;
}

ProblemParams build_problem(const ExperimentConfig& cfg) {
  const GridPtr grid = build_grid(cfg.grid.radius, cfg.grid.nodes, cfg.grid.domain);
  const ProblemParams base = problem_on(cfg, grid, 0.0, cfg.b);
  const double lambda = resolved_lambda(cfg, base);
  return base.with_lambda(lambda);
}

ojson config_to_json(const ExperimentConfig& cfg) {
  ojson j;
  j["command"] = std::string(command_name(cfg.command));
  j["a"] = cfg.a;
  j["b"] = cfg.b;
  j["lambda"] = cfg.lambda ? ojson(*cfg.lambda) : ojson(nullptr);
  j["lambda_fraction"] = cfg.lambda ? ojson(nullptr) : ojson(cfg.lambda_fraction);
  j["q"] = cfg.q;
  j["Q"] = cfg.Q.text();
  j["f"] = cfg.f.text();
  j["grid"] = {{"domain", cfg.grid.domain == DomainKind::DirichletBall ? "ball" : "whole-space"},
               {"R", cfg.grid.radius},
               {"n", cfg.grid.nodes}};
  j["tolerances"] = {{"local_min", cfg.solver.local_min_tol},
                     {"mountain_pass", cfg.solver.mountain_pass_tol},
                     {"continuation", cfg.solver.continuation_tol},
                     {"local_min_budget", cfg.solver.local_min_budget},
                     {"mountain_pass_budget", cfg.solver.mountain_pass_budget}};
  j["enforce_level_bound"] = cfg.solver.enforce_level_bound;
  j["multi_start"] = cfg.solver.multi_start;
  j["b_values"] = cfg.b_values;
  j["lambda_fractions"] = cfg.lambda_fractions;
  j["eps_list"] = cfg.eps_list;
  j["rcut"] = cfg.rcut;
  j["seed"] = cfg.solver.seed;
  j["output"] = cfg.output;
  return j;
}

ojson solution_json(const Solution& s, double a) {
  ojson j;
  j["classification"] = std::string(solution_kind_name(s.classification));
  j["origin"] = std::string(solution_kind_name(s.origin));
  j["energy"] = s.energy;
  j["residual"] = s.residual;
  j["tolerance"] = s.tolerance;
  j["nehari"] = s.nehari;
  j["level_margin"] = finite_or_null(s.level_margin);
  j["level_breach"] = s.level_breach;
  j["positive"] = s.positive;
  j["norm"] = h1_norm(s.u, a);
  j["max_value"] = s.u.max_value();
  j["support_radius"] = support_radius(s.u);
  j["identity_gap"] = s.identity_gap;
  j["iterations"] = s.iterations;
  return j;
}

ReportBundle run(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ReportBundle out;
  ojson& rep = out.json;
  rep["status"] = "ok";
  rep["error"] = nullptr;
  rep["command"] = std::string(command_name(cfg.command));
  rep["config"] = config_to_json(cfg);
  try {
    switch (cfg.command) {
      case Command::Thresholds: run_thresholds(cfg, rep); break;
      case Command::BubbleCheck: run_bubble_check(cfg, rep); break;
      case Command::Solve: run_solve(cfg, rep); break;
      case Command::Continuation: run_continuation(cfg, rep, out.csv); break;
      case Command::ScanLambda: run_scan(cfg, rep, out.csv); break;
    }
  } catch (const Error& e) {
    rep["status"] = "failed";
    rep["error"] = {{"name", std::string(e.name())}, {"message", e.what()}};
    const bool config = e.kind() == ErrorKind::ConfigParse || e.kind() == ErrorKind::ConfigValidation;
    out.exit_code = config ? kExitConfig : kExitSolver;
  } catch (const std::exception& e) {
    rep["status"] = "failed";
    rep["error"] = {{"name", "Internal"}, {"message", e.what()}};
    out.exit_code = kExitSolver;
  }
  const SobolevDerivation& sd = sobolev_derivation();
  rep["provenance"] = {{"code_version", KH_VERSION},
                       {"grid",
                        {{"domain", cfg.grid.domain == DomainKind::DirichletBall ? "ball" : "whole-space"},
                         {"R", cfg.grid.radius},
                         {"n", cfg.grid.nodes},
                         {"spacing", cfg.grid.radius / static_cast<double>(cfg.grid.nodes)}}},
                       {"tolerances",
                        {{"local_min", cfg.solver.local_min_tol},
                         {"mountain_pass", cfg.solver.mountain_pass_tol},
                         {"continuation", cfg.solver.continuation_tol}}},
                       {"sobolev", {{"value", sd.value}, {"richardson_delta", sd.richardson_delta}}},
                       {"seed", cfg.solver.seed},
                       {"jobs", cfg.solver.jobs},
                       {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  return out;
}

}  // namespace kirchhoff
