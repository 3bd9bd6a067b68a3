#include "kirchhoff.h"

#include <cstring>
#include <string>

#include "kirchhoff/experiment.hpp"
#include "kirchhoff/thresholds.hpp"
#include "kirchhoff/bubbles.hpp"

struct kh_problem {
  kirchhoff::ProblemParams params;
};

struct kh_report {
  std::string json;
  std::string csv;
  int exit_code;
};

namespace {

using kirchhoff::Error;
using kirchhoff::ErrorKind;

thread_local std::string last_error;

kh_status to_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return KH_INVALID_ARGUMENT;
    case ErrorKind::GridMismatch: return KH_GRID_MISMATCH;
    case ErrorKind::NoInteriorMax: return KH_NO_INTERIOR_MAX;
    case ErrorKind::NoNegativeStart: return KH_NO_NEGATIVE_START;
    case ErrorKind::Stagnation: return KH_STAGNATION;
    case ErrorKind::LevelBreach: return KH_LEVEL_BREACH;
    case ErrorKind::EmptyCandidateSet: return KH_EMPTY_CANDIDATE_SET;
    case ErrorKind::ConfigParse: return KH_CONFIG_PARSE;
    case ErrorKind::ConfigValidation: return KH_CONFIG_VALIDATION;
  }
  return KH_INTERNAL;
}

template <class F>
kh_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return KH_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return to_status(e.kind());
  } catch (const std::exception& e) {
    last_error = e.what();
    return KH_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return KH_INTERNAL;
  }
}

kh_status null_argument(const char* what) {
  last_error = std::string(what) + " must not be NULL";
  return KH_INVALID_ARGUMENT;
}

void check_size(const kh_problem* p, size_t n) {
  if (n != p->params.grid().size()) kirchhoff::fail(ErrorKind::GridMismatch, "array length does not match grid size");
}

kirchhoff::RadialFunction wrap(const kh_problem* p, const double* u, size_t n) {
  check_size(p, n);
  return kirchhoff::RadialFunction(p->params.grid_ptr(), std::vector<double>(u, u + n));
}

}  // namespace

extern "C" {

const char* kh_version(void) { return KH_VERSION; }

const char* kh_status_name(kh_status status) {
  switch (status) {
    case KH_OK: return "Ok";
    case KH_INVALID_ARGUMENT: return "InvalidArgument";
    case KH_GRID_MISMATCH: return "GridMismatch";
    case KH_NO_INTERIOR_MAX: return "NoInteriorMax";
    case KH_NO_NEGATIVE_START: return "NoNegativeStart";
    case KH_STAGNATION: return "Stagnation";
    case KH_LEVEL_BREACH: return "LevelBreach";
    case KH_EMPTY_CANDIDATE_SET: return "EmptyCandidateSet";
    case KH_CONFIG_PARSE: return "ConfigParse";
    case KH_CONFIG_VALIDATION: return "ConfigValidation";
    case KH_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* kh_last_error(void) { return last_error.c_str(); }

kh_status kh_sobolev_constant(double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = kirchhoff::sobolev_constant(); });
}

kh_status kh_gmax_closed(double c1t, double c2t, double c3t, double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = kirchhoff::gmax_closed(c1t, c2t, c3t); });
}

kh_status kh_critical_level(double a, double b, double Qmax, double* out) {
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = kirchhoff::critical_level(a, b, Qmax); });
}

kh_status kh_problem_create(const kh_problem_desc* desc, kh_problem** out) {
  if (desc == nullptr) return null_argument("desc");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] {
    using namespace kirchhoff;
    const DomainKind kind =
        desc->domain == KH_WHOLE_SPACE_TRUNCATED ? DomainKind::WholeSpaceTruncated : DomainKind::DirichletBall;
    const GridPtr grid = build_grid(desc->radius, desc->nodes, kind);
    const WeightSpec Q = parse_weight(desc->Q != nullptr ? desc->Q : "constant(1)");
    const WeightSpec f = parse_weight(desc->f != nullptr ? desc->f : "constant(1)");
    ProblemParams params(desc->a, desc->b, desc->lambda, desc->q, Q.build(grid, WeightRole::Critical, desc->q),
                         f.build(grid, WeightRole::Concave, desc->q), grid);
    *out = new kh_problem{std::move(params)};
  });
}

void kh_problem_destroy(kh_problem* problem) { delete problem; }

size_t kh_problem_size(const kh_problem* problem) { return problem == nullptr ? 0 : problem->params.grid().size(); }

kh_status kh_problem_nodes(const kh_problem* problem, double* r, size_t n) {
  if (problem == nullptr) return null_argument("problem");
  if (r == nullptr) return null_argument("r");
  return guarded([&] {
    check_size(problem, n);
    const auto nodes = problem->params.grid().nodes();
    std::memcpy(r, nodes.data(), n * sizeof(double));
  });
}

kh_status kh_problem_thresholds(const kh_problem* problem, kh_thresholds* out) {
  if (problem == nullptr) return null_argument("problem");
  if (out == nullptr) return null_argument("out");
  return guarded([&] {
    const auto t = kirchhoff::threshold_report(problem->params, problem->params.grid().radius());
    *out = kh_thresholds{t.S,      t.Qmax,         t.f_norm, t.lambda0, t.C0, t.C1,           t.C2_scaling, t.lambda_tilde0,
                         t.C3,     t.Lambda,       t.level_bound, t.M,  t.t1, t.t2, t.b0_of_lambda, t.eta, t.beta};
  });
}

kh_status kh_energy(const kh_problem* problem, const double* u, size_t n, double* out) {
  if (problem == nullptr) return null_argument("problem");
  if (u == nullptr) return null_argument("u");
  if (out == nullptr) return null_argument("out");
  return guarded([&] { *out = kirchhoff::energy(problem->params, wrap(problem, u, n)); });
}

kh_status kh_gradient(const kh_problem* problem, const double* u, size_t n, double* grad, double* residual) {
  if (problem == nullptr) return null_argument("problem");
  if (u == nullptr) return null_argument("u");
  return guarded([&] {
    const auto g = kirchhoff::gradient(problem->params, wrap(problem, u, n));
    if (grad != nullptr) std::memcpy(grad, g.riesz.values().data(), n * sizeof(double));
    if (residual != nullptr) *residual = g.residual;
  });
}

kh_status kh_solve(const kh_problem* problem, kh_solver solver, uint64_t seed, double* u, size_t n,
                   kh_solution_info* info) {
  if (problem == nullptr) return null_argument("problem");
  return guarded([&] {
    using namespace kirchhoff;
    if (u != nullptr) check_size(problem, n);
    const ProblemParams& p = problem->params;
    SolverOptions opt;
    opt.seed = seed;
    auto finish = [&](const Solution& s) {
      if (u != nullptr) std::memcpy(u, s.u.values().data(), n * sizeof(double));
      if (info != nullptr) {
        *info = kh_solution_info{s.energy, s.residual, s.nehari, s.level_margin,
                                 s.positive ? 1 : 0, s.level_breach ? 1 : 0, s.iterations};
      }
    };
    switch (solver) {
      case KH_LOCAL_MIN: {
        const double beta = eta_beta(p.lambda(), p.q(), p.Q().norm(), p.f().norm()).beta;
        finish(local_min(p, beta, opt.local_min_tol, opt));
        break;
      }
      case KH_MOUNTAIN_PASS:
        try {
          finish(mountain_pass(p, opt.mountain_pass_tol, opt));
        } catch (const LevelBreachError& e) {
          finish(e.solution());
          throw;
        }
        break;
      case KH_GROUND_STATE:
        finish(ground_state(p, std::max(opt.local_min_tol, opt.mountain_pass_tol), opt).ground);
        break;
      default:
        fail(ErrorKind::InvalidArgument, "unknown solver");
    }
  });
}

kh_status kh_run_config(const char* json, const kh_run_options* options, kh_report** out) {
  if (json == nullptr) return null_argument("json");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  kh_status run_status = KH_OK;
  std::string run_message;
  const kh_status parse_status = guarded([&] {
    using namespace kirchhoff;
    std::string text = json;
    if (options != nullptr && (options->command != nullptr || options->jobs > 0 || options->has_seed)) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error&) {
        parse_config(text);  // reports the parse error with line context
        throw;
      }
      if (!j.is_object()) fail(ErrorKind::ConfigParse, "config must be a JSON object");
      if (options->command != nullptr) {
        if (j.contains("command") && j["command"] != options->command) {
          fail(ErrorKind::ConfigValidation, "config command " + j["command"].dump() + " conflicts with subcommand '" +
                                                options->command + "'");
        }
        j["command"] = options->command;
      }
      if (options->jobs > 0) j["jobs"] = options->jobs;
      if (options->has_seed) j["seed"] = options->seed;
      text = j.dump();
    }
    const ExperimentConfig cfg = parse_config(text);
    ReportBundle bundle = run(cfg);
    if (bundle.exit_code != kExitOk) {
      const auto& err = bundle.json["error"];
      run_message = err["message"].get<std::string>();
      run_status = KH_INTERNAL;
      for (int k = 0; k <= static_cast<int>(ErrorKind::ConfigValidation); ++k) {
        if (err["name"] == error_name(static_cast<ErrorKind>(k))) run_status = to_status(static_cast<ErrorKind>(k));
      }
    }
    *out = new kh_report{bundle.json.dump(2), std::move(bundle.csv), bundle.exit_code};
  });
  if (parse_status != KH_OK) return parse_status;
  last_error = run_message;
  return run_status;
}

const char* kh_report_json(const kh_report* report) { return report == nullptr ? "" : report->json.c_str(); }
const char* kh_report_csv(const kh_report* report) { return report == nullptr ? "" : report->csv.c_str(); }
int kh_report_exit_code(const kh_report* report) { return report == nullptr ? 2 : report->exit_code; }
void kh_report_destroy(kh_report* report) { delete report; }

}  // extern "C"
