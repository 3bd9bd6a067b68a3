#ifndef KIRCHHOFF_H
#define KIRCHHOFF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define KH_API __declspec(dllexport)
#else
#define KH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kh_status {
  KH_OK = 0,
  KH_INVALID_ARGUMENT = 1,
  KH_GRID_MISMATCH = 2,
  KH_NO_INTERIOR_MAX = 3,
  KH_NO_NEGATIVE_START = 4,
  KH_STAGNATION = 5,
  KH_LEVEL_BREACH = 6,
  KH_EMPTY_CANDIDATE_SET = 7,
  KH_CONFIG_PARSE = 8,
  KH_CONFIG_VALIDATION = 9,
  KH_INTERNAL = 10
} kh_status;

typedef enum kh_domain { KH_DIRICHLET_BALL = 0, KH_WHOLE_SPACE_TRUNCATED = 1 } kh_domain;

typedef enum kh_solver { KH_LOCAL_MIN = 0, KH_MOUNTAIN_PASS = 1, KH_GROUND_STATE = 2 } kh_solver;

typedef struct kh_problem kh_problem;
typedef struct kh_report kh_report;

/* Weight strings: "constant(v)" or "gaussian-bump(center,width,floor)". */
typedef struct kh_problem_desc {
  double a;
  double b;
  double lambda;
  double q;
  const char* Q;
  const char* f;
  kh_domain domain;
  double radius;
  size_t nodes;
} kh_problem_desc;

typedef struct kh_thresholds {
  double S;
  double Qmax;
  double f_norm;
  double lambda0;
  double C0;
  double C1;
  double C2_scaling;
  double lambda_tilde0;
  double C3;
  double Lambda;
  double level_bound;
  double M;
  double t1;
  double t2;
  double b0_of_lambda;
  double eta;
  double beta;
} kh_thresholds;

typedef struct kh_solution_info {
  double energy;
  double residual;
  double nehari;
  double level_margin;
  int positive;
  int level_breach;
  size_t iterations;
} kh_solution_info;

typedef struct kh_run_options {
  const char* command; /* NULL keeps the config's command */
  unsigned jobs;       /* 0 keeps the config value */
  int has_seed;
  uint64_t seed;
} kh_run_options;

KH_API const char* kh_version(void);
KH_API const char* kh_status_name(kh_status status);
/* Message of the last failed call on this thread. */
KH_API const char* kh_last_error(void);

KH_API kh_status kh_sobolev_constant(double* out);
KH_API kh_status kh_gmax_closed(double c1t, double c2t, double c3t, double* out);
KH_API kh_status kh_critical_level(double a, double b, double Qmax, double* out);

KH_API kh_status kh_problem_create(const kh_problem_desc* desc, kh_problem** out);
KH_API void kh_problem_destroy(kh_problem* problem);
KH_API size_t kh_problem_size(const kh_problem* problem);
KH_API kh_status kh_problem_nodes(const kh_problem* problem, double* r, size_t n);
KH_API kh_status kh_problem_thresholds(const kh_problem* problem, kh_thresholds* out);
KH_API kh_status kh_energy(const kh_problem* problem, const double* u, size_t n, double* out);
/* grad may be NULL when only the residual is wanted. */
KH_API kh_status kh_gradient(const kh_problem* problem, const double* u, size_t n, double* grad, double* residual);
KH_API kh_status kh_solve(const kh_problem* problem, kh_solver solver, uint64_t seed, double* u, size_t n,
                          kh_solution_info* info);

/* Parses and runs a JSON config. A report is produced whenever the config
   parses; *out is NULL otherwise. */
KH_API kh_status kh_run_config(const char* json, const kh_run_options* options, kh_report** out);
KH_API const char* kh_report_json(const kh_report* report);
KH_API const char* kh_report_csv(const kh_report* report);
KH_API int kh_report_exit_code(const kh_report* report);
KH_API void kh_report_destroy(kh_report* report);

#ifdef __cplusplus
}
#endif

#endif
