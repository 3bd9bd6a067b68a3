#include "kirchhoff/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "kirchhoff/bubbles.hpp"
#include "kirchhoff/thresholds.hpp"
#include "parallel.hpp"

namespace kirchhoff {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-30;

double step_after(double alpha, const RadialFunction& s, const RadialFunction& y, double a) {
  // Barzilai-Borwein trial step in the H^1 metric.
  const double sy = h1_inner(s, y, a);
  const double ss = h1_inner(s, s, a);
  if (sy > 0.0 && std::isfinite(ss / sy)) return ss / sy;
  return 2.0 * alpha;
}

void project_ball(RadialFunction& u, double beta, double a) {
  const double norm = h1_norm(u, a);
  if (norm > beta) u *= beta / norm;
}

void pin_boundary(RadialFunction& u) { u[u.size() - 1] = 0.0; }

// Roundoff floor of I(u): energy terms are summed with magnitudes up to this.
double energy_noise(const ProblemParams& p, const RadialFunction& u) {
  const EnergyParts e = energy_parts(p, u);
  const double d = p.a() * e.dirichlet;
  const double scale = 0.5 * (d + e.mass) + 0.25 * p.b() * e.dirichlet * e.dirichlet +
                       e.critical / p.power() + p.lambda() * e.concave / p.q();
  return 64.0 * std::numeric_limits<double>::epsilon() * scale;
}

struct RayMax {
  RadialFunction w;
  double value;
};

std::optional<RayMax> ray_max(const ProblemParams& p, const RadialFunction& direction) {
  const FiberCoefficients fc = fiber_coefficients(p, direction);
  if (!(fc.c3t > 0.0) || !(fc.c1t > 0.0)) return std::nullopt;
  try {
    const double t = fiber_maximize(fc);
    return RayMax{t * direction, fiber_energy(fc, t)};
  } catch (const Error&) {
    return std::nullopt;
  }
}

RadialFunction default_pass_seed(const ProblemParams& p) {
  const double L = p.grid().kind() == DomainKind::DirichletBall ? p.grid().radius() : std::min(p.grid().radius(), 4.0);
  return cutoff_bubble(0.1 * L, L, p.grid_ptr());
}

}  // namespace

std::string_view solution_kind_name(SolutionKind kind) noexcept {
  switch (kind) {
    case SolutionKind::LocalMin: return "LocalMin";
    case SolutionKind::MountainPass: return "MountainPass";
    case SolutionKind::GroundState: return "GroundState";
  }
  return "Unknown";
}

RadialFunction positivize(const RadialFunction& u) {
  RadialFunction out = u;
  for (double& v : out.values()) v = std::abs(v);
  return out;
}

RadialFunction default_bump(const ProblemParams& p) {
  const double R = p.grid().radius();
  const bool ball = p.grid().kind() == DomainKind::DirichletBall;
  return RadialFunction::sample(p.grid_ptr(), [=](double r) {
    const double x = r / R;
    const double base = 1.0 - x * x;
    return ball ? base : base * std::exp(-r * r / 4.0);
  });
}

RadialFunction random_positive_seed(const ProblemParams& p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> amp(0.5, 1.5);
  std::uniform_real_distribution<double> width(0.2, 0.8);
  const double R = p.grid().radius();
  const double L = p.grid().kind() == DomainKind::DirichletBall ? R : std::min(R, 4.0);
  double c[3], s[3];
  for (int j = 0; j < 3; ++j) {
    c[j] = amp(gen);
    s[j] = width(gen) * L;
  }
  return RadialFunction::sample(p.grid_ptr(), [&](double r) {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += c[j] * std::exp(-(r / s[j]) * (r / s[j]));
    const double x = r / R;
    return v * (1.0 - x * x);
  });
}

Solution certify(const ProblemParams& p, RadialFunction u, SolutionKind kind, double tol, std::size_t iterations) {
  u = positivize(u);
  pin_boundary(u);
  Solution s{std::move(u)};
  const Gradient g = gradient(p, s.u);
  s.energy = energy(p, s.u);
  s.residual = g.residual;
  s.tolerance = tol;
  s.classification = kind;
  s.origin = kind;
  s.nehari = nehari_residual(p, s.u);
  s.identity_gap = std::abs(s.energy - 0.25 * s.nehari - quarter_identity_rhs(p, s.u));
  s.positive = s.u.min_value() >= -1e-10 && s.u.max_value() > 0.0;
  if (p.is_critical()) {
    s.level_margin =
        level_bound(p.a(), p.b(), p.q(), p.Q().norm(), p.f().norm(), p.lambda()) - s.energy;
    s.level_breach = kind == SolutionKind::MountainPass && s.level_margin <= 0.0;
  } else {
    s.level_margin = std::numeric_limits<double>::quiet_NaN();
  }
  s.iterations = iterations;
  return s;
}

Solution local_min(const ProblemParams& p, double beta, double tol, const SolverOptions& opt,
                   const RadialFunction* start) {
  require(beta > 0.0, "local_min needs beta > 0");
  require(tol > 0.0, "local_min needs tol > 0");
  const double a = p.a();
  RadialFunction psi = start != nullptr ? positivize(*start) : default_bump(p);
  pin_boundary(psi);

  std::optional<RadialFunction> u0;
  for (int k = 0; k <= 80 && !u0; ++k) {
    RadialFunction trial = std::ldexp(1.0, -k) * psi;
    if (h1_norm(trial, a) <= beta && energy(p, trial) < 0.0) u0 = std::move(trial);
  }
  if (!u0) fail(ErrorKind::NoNegativeStart, "no t0 <= 1 gives I(t0 psi) < 0 inside the ball");

  RadialFunction u = std::move(*u0);
  double E = energy(p, u);
  Gradient g = gradient(p, u);
  double alpha = 1.0;
  std::size_t it = 0;
  for (; it < opt.local_min_budget && g.residual > tol; ++it) {
    double step = alpha;
    RadialFunction cand = u;
    double Ec = 0.0;
    std::optional<Gradient> gc;
    const double noise = energy_noise(p, u);
    for (;;) {
      cand = u;
      cand.axpy(-step, g.riesz);
      project_ball(cand, beta, a);
      cand = positivize(cand);
      Ec = energy(p, cand);
      const RadialFunction diff = cand - u;
      const double moved = h1_inner(diff, diff, a);
      if (moved > 0.0 && Ec <= E - kArmijo * moved / step) break;
      // Energy differences below roundoff: fall back to residual decrease.
      if (moved > 0.0 && std::abs(Ec - E) <= noise) {
        gc = gradient(p, cand);
        if (gc->residual < g.residual) break;
        gc.reset();
      }
      step *= 0.5;
      if (step < kMinStep) fail(ErrorKind::Stagnation, "local_min line search collapsed");
    }
    if (!gc) gc = gradient(p, cand);
    alpha = step_after(step, cand - u, gc->riesz - g.riesz, a);
    u = std::move(cand);
    E = Ec;
    g = std::move(*gc);
  }
  if (g.residual > tol) {
    fail(ErrorKind::Stagnation, "local_min residual " + std::to_string(g.residual) + " above tolerance after " +
                                    std::to_string(it) + " iterations");
  }
  return certify(p, std::move(u), SolutionKind::LocalMin, tol, it);
}

Solution mountain_pass(const ProblemParams& p, double tol, const SolverOptions& opt, const RadialFunction* start,
                       PathState* path) {
  require(tol > 0.0, "mountain_pass needs tol > 0");
  require(opt.path_knots >= 3, "path needs at least three knots");
  const double a = p.a();
  RadialFunction seed = start != nullptr ? positivize(*start) : default_pass_seed(p);
  pin_boundary(seed);
  auto first = ray_max(p, seed);
  if (!first) fail(ErrorKind::NoInteriorMax, "start direction has no interior fiber maximum");

  RadialFunction w = std::move(first->w);
  double phi = first->value;
  Gradient g = gradient(p, w);
  std::vector<double> history{phi};
  double alpha = 1.0;
  std::size_t sweep = 0;
  for (; sweep < opt.mountain_pass_budget && g.residual > tol; ++sweep) {
    double step = alpha;
    std::optional<RayMax> next;
    for (;;) {
      RadialFunction dir = w;
      dir.axpy(-step, g.riesz);
      next = ray_max(p, positivize(dir));
      if (next && next->value <= phi - kArmijo * step * g.residual * g.residual) break;
      step *= 0.5;
      if (step < kMinStep) fail(ErrorKind::Stagnation, "mountain_pass deformation collapsed");
    }
    Gradient gn = gradient(p, next->w);
    alpha = step_after(step, next->w - w, gn.riesz - g.riesz, a);
    w = std::move(next->w);
    phi = next->value;
    g = std::move(gn);
    history.push_back(phi);
  }
  if (g.residual > tol) {
    fail(ErrorKind::Stagnation, "mountain_pass residual " + std::to_string(g.residual) + " above tolerance after " +
                                    std::to_string(sweep) + " sweeps");
  }

  Solution sol = certify(p, w, SolutionKind::MountainPass, tol, sweep);
  if (path != nullptr) {
    const FiberCoefficients fc = fiber_coefficients(p, sol.u);
    const double t_end = fiber_negative_point(fc);
    const std::size_t m = opt.path_knots - 1;
    path->knots.clear();
    for (std::size_t k = 0; k <= m; ++k) path->knots.push_back((t_end * k / m) * sol.u);
    path->max_index = static_cast<std::size_t>(std::lround(m / t_end));
    path->max_energy = sol.energy;
    path->history = std::move(history);
  }
  if (sol.level_breach && opt.enforce_level_bound) {
    throw LevelBreachError("mountain-pass level " + std::to_string(sol.energy) + " is not below the bound (margin " +
                               std::to_string(sol.level_margin) + ")",
                           std::move(sol));
  }
  return sol;
}

GroundStateResult ground_state(const ProblemParams& p, double tol, const SolverOptions& opt, const Solution* warm,
                               const Solution* warm_pass) {
  require(tol > 0.0, "ground_state needs tol > 0");
  require(p.lambda() > 0.0, "ground_state needs lambda > 0");
  const double beta = eta_beta(p.lambda(), p.q(), p.Q().norm(), p.f().norm()).beta;

  std::optional<Solution> local = local_min(p, beta, opt.local_min_tol, opt, warm != nullptr ? &warm->u : nullptr);
  std::optional<Solution> pass;
  try {
    pass = mountain_pass(p, opt.mountain_pass_tol, opt, warm_pass != nullptr ? &warm_pass->u : nullptr);
  } catch (const LevelBreachError& e) {
    pass = e.solution();
  }

  std::vector<std::optional<Solution>> slots(opt.multi_start);
  detail::parallel_for(opt.multi_start, opt.jobs, [&](std::size_t i) {
    const RadialFunction seed = random_positive_seed(p, opt.seed + i);
    slots[i] = local_min(p, beta, opt.local_min_tol, opt, &seed);
  });
  std::vector<Solution> starts;
  for (auto& s : slots) {
    if (s) starts.push_back(std::move(*s));
  }

  const Solution* best = nullptr;
  auto consider = [&](const Solution& s) {
    if (!(s.residual <= tol) || !s.positive) return;
    if (best == nullptr || s.energy < best->energy - 1e-9 ||
        (std::abs(s.energy - best->energy) <= 1e-9 && s.residual < best->residual)) {
      best = &s;
    }
  };
  consider(*local);
  consider(*pass);
  for (const auto& s : starts) consider(s);
  if (best == nullptr) fail(ErrorKind::EmptyCandidateSet, "no solver run reached the residual tolerance");

  Solution ground = *best;
  ground.classification = SolutionKind::GroundState;
  const bool below = ground.energy <= pass->energy + tol;
  GroundStateResult out{std::move(ground), std::move(local), std::move(pass), std::move(starts), below};
  return out;
}

namespace {

// Gaps between neighbouring b are far below the certification tolerance, so a
// minimizer is tightened further before it is compared.
void polish(const ProblemParams& p, Solution& s, const SolverOptions& opt) {
  if (s.origin != SolutionKind::LocalMin || !(opt.continuation_tol < s.residual)) return;
  const double beta = eta_beta(p.lambda(), p.q(), p.Q().norm(), p.f().norm()).beta;
  try {
    Solution tight = local_min(p, beta, opt.continuation_tol, opt, &s.u);
    if (tight.energy <= s.energy + 1e-12 * std::abs(s.energy)) {
      tight.classification = s.classification;
      tight.iterations += s.iterations;
      s = std::move(tight);
    }
  } catch (const Error&) {
  }
}

}  // namespace

ContinuationRecord continuation_b(const ProblemParams& p, const std::vector<double>& b_seq, double tol,
                                  const SolverOptions& opt) {
  require(!b_seq.empty(), "continuation needs at least one b");
  for (std::size_t k = 0; k < b_seq.size(); ++k) {
    require(b_seq[k] > 0.0, "continuation b values must be positive");
    if (k > 0) require(b_seq[k] < b_seq[k - 1], "continuation b values must be strictly decreasing");
  }

  ContinuationRecord rec;
  std::optional<Solution> prev;
  std::optional<Solution> prev_pass;
  for (double b : b_seq) {
    const ProblemParams pb = p.with_b(b);
    try {
      GroundStateResult gs = ground_state(pb, tol, opt, prev ? &*prev : nullptr, prev_pass ? &*prev_pass : nullptr);
      polish(pb, gs.ground, opt);
      if (prev) rec.successive_h1_gaps.push_back(h1_norm(gs.ground.u - prev->u, p.a()));
      rec.b_values.push_back(b);
      prev = gs.ground;
      prev_pass = gs.pass;
      rec.solutions.push_back(std::move(gs.ground));
    } catch (const Error& e) {
      rec.failure_kind = e.kind();
      rec.failure = e.what();
      rec.failed_b = b;
      break;
    }
  }
  if (prev) rec.limit_residual_b0 = residual_norm(p.with_b(0.0), prev->u);
  return rec;
}

}  // namespace kirchhoff
