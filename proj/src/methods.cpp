#include "parhyb/methods.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace parhyb {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double square(double v) { return v * v; }

void check_schedule_value(const char* name, double v, double lo, double hi,
                          int n) {
  if (!(v >= lo && v <= hi)) {
    std::ostringstream msg;
    msg << name << " = " << v << " at n = " << n << " outside [" << lo << ", "
        << hi << "]";
    throw InvalidParams(msg.str());
  }
}

// Phase 1 of every driver: y_i = P_C(x - lambda * A_i x), then the farthest
// result from x. With no operators the phase is inert and ybar = x.
Vector vi_phase(const Problem& problem, double lambda, const Vector& x,
                WorkerPool& pool) {
  if (problem.operators.empty()) return x;
  auto ys = par_map(pool, problem.operators.size(), [&](std::size_t i) {
    Vector g = problem.operators[i].eval(x);
    require_same_dim(g, x, "vi phase");
    return problem.feasible.project(add_scaled(x, -lambda, g));
  });
  for (const auto& y : ys) require_finite(y, "vi phase");
  return argmax_distance(ys, x).second;
}

int power_for(Variant variant, int n) {
  return variant == Variant::quasi ? 1 : std::max(n, 1);
}

double k_for(const Problem& problem, Variant variant, int power) {
  if (variant == Variant::quasi) return 1.0;
  double k = 1.0;
  for (const auto& m : problem.mappings) k = std::max(k, m.k(power));
  return k;
}

double eps_for(const ParamsA& params, double k_n, const Vector& x) {
  if (params.variant == Variant::quasi) return 0.0;
  if (!params.omega) {
    throw InvalidParams("asymptotic variant needs omega declared");
  }
  return (k_n - 1.0) * square(*params.omega + norm(x));
}

void project_next(SolverState& state, const SolverOptions& opts,
                  const Problem& problem) {
  Vector x_next =
      project_nested(state.x0, state.nested, opts.proj_tol,
                     opts.proj_max_inner, opts.force_dykstra_projection);
  require_finite(x_next, "projection");
  if (!problem.feasible.contains(x_next, opts.membership_tol)) {
    throw NumericalFailure(
        "iterate left the feasible set beyond membership tolerance");
  }
  state.x = std::move(x_next);
}

void validate_common(const Problem& problem, double a, double b,
                     std::vector<std::string>& out) {
  if (!(a > 0.0)) out.push_back("lower step bound a must be positive");
  if (!(a <= b)) out.push_back("step bounds must satisfy a <= b");
  for (const auto& op : problem.operators) {
    if (!(op.ism_modulus > 0.0)) {
      out.push_back("every operator needs a positive ism modulus");
      break;
    }
  }
  if (!problem.operators.empty()) {
    // c = 1 here: the ambient space is R^d with the standard inner product.
    const double bound = problem.min_ism_modulus() * 1.0 / 2.0;
    if (!(b < bound)) {
      std::ostringstream msg;
      msg << "step bounds must satisfy 0 < a <= b < alpha*c^2/2 = " << bound
          << " (got b = " << b << ")";
      out.push_back(msg.str());
    }
  }
}

template <typename Fn>
void sample_schedule(const char* name, const Fn& schedule, int horizon,
                     double lo, double hi, std::vector<std::string>& out) {
  if (!schedule) {
    out.push_back(std::string(name) + " schedule is missing");
    return;
  }
  for (int n = 0; n < horizon; ++n) {
    const double v = schedule(n);
    if (!(v >= lo && v <= hi) || !std::isfinite(v)) {
      std::ostringstream msg;
      msg << name << " = " << v << " at n = " << n << " outside [" << lo
          << ", " << hi << "]";
      out.push_back(msg.str());
      return;
    }
  }
}

void validate_omega(const Problem& problem, const std::optional<double>& omega,
                    Variant variant, std::vector<std::string>& out) {
  if (variant != Variant::asymptotic) return;
  if (!omega) {
    out.push_back("asymptotic variant requires omega (solution-set bound)");
    return;
  }
  if (!(*omega > 0.0)) {
    out.push_back("omega must be positive");
    return;
  }
  if (problem.reference_solution &&
      norm(*problem.reference_solution) > *omega) {
    out.push_back("reference solution lies outside the declared omega ball");
  }
}

void validate_k_sequences(const Problem& problem, Variant variant, int horizon,
                          std::vector<std::string>& out) {
  if (variant != Variant::asymptotic) return;
  for (const auto& m : problem.mappings) {
    for (int n = 1; n <= horizon; ++n) {
      const double k = m.k(n);
      if (!(k >= 1.0) || !std::isfinite(k)) {
        std::ostringstream msg;
        msg << "k_sequence value " << k << " at n = " << n << " is below 1";
        out.push_back(msg.str());
        return;
      }
    }
  }
}

}  // namespace

SolverState make_state(const Problem& problem, const Vector& x0,
                       const SolverOptions& opts) {
  if (x0.size() != static_cast<std::size_t>(problem.dimension)) {
    throw DimensionMismatch("start point dimension " +
                            std::to_string(x0.size()) + ", problem is " +
                            std::to_string(problem.dimension));
  }
  if (!problem.feasible.contains(x0, opts.membership_tol)) {
    throw InvalidParams("start point is not in the feasible set");
  }
  SolverState state;
  state.x0 = x0;
  state.x = x0;
  state.nested.dimension = problem.dimension;
  state.nested.base = problem.feasible;
  state.nested.max_halfspaces = opts.max_halfspaces;
  return state;
}

void step_a(const Problem& problem, const ParamsA& params, SolverState& state,
            const SolverOptions& opts, WorkerPool& pool) {
  const int n = state.n;
  const double lambda = params.lambda_schedule(n);
  const double alpha = params.alpha_schedule(n);
  const double r = params.r_schedule(n);
  check_schedule_value("lambda_n", lambda, params.a, params.b, n);
  check_schedule_value("alpha_n", alpha, 0.0,
                       std::min(1.0, params.alpha_cap), n);
  check_schedule_value("r_n", r, params.d,
                       std::numeric_limits<double>::infinity(), n);

  PhaseTimes times;
  const Vector x = state.x;

  auto t0 = Clock::now();
  Vector ybar = vi_phase(problem, lambda, x, pool);
  times.vi = seconds_since(t0);

  t0 = Clock::now();
  const int power = power_for(params.variant, n);
  Vector zbar = ybar;
  if (!problem.mappings.empty()) {
    auto zs = par_map(pool, problem.mappings.size(), [&](std::size_t j) {
      Vector sy = problem.mappings[j].eval_power(ybar, power);
      require_same_dim(sy, x, "fp phase");
      Vector z(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        z[i] = alpha * x[i] + (1.0 - alpha) * sy[i];
      }
      return z;
    });
    for (const auto& z : zs) require_finite(z, "fp phase");
    zbar = argmax_distance(zs, x).second;
  }
  const double eps = eps_for(params, k_for(problem, params.variant, power), x);
  times.fp = seconds_since(t0);

  t0 = Clock::now();
  Vector ubar = zbar;
  if (!problem.bifunctions.empty()) {
    ResolventConfig rc;
    rc.r = r;
    rc.inner_tol = opts.inner_tol;
    rc.inner_max = opts.inner_max;
    rc.force_iterative = opts.force_iterative_resolvent;
    auto us = par_map(pool, problem.bifunctions.size(), [&](std::size_t k) {
      return resolve(problem.bifunctions[k], problem.feasible, zbar, rc);
    });
    for (const auto& u : us) require_finite(u, "ep phase");
    ubar = argmax_distance(us, x).second;
  }
  times.ep = seconds_since(t0);

  t0 = Clock::now();
  state.nested.append(phi_comparison_to_halfspace(ubar, zbar, 0.0));
  state.nested.append(phi_comparison_to_halfspace(zbar, x, eps));
  project_next(state, opts, problem);
  times.proj = seconds_since(t0);

  state.ybar = std::move(ybar);
  state.zbar = std::move(zbar);
  state.ubar = std::move(ubar);
  state.eps_n = eps;
  state.n = n + 1;
  state.last_times = times;
}

void step_b(const Problem& problem, const ParamsB& params, SolverState& state,
            const SolverOptions& opts, WorkerPool& pool) {
  const int n = state.n;
  const double lambda = params.lambda_schedule(n);
  const double r = params.r_schedule(n);
  check_schedule_value("lambda_n", lambda, params.a, params.b, n);
  check_schedule_value("r_n", r, params.d,
                       std::numeric_limits<double>::infinity(), n);

  const std::size_t N = problem.mappings.size();
  const std::vector<double> weights = params.weight_schedule(n);
  if (weights.size() != N + 1) {
    throw InvalidParams("weight row size " + std::to_string(weights.size()) +
                        ", expected " + std::to_string(N + 1));
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0 && w <= 1.0)) {
      throw InvalidParams("weights must lie in [0, 1]");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InvalidParams("weights must sum to 1 (got " + std::to_string(sum) +
                        ")");
  }
  for (std::size_t j = 1; j < weights.size(); ++j) {
    if (weights[0] * weights[j] < params.weight_floor) {
      throw InvalidParams(
          "weight product w0*wj fell below the declared floor");
    }
  }

  PhaseTimes times;
  const Vector x = state.x;

  auto t0 = Clock::now();
  Vector ybar = vi_phase(problem, lambda, x, pool);
  times.vi = seconds_since(t0);

  t0 = Clock::now();
  const int power = power_for(params.variant, n);
  Vector z = ybar;
  if (N > 0) {
    auto sys = par_map(pool, N, [&](std::size_t j) {
      Vector sy = problem.mappings[j].eval_power(ybar, power);
      require_same_dim(sy, x, "fp phase");
      return sy;
    });
    z = scale(weights[0], x);
    for (std::size_t j = 0; j < N; ++j) {
      z = add_scaled(z, weights[j + 1], sys[j]);
    }
    require_finite(z, "fp phase");
  }
  double eps = 0.0;
  if (params.variant == Variant::asymptotic) {
    if (!params.omega) {
      throw InvalidParams("asymptotic variant needs omega declared");
    }
    const double k_n = k_for(problem, params.variant, power);
    eps = (k_n - 1.0) * square(*params.omega + norm(x));
  }
  times.fp = seconds_since(t0);

  t0 = Clock::now();
  Vector ubar = z;
  if (!problem.bifunctions.empty()) {
    ResolventConfig rc;
    rc.r = r;
    rc.inner_tol = opts.inner_tol;
    rc.inner_max = opts.inner_max;
    rc.force_iterative = opts.force_iterative_resolvent;
    auto us = par_map(pool, problem.bifunctions.size(), [&](std::size_t k) {
      return resolve(problem.bifunctions[k], problem.feasible, z, rc);
    });
    for (const auto& u : us) require_finite(u, "ep phase");
    ubar = argmax_distance(us, x).second;
  }
  times.ep = seconds_since(t0);

  t0 = Clock::now();
  state.nested.append(phi_comparison_to_halfspace(ubar, x, eps));
  project_next(state, opts, problem);
  times.proj = seconds_since(t0);

  state.ybar = std::move(ybar);
  state.zbar = std::move(z);
  state.ubar = std::move(ubar);
  state.eps_n = eps;
  state.n = n + 1;
  state.last_times = times;
}

void step_mann(const Problem& problem, const MannParams& params,
               SolverState& state, [[maybe_unused]] const SolverOptions& opts,
               WorkerPool& pool) {
  const int n = state.n;
  const double lambda = params.lambda_schedule(n);
  const double alpha = params.alpha_schedule(n);
  check_schedule_value("lambda_n", lambda, params.a, params.b, n);
  check_schedule_value("alpha_n", alpha, 0.0, 1.0, n);

  PhaseTimes times;
  const Vector x = state.x;

  auto t0 = Clock::now();
  Vector ybar = vi_phase(problem, lambda, x, pool);
  times.vi = seconds_since(t0);

  t0 = Clock::now();
  Vector zbar = ybar;
  if (!problem.mappings.empty()) {
    auto zs = par_map(pool, problem.mappings.size(), [&](std::size_t j) {
      Vector sy = problem.mappings[j].eval_power(ybar, 1);
      require_same_dim(sy, x, "fp phase");
      Vector z(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        z[i] = alpha * x[i] + (1.0 - alpha) * sy[i];
      }
      return z;
    });
    for (const auto& z : zs) require_finite(z, "fp phase");
    zbar = argmax_distance(zs, x).second;
  }
  times.fp = seconds_since(t0);

  t0 = Clock::now();
  Vector x_next = problem.feasible.project(zbar);
  require_finite(x_next, "projection");
  times.proj = seconds_since(t0);

  state.ybar = std::move(ybar);
  state.zbar = std::move(zbar);
  state.ubar = state.zbar;
  state.eps_n = 0.0;
  state.x = std::move(x_next);
  state.n = n + 1;
  state.last_times = times;
}

std::vector<std::string> validate_params(const Problem& problem,
                                         const ParamsA& params, int horizon) {
  std::vector<std::string> out;
  validate_common(problem, params.a, params.b, out);
  if (!(params.d > 0.0)) out.push_back("resolvent lower bound d must be > 0");
  if (!(params.alpha_cap < 1.0)) {
    out.push_back("alpha cap must be declared < 1 (limsup alpha_n < 1)");
  }
  sample_schedule("lambda_n", params.lambda_schedule, horizon, params.a,
                  params.b, out);
  sample_schedule("alpha_n", params.alpha_schedule, horizon, 0.0,
                  std::min(1.0, params.alpha_cap), out);
  sample_schedule("r_n", params.r_schedule, horizon, params.d,
                  std::numeric_limits<double>::infinity(), out);
  validate_omega(problem, params.omega, params.variant, out);
  validate_k_sequences(problem, params.variant, std::min(horizon, 100), out);
  return out;
}

std::vector<std::string> validate_params(const Problem& problem,
                                         const ParamsB& params, int horizon) {
  std::vector<std::string> out;
  validate_common(problem, params.a, params.b, out);
  if (!(params.d > 0.0)) out.push_back("resolvent lower bound d must be > 0");
  if (!(params.weight_floor > 0.0)) {
    out.push_back(
        "weight floor must be declared > 0 (liminf w0*wj > 0)");
  }
  sample_schedule("lambda_n", params.lambda_schedule, horizon, params.a,
                  params.b, out);
  sample_schedule("r_n", params.r_schedule, horizon, params.d,
                  std::numeric_limits<double>::infinity(), out);
  if (!params.weight_schedule) {
    out.push_back("weight schedule is missing");
  } else {
    const std::size_t N = problem.mappings.size();
    for (int n = 0; n < horizon; ++n) {
      const auto w = params.weight_schedule(n);
      if (w.size() != N + 1) {
        out.push_back("weight row at n = " + std::to_string(n) + " has " +
                      std::to_string(w.size()) + " entries, expected " +
                      std::to_string(N + 1));
        break;
      }
      double sum = 0.0;
      bool range_ok = true;
      for (double v : w) {
        range_ok = range_ok && v >= 0.0 && v <= 1.0;
        sum += v;
      }
      if (!range_ok) {
        out.push_back("weights at n = " + std::to_string(n) +
                      " leave [0, 1]");
        break;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        out.push_back("weights must sum to 1 (n = " + std::to_string(n) +
                      ", sum = " + std::to_string(sum) + ")");
        break;
      }
      bool floor_ok = true;
      for (std::size_t j = 1; j < w.size(); ++j) {
        floor_ok = floor_ok && w[0] * w[j] >= params.weight_floor;
      }
      if (!floor_ok) {
        out.push_back("weight product w0*wj at n = " + std::to_string(n) +
                      " is below the declared floor");
        break;
      }
    }
  }
  validate_omega(problem, params.omega, params.variant, out);
  validate_k_sequences(problem, params.variant, std::min(horizon, 100), out);
  return out;
}

std::vector<std::string> validate_params(const Problem& problem,
                                         const MannParams& params,
                                         int horizon) {
  std::vector<std::string> out;
  validate_common(problem, params.a, params.b, out);
  if (!params.alpha_decays_to_zero) {
    out.push_back("alpha schedule must be declared to decay to 0");
  }
  sample_schedule("lambda_n", params.lambda_schedule, horizon, params.a,
                  params.b, out);
  sample_schedule("alpha_n", params.alpha_schedule, horizon, 0.0, 1.0, out);
  return out;
}

namespace {

template <typename Params, typename StepFn>
SolveResult solve_impl(const Problem& problem, const Params& params,
                       const Vector& x0, const SolverOptions& opts,
                       WorkerPool& pool, StepFn step) {
  {
    auto violations =
        validate_params(problem, params, std::min(opts.max_iter + 1, 1000));
    if (!violations.empty()) {
      std::string msg = "invalid parameters:";
      for (const auto& v : violations) msg += "\n  - " + v;
      throw InvalidParams(msg);
    }
  }
  if (opts.max_iter < 1) throw InvalidParams("max_iter must be >= 1");

  SolveResult result;
  result.state = make_state(problem, x0, opts);
  SolverState& state = result.state;

  TraceRow row0;
  row0.n = 0;
  row0.x_norm = norm(x0);
  result.trace.rows.push_back(row0);

  for (int it = 0; it < opts.max_iter; ++it) {
    const Vector x_prev = state.x;
    step(problem, params, state, opts, pool);
    result.iterations = it + 1;

    const double resid = distance(state.x, x_prev);
    TraceRow row;
    row.n = state.n;
    row.x_norm = norm(state.x);
    row.step_residual = resid;
    row.eps_n = state.eps_n;
    row.t_vi_phase_s = state.last_times.vi;
    row.t_fp_phase_s = state.last_times.fp;
    row.t_ep_phase_s = state.last_times.ep;
    row.t_proj_s = state.last_times.proj;
    row.n_halfspaces = state.nested.halfspaces.size();
    result.trace.rows.push_back(row);

    // The step residual alone can vanish while eps_n still masks progress
    // (the new constraint may not bind yet); require the iterate to agree
    // with the last combined output as well before declaring convergence.
    const double gap =
        state.ubar.empty() ? 0.0 : distance(state.x, state.ubar);
    if (std::max(resid, gap) <= opts.tol) {
      state.converged = true;
      result.converged = true;
      result.reason = StopReason::converged;
      return result;
    }
  }
  result.reason = StopReason::max_iter;
  return result;
}

}  // namespace

SolveResult solve(const Problem& problem, const ParamsA& params,
                  const Vector& x0, const SolverOptions& opts,
                  WorkerPool& pool) {
  return solve_impl(problem, params, x0, opts, pool,
                    [](const Problem& p, const ParamsA& pr, SolverState& s,
                       const SolverOptions& o, WorkerPool& w) {
                      step_a(p, pr, s, o, w);
                    });
}

SolveResult solve(const Problem& problem, const ParamsB& params,
                  const Vector& x0, const SolverOptions& opts,
                  WorkerPool& pool) {
  return solve_impl(problem, params, x0, opts, pool,
                    [](const Problem& p, const ParamsB& pr, SolverState& s,
                       const SolverOptions& o, WorkerPool& w) {
                      step_b(p, pr, s, o, w);
                    });
}

SolveResult solve(const Problem& problem, const MannParams& params,
                  const Vector& x0, const SolverOptions& opts,
                  WorkerPool& pool) {
  if (!opts.quiet) {
    std::cerr << "note: the Mann driver converges only when the common "
                 "solution set has nonempty interior; this is not checked\n";
  }
  return solve_impl(problem, params, x0, opts, pool,
                    [](const Problem& p, const MannParams& pr, SolverState& s,
                       const SolverOptions& o, WorkerPool& w) {
                      step_mann(p, pr, s, o, w);
                    });
}

}  // namespace parhyb
