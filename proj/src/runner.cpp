#include "parhyb/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <iostream>
#include <sstream>

namespace parhyb {

namespace {

using Clock = std::chrono::steady_clock;

bool is_asymptotic(MethodKind kind) {
  return kind == MethodKind::a_asymptotic || kind == MethodKind::b_asymptotic;
}

ScheduleSpec clamped_alpha(const RunConfig& cfg, double cap) {
  ScheduleSpec spec = cfg.alpha;
  if (!spec.min) spec.min = 0.0;
  if (!spec.max || *spec.max > cap) spec.max = cap;
  return spec;
}

SolveResult dispatch_solve(const Problem& problem, const MethodParams& params,
                           const Vector& x0, const SolverOptions& opts,
                           WorkerPool& pool) {
  return std::visit(
      [&](const auto& p) { return solve(problem, p, x0, opts, pool); },
      params);
}

bool bits_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() &&
         (a.empty() ||
          std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

std::string residual_summary(const SolveResult& res) {
  std::ostringstream ss;
  const auto& rows = res.trace.rows;
  const double final_norm = rows.empty() ? 0.0 : rows.back().x_norm;
  const double last_step = rows.empty() ? 0.0 : rows.back().step_residual;
  ss << "final ||x|| = " << final_norm << ", last step = " << last_step
     << ", halfspaces = " << res.state.nested.halfspaces.size();
  return ss.str();
}

}  // namespace

Problem build_problem(const RunConfig& cfg) {
  if (cfg.problem_id == "poly_ramp") {
    PolyRampParams p = cfg.poly_ramp;
    if (cfg.random_instance) {
      PolyRampParams sampled =
          random_poly_ramp_params(p.M, p.N, p.K, cfg.seed);
      sampled.eval_cost_ms = p.eval_cost_ms;
      p = sampled;
    }
    Problem problem = build_poly_ramp(p);
    if (is_asymptotic(cfg.method)) {
      const Schedule k = make_schedule(cfg.k);
      for (auto& m : problem.mappings) m.k_sequence = k;
    }
    return problem;
  }
  if (cfg.problem_id == "ball_box") {
    return build_ball_box(cfg.ball_box);
  }
  throw InvalidParams("unknown problem id '" + cfg.problem_id + "'");
}

Vector effective_x0(const RunConfig& cfg, const Problem& problem) {
  if (!cfg.x0.empty()) {
    if (cfg.x0.size() != static_cast<std::size_t>(problem.dimension)) {
      throw DimensionMismatch("config x0 dimension " +
                              std::to_string(cfg.x0.size()) +
                              ", problem is " +
                              std::to_string(problem.dimension));
    }
    return cfg.x0;
  }
  if (cfg.problem_id == "poly_ramp") return Vector{1.0};
  // ball_box: start at the far box corner
  Vector x0 = cfg.ball_box.box_hi;
  if (x0.empty()) x0.assign(cfg.ball_box.dimension, 1.0);
  return x0;
}

SolverOptions make_solver_options(const RunConfig& cfg) {
  SolverOptions opts = cfg.solver;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter;
  opts.quiet = cfg.quiet;
  return opts;
}

MethodParams build_method_params(const RunConfig& cfg,
                                 const Problem& problem) {
  switch (cfg.method) {
    case MethodKind::a_asymptotic:
    case MethodKind::a_quasi: {
      ParamsA p;
      p.lambda_schedule = make_schedule(cfg.lambda);
      p.alpha_schedule = make_schedule(clamped_alpha(cfg, cfg.alpha_cap));
      p.r_schedule = make_schedule(cfg.r);
      p.a = cfg.a;
      p.b = cfg.b;
      p.d = cfg.d;
      p.alpha_cap = cfg.alpha_cap;
      p.omega = cfg.omega;
      p.variant = cfg.method == MethodKind::a_asymptotic
                      ? Variant::asymptotic
                      : Variant::quasi;
      return p;
    }
    case MethodKind::b_asymptotic:
    case MethodKind::b_quasi: {
      ParamsB p;
      p.weight_schedule = make_weight_schedule(
          cfg.weights, static_cast<int>(problem.mappings.size()));
      p.lambda_schedule = make_schedule(cfg.lambda);
      p.r_schedule = make_schedule(cfg.r);
      p.a = cfg.a;
      p.b = cfg.b;
      p.d = cfg.d;
      p.weight_floor = cfg.weight_floor;
      p.omega = cfg.omega;
      p.variant = cfg.method == MethodKind::b_asymptotic
                      ? Variant::asymptotic
                      : Variant::quasi;
      return p;
    }
    case MethodKind::mann: {
      MannParams p;
      p.lambda_schedule = make_schedule(cfg.lambda);
      ScheduleSpec alpha = cfg.alpha;
      if (!alpha.min) alpha.min = 0.0;
      p.alpha_schedule = make_schedule(alpha);
      p.a = cfg.a;
      p.b = cfg.b;
      p.alpha_decays_to_zero = schedule_decays_to_zero(alpha);
      return p;
    }
  }
  throw InvalidParams("unhandled method kind");
}

std::vector<std::string> validate_config(const RunConfig& cfg,
                                         const Problem& problem,
                                         const MethodParams& params) {
  const int horizon =
      std::min(std::max(1000, cfg.max_iter), 1000000);
  return std::visit(
      [&](const auto& p) { return validate_params(problem, p, horizon); },
      params);
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Problem problem = build_problem(cfg);
    const Vector x0 = effective_x0(cfg, problem);
    const SolverOptions opts = make_solver_options(cfg);
    const MethodParams params = build_method_params(cfg, problem);

    const auto violations = validate_config(cfg, problem, params);
    if (!violations.empty()) {
      err << "invalid parameters:\n";
      for (const auto& v : violations) err << "  - " << v << '\n';
      return exit_code::invalid_params;
    }

    WorkerPool pool(cfg.workers);
    const auto t0 = Clock::now();
    SolveResult res = dispatch_solve(problem, params, x0, opts, pool);
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();

    if (!cfg.trace_path.empty()) res.trace.write_csv_file(cfg.trace_path);

    if (!cfg.quiet) {
      out << "method " << method_name(cfg.method) << " on " << cfg.problem_id
          << ": "
          << (res.converged ? "converged in " : "stopped (max_iter) after ")
          << res.iterations << " iterations\n"
          << residual_summary(res) << '\n'
          << "wall time " << wall << " s (workers = " << cfg.workers << ")\n";
      if (!cfg.trace_path.empty()) {
        out << "trace written to " << cfg.trace_path << '\n';
      }
    }
    return res.converged ? exit_code::ok : exit_code::max_iter;
  } catch (const InvalidParams& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::invalid_params;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::numerical_failure;
  }
}

std::vector<BenchEntry> measure_bench(const RunConfig& cfg) {
  const Problem problem = build_problem(cfg);
  const Vector x0 = effective_x0(cfg, problem);
  const SolverOptions opts = make_solver_options(cfg);
  const MethodParams params = build_method_params(cfg, problem);
  {
    const auto violations = validate_config(cfg, problem, params);
    if (!violations.empty()) {
      std::string msg = "invalid parameters:";
      for (const auto& v : violations) msg += "\n  - " + v;
      throw InvalidParams(msg);
    }
  }

  std::vector<int> worker_counts = cfg.bench.workers;
  if (std::find(worker_counts.begin(), worker_counts.end(), 1) ==
      worker_counts.end()) {
    worker_counts.insert(worker_counts.begin(), 1);
  }
  const int reps = std::max(1, cfg.bench.repetitions);

  struct Sample {
    int workers;
    double median;
    Trace trace;
    Vector final_x;
  };
  std::vector<Sample> samples;
  for (int w : worker_counts) {
    WorkerPool pool(w);
    std::vector<double> times;
    Trace first_trace;
    Vector first_x;
    for (int rep = 0; rep < reps; ++rep) {
      const auto t0 = Clock::now();
      SolveResult res = dispatch_solve(problem, params, x0, opts, pool);
      times.push_back(
          std::chrono::duration<double>(Clock::now() - t0).count());
      if (rep == 0) {
        first_trace = std::move(res.trace);
        first_x = std::move(res.state.x);
      } else if (!res.trace.same_trajectory(first_trace) ||
                 !bits_equal(res.state.x, first_x)) {
        throw DeterminismViolation("repeated runs with " + std::to_string(w) +
                                   " workers diverged");
      }
    }
    std::sort(times.begin(), times.end());
    samples.push_back({w, times[times.size() / 2], std::move(first_trace),
                       std::move(first_x)});
  }

  const Sample* baseline = nullptr;
  for (const auto& s : samples) {
    if (s.workers == 1) baseline = &s;
  }
  for (const auto& s : samples) {
    if (!s.trace.same_trajectory(baseline->trace) ||
        !bits_equal(s.final_x, baseline->final_x)) {
      throw DeterminismViolation("trajectory with " +
                                 std::to_string(s.workers) +
                                 " workers differs from sequential");
    }
  }

  std::vector<BenchEntry> entries;
  for (const auto& s : samples) {
    entries.push_back({s.workers, s.median, baseline->median / s.median});
  }
  return entries;
}

int bench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto entries = measure_bench(cfg);
    out << "workers  median_wall_s  speedup\n";
    char line[96];
    for (const auto& e : entries) {
      std::snprintf(line, sizeof(line), "%7d  %13.6f  %7.3f\n", e.workers,
                    e.median_wall_s, e.speedup);
      out << line;
    }
    return exit_code::ok;
  } catch (const InvalidParams& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::invalid_params;
  } catch (const DeterminismViolation& e) {
    err << "determinism violation: " << e.what() << '\n';
    return exit_code::determinism_violation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::numerical_failure;
  }
}

}  // namespace parhyb
