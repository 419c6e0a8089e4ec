#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "parhyb/core.hpp"
#include "parhyb/geometry.hpp"
#include "parhyb/parallel.hpp"
#include "parhyb/resolvent.hpp"
#include "parhyb/trace.hpp"

namespace parhyb {

using Schedule = std::function<double(int)>;
using WeightSchedule = std::function<std::vector<double>(int)>;

// asymptotic: powers S^n with k_n >= 1 and eps_n = (k_n - 1)(omega+||x_n||)^2.
// quasi: S applied once per step, eps_n = 0.
enum class Variant { asymptotic, quasi };

struct ParamsA {
  Schedule lambda_schedule;
  Schedule alpha_schedule;
  Schedule r_schedule;
  double a = 0.0, b = 0.0, d = 0.0;
  double alpha_cap = 1.0;  // declared sup of alpha_n; must be < 1
  std::optional<double> omega;
  Variant variant = Variant::quasi;
};

struct ParamsB {
  WeightSchedule weight_schedule;  // row of N+1 weights summing to 1
  Schedule lambda_schedule;
  Schedule r_schedule;
  double a = 0.0, b = 0.0, d = 0.0;
  double weight_floor = 0.0;  // declared inf of w0*wj over j >= 1; must be > 0
  std::optional<double> omega;
  Variant variant = Variant::quasi;
};

struct MannParams {
  Schedule lambda_schedule;
  Schedule alpha_schedule;
  double a = 0.0, b = 0.0;
  bool alpha_decays_to_zero = false;  // declared lim alpha_n = 0
};

struct SolverOptions {
  double tol = 1e-7;
  int max_iter = 1000;
  double proj_tol = 1e-12;
  int proj_max_inner = 10000;
  double inner_tol = 1e-10;
  int inner_max = 100000;
  bool force_iterative_resolvent = false;
  bool force_dykstra_projection = false;
  std::size_t max_halfspaces = std::size_t{1} << 20;
  double membership_tol = 1e-8;
  bool quiet = false;
};

struct PhaseTimes {
  double vi = 0.0, fp = 0.0, ep = 0.0, proj = 0.0;
};

struct SolverState {
  int n = 0;
  Vector x0;
  Vector x;
  NestedSet nested;
  Vector ybar, zbar, ubar;
  double eps_n = 0.0;
  bool converged = false;
  PhaseTimes last_times;
};

SolverState make_state(const Problem& problem, const Vector& x0,
                       const SolverOptions& opts);

// One full iteration. The three fan-out phases run on the pool; the argmax
// reductions run on the caller thread over index-ordered results.
void step_a(const Problem& problem, const ParamsA& params, SolverState& state,
            const SolverOptions& opts, WorkerPool& pool);
void step_b(const Problem& problem, const ParamsB& params, SolverState& state,
            const SolverOptions& opts, WorkerPool& pool);
void step_mann(const Problem& problem, const MannParams& params,
               SolverState& state, const SolverOptions& opts,
               WorkerPool& pool);

enum class StopReason { converged, max_iter };

struct SolveResult {
  SolverState state;
  Trace trace;
  StopReason reason = StopReason::max_iter;
  bool converged = false;
  int iterations = 0;
};

// Every violated constraint, human-readable; empty means admissible.
// Schedules are sampled over [0, horizon).
std::vector<std::string> validate_params(const Problem& problem,
                                         const ParamsA& params,
                                         int horizon = 1000);
std::vector<std::string> validate_params(const Problem& problem,
                                         const ParamsB& params,
                                         int horizon = 1000);
std::vector<std::string> validate_params(const Problem& problem,
                                         const MannParams& params,
                                         int horizon = 1000);

SolveResult solve(const Problem& problem, const ParamsA& params,
                  const Vector& x0, const SolverOptions& opts,
                  WorkerPool& pool);
SolveResult solve(const Problem& problem, const ParamsB& params,
                  const Vector& x0, const SolverOptions& opts,
                  WorkerPool& pool);
SolveResult solve(const Problem& problem, const MannParams& params,
                  const Vector& x0, const SolverOptions& opts,
                  WorkerPool& pool);

}  // namespace parhyb
