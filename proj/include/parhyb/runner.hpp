#pragma once

#include <iosfwd>
#include <variant>

#include "parhyb/config.hpp"

namespace parhyb {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid_params = 2;
inline constexpr int max_iter = 3;
inline constexpr int numerical_failure = 4;
inline constexpr int determinism_violation = 5;
}  // namespace exit_code

Problem build_problem(const RunConfig& cfg);
Vector effective_x0(const RunConfig& cfg, const Problem& problem);
SolverOptions make_solver_options(const RunConfig& cfg);

using MethodParams = std::variant<ParamsA, ParamsB, MannParams>;
MethodParams build_method_params(const RunConfig& cfg, const Problem& problem);

std::vector<std::string> validate_config(const RunConfig& cfg,
                                         const Problem& problem,
                                         const MethodParams& params);

// Solves, writes the trace CSV, prints a summary; returns the exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Repeats the solve at each configured worker count (baseline 1 is added
// when missing), verifies the trajectories are identical bit for bit, and
// prints a workers / wall-time / speedup table.
int bench(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct BenchEntry {
  int workers = 0;
  double median_wall_s = 0.0;
  double speedup = 0.0;
};

// The measurement behind bench(); throws on determinism violations.
std::vector<BenchEntry> measure_bench(const RunConfig& cfg);

}  // namespace parhyb
