#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parhyb/methods.hpp"
#include "parhyb/problems.hpp"

namespace parhyb {

// Named-formula whitelist; no general expression evaluation.
//   const            : value
//   inv_n1           : 1/(n+1)
//   inv_log_log      : 1/log(log(n+offset))
//   log_over_n       : log(n)/n for n >= 2, 1 before
//   one_plus_inv_sq  : 1 + 1/(n+1)^2
// Values are clamped into [min, max] when those are set.
struct ScheduleSpec {
  std::string formula = "const";
  double value = 0.0;
  double offset = 10.0;
  std::optional<double> min;
  std::optional<double> max;

  static ScheduleSpec constant(double v) {
    ScheduleSpec spec;
    spec.value = v;
    return spec;
  }
};

double schedule_value(const ScheduleSpec& spec, int n);
Schedule make_schedule(const ScheduleSpec& spec);
bool schedule_decays_to_zero(const ScheduleSpec& spec);

// Weight rows for driver B: "uniform" gives all N+1 entries weight
// 1/(N+1); "head" gives alpha0 to the current iterate and splits the rest
// evenly over the N mappings.
struct WeightSpec {
  std::string formula = "uniform";
  double alpha0 = 0.5;
};

WeightSchedule make_weight_schedule(const WeightSpec& spec, int n_mappings);

enum class MethodKind { a_asymptotic, a_quasi, b_asymptotic, b_quasi, mann };

std::string method_name(MethodKind kind);

struct BenchSettings {
  std::vector<int> workers{1, 2};
  int repetitions = 5;
};

struct RunConfig {
  std::string problem_id = "poly_ramp";
  PolyRampParams poly_ramp;
  bool random_instance = false;
  BallBoxParams ball_box;

  MethodKind method = MethodKind::a_quasi;
  ScheduleSpec lambda = ScheduleSpec::constant(0.2);
  ScheduleSpec alpha = ScheduleSpec::constant(0.5);
  ScheduleSpec r = ScheduleSpec::constant(1.0);
  ScheduleSpec k = ScheduleSpec::constant(1.0);
  WeightSpec weights;

  double a = 0.2, b = 0.2, d = 0.5;
  double alpha_cap = 0.9;
  double weight_floor = 1e-12;
  std::optional<double> omega;

  Vector x0;  // empty -> problem default
  double tol = 1e-7;
  int max_iter = 1000;
  int workers = 1;
  std::uint64_t seed = 0;
  std::string trace_path;
  bool quiet = false;

  SolverOptions solver;
  BenchSettings bench;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

}  // namespace parhyb
