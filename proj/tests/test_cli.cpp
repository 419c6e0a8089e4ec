#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "parhyb/runner.hpp"
#include "parhyb/trace.hpp"
#include "test_util.hpp"

using namespace parhyb;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string default_run_json(double lambda, const std::string& extra = "") {
  std::ostringstream ss;
  ss << R"({
    "problem": {"id": "poly_ramp", "M": 10, "N": 10, "K": 10},
    "method": "A-quasi",
    "schedules": {
      "lambda": {"formula": "const", "value": )"
     << lambda << R"(},
      "alpha":  {"formula": "const", "value": 0.5},
      "r":      {"formula": "const", "value": 1.0}
    },
    "bounds": {"a": )"
     << lambda << ", \"b\": " << lambda << R"(, "d": 0.5},
    "tol": 1e-7,
    "max_iter": 300,
    "workers": 1)"
     << extra << "\n}";
  return ss.str();
}

}  // namespace

TEST_CASE("schedule formulas") {
  ScheduleSpec c{.formula = "const", .value = 0.3};
  CHECK(schedule_value(c, 0) == 0.3);
  CHECK(schedule_value(c, 999) == 0.3);
  CHECK_FALSE(schedule_decays_to_zero(c));
  c.value = 0.0;
  CHECK(schedule_decays_to_zero(c));

  ScheduleSpec invn{.formula = "inv_n1"};
  CHECK(schedule_value(invn, 0) == 1.0);
  CHECK(schedule_value(invn, 9) == doctest::Approx(0.1));
  CHECK(schedule_decays_to_zero(invn));

  ScheduleSpec ill{.formula = "inv_log_log", .offset = 10.0};
  ill.max = 0.9;
  CHECK(schedule_value(ill, 0) == 0.9);  // raw value 1.199... is clamped
  CHECK(schedule_value(ill, 100) ==
        doctest::Approx(1.0 / std::log(std::log(110.0))));
  CHECK(schedule_decays_to_zero(ill));

  ScheduleSpec lon{.formula = "log_over_n"};
  lon.max = 0.9;
  CHECK(schedule_value(lon, 0) == 0.9);
  CHECK(schedule_value(lon, 2) == doctest::Approx(std::log(2.0) / 2.0));
  CHECK(schedule_value(lon, 100) == doctest::Approx(std::log(100.0) / 100.0));

  ScheduleSpec k{.formula = "one_plus_inv_sq"};
  CHECK(schedule_value(k, 0) == doctest::Approx(2.0));
  CHECK(schedule_value(k, 9) == doctest::Approx(1.01));
  CHECK_FALSE(schedule_decays_to_zero(k));

  ScheduleSpec bad{.formula = "n_squared"};
  CHECK_THROWS_AS(make_schedule(bad), InvalidParams);
  CHECK_THROWS_AS(schedule_value(bad, 1), InvalidParams);
}

TEST_CASE("weight schedules") {
  auto uniform = make_weight_schedule(WeightSpec{.formula = "uniform"}, 3);
  const auto row = uniform(7);
  REQUIRE(row.size() == 4);
  for (double w : row) CHECK(w == doctest::Approx(0.25));

  auto head =
      make_weight_schedule(WeightSpec{.formula = "head", .alpha0 = 0.5}, 2);
  const auto hrow = head(0);
  CHECK(hrow == std::vector<double>{0.5, 0.25, 0.25});

  CHECK_THROWS_AS(make_weight_schedule(WeightSpec{.formula = "geometric"}, 2),
                  InvalidParams);
  CHECK_THROWS_AS(
      make_weight_schedule(WeightSpec{.formula = "head", .alpha0 = 1.0}, 2),
      InvalidParams);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_run_config(default_run_json(0.2));
  CHECK(cfg.problem_id == "poly_ramp");
  CHECK(cfg.method == MethodKind::a_quasi);
  CHECK(cfg.poly_ramp.M == 10);
  CHECK(cfg.lambda.value == 0.2);
  CHECK(cfg.tol == 1e-7);
  CHECK(cfg.max_iter == 300);
  CHECK(cfg.workers == 1);

  CHECK_THROWS_AS(parse_run_config("{ not json"), InvalidParams);
  CHECK_THROWS_AS(parse_run_config(R"({"method": "C"})"), InvalidParams);
  CHECK_THROWS_AS(parse_run_config(R"({"max_iter": 0})"), InvalidParams);
  CHECK_THROWS_AS(parse_run_config(R"({"problem": {"id": "nope"}})"),
                  InvalidParams);
  CHECK_THROWS_AS(
      parse_run_config(
          R"({"schedules": {"alpha": {"formula": "mystery"}}})"),
      InvalidParams);
}

TEST_CASE("trace csv round trip is exact") {
  Trace trace;
  TraceRow r0;
  r0.n = 0;
  r0.x_norm = 1.0;
  trace.rows.push_back(r0);
  TraceRow r1;
  r1.n = 1;
  r1.x_norm = 1.0 / 3.0;
  r1.step_residual = 2.0 / 7.0;
  r1.eps_n = 1e-300;
  r1.t_vi_phase_s = 0.1234567890123456789;
  r1.t_fp_phase_s = 3.0e-9;
  r1.t_ep_phase_s = 0.0;
  r1.t_proj_s = 5.5511151231257827e-17;
  r1.n_halfspaces = 2;
  trace.rows.push_back(r1);

  std::stringstream ss;
  trace.write_csv(ss);
  const Trace back = Trace::read_csv(ss);
  CHECK(back == trace);
  CHECK(back.same_trajectory(trace));
}

TEST_CASE("same_trajectory ignores wall times but not values") {
  Trace a;
  TraceRow r;
  r.n = 1;
  r.x_norm = 0.5;
  r.t_vi_phase_s = 1.0;
  a.rows.push_back(r);

  Trace b = a;
  b.rows[0].t_vi_phase_s = 99.0;
  CHECK(a.same_trajectory(b));
  CHECK_FALSE(a == b);

  b.rows[0].x_norm = std::nextafter(0.5, 1.0);
  CHECK_FALSE(a.same_trajectory(b));
}

TEST_CASE("runner exit codes") {
  std::ostringstream out, err;

  SUBCASE("convergence exits 0 and writes the trace") {
    const auto trace_path = temp_file("parhyb_test_trace.csv");
    auto cfg = parse_run_config(default_run_json(0.2));
    cfg.trace_path = trace_path.string();
    CHECK(run(cfg, out, err) == exit_code::ok);
    const auto trace = Trace::read_csv_file(trace_path.string());
    CHECK(trace.rows.size() >= 2);
    CHECK(trace.rows.back().step_residual <= 1e-7);
    CHECK(trace.rows.back().x_norm <= 1e-6);
    for (const auto& row : trace.rows) {
      CHECK(row.t_vi_phase_s >= 0.0);
      CHECK(row.t_fp_phase_s >= 0.0);
      CHECK(row.t_ep_phase_s >= 0.0);
      CHECK(row.t_proj_s >= 0.0);
    }
    std::filesystem::remove(trace_path);
  }

  SUBCASE("inadmissible step size exits 2 and names the bound") {
    auto cfg = parse_run_config(default_run_json(0.3));
    CHECK(run(cfg, out, err) == exit_code::invalid_params);
    CHECK(err.str().find("alpha*c^2/2") != std::string::npos);
  }

  SUBCASE("iteration cap exits 3 with a full trace") {
    const auto trace_path = temp_file("parhyb_test_trace_cap.csv");
    auto cfg = parse_run_config(default_run_json(0.2));
    cfg.tol = 0.0;
    cfg.max_iter = 10;
    cfg.trace_path = trace_path.string();
    CHECK(run(cfg, out, err) == exit_code::max_iter);
    const auto trace = Trace::read_csv_file(trace_path.string());
    CHECK(trace.rows.size() == 11);
    std::filesystem::remove(trace_path);
  }

  SUBCASE("inner-solver breakdown exits 4") {
    auto cfg = parse_run_config(default_run_json(0.2));
    cfg.solver.force_iterative_resolvent = true;
    cfg.solver.inner_max = 1;
    cfg.solver.inner_tol = 1e-15;
    CHECK(run(cfg, out, err) == exit_code::numerical_failure);
  }
}

TEST_CASE("random instances are built from the seed") {
  auto cfg = parse_run_config(default_run_json(0.2));
  cfg.random_instance = true;
  cfg.seed = 42;
  const auto a = build_problem(cfg);
  const auto b = build_problem(cfg);
  const Vector probe = {0.7};
  CHECK(a.mappings[3].eval_power(probe, 1) ==
        b.mappings[3].eval_power(probe, 1));

  cfg.seed = 43;
  const auto c = build_problem(cfg);
  CHECK(a.mappings[3].eval_power(probe, 1) !=
        c.mappings[3].eval_power(probe, 1));

  std::ostringstream out, err;
  CHECK(run(cfg, out, err) == exit_code::ok);
}

TEST_CASE("driver B asymptotic does not stop at the initial plateau") {
  // eps_0 = (k_1 - 1)(omega + 1)^2 = 1 leaves the first constraints slack,
  // so the iterate sits still at first; that must not count as convergence
  auto cfg = parse_run_config(default_run_json(0.2));
  cfg.method = MethodKind::b_asymptotic;
  cfg.k = ScheduleSpec{"one_plus_inv_sq"};
  cfg.omega = 1.0;
  cfg.weight_floor = 1e-6;
  cfg.tol = 1e-4;
  cfg.max_iter = 50;

  const auto problem = build_problem(cfg);
  const auto params = build_method_params(cfg, problem);
  CHECK(validate_config(cfg, problem, params).empty());

  WorkerPool pool(1);
  const auto res = solve(problem, std::get<ParamsB>(params), {1.0},
                         make_solver_options(cfg), pool);
  CHECK_FALSE(res.converged);  // still far from the solution at n = 50
  CHECK(res.trace.rows.back().x_norm < 0.5);  // but it did move off 1.0
}

TEST_CASE("bench on a single worker reports unit speedup") {
  auto cfg = parse_run_config(default_run_json(0.2));
  cfg.bench.workers = {1};
  cfg.bench.repetitions = 3;
  cfg.max_iter = 5;
  cfg.tol = 0.0;
  const auto entries = measure_bench(cfg);
  REQUIRE(entries.size() == 1);
  CHECK(entries[0].workers == 1);
  CHECK(entries[0].speedup == doctest::Approx(1.0));
}

TEST_CASE("bench verifies trajectories across worker counts") {
  auto cfg = parse_run_config(default_run_json(0.2));
  cfg.bench.workers = {4, 2};  // baseline 1 gets prepended
  cfg.bench.repetitions = 2;
  cfg.max_iter = 8;
  cfg.tol = 0.0;
  const auto entries = measure_bench(cfg);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].workers == 1);
  // overhead-dominated small problem: speedups are reported, not asserted

  std::ostringstream out, err;
  CHECK(bench(cfg, out, err) == exit_code::ok);
  CHECK(out.str().find("speedup") != std::string::npos);
}

TEST_CASE("cli binary end to end") {
#ifdef PARHYB_CLI_PATH
  const auto cfg_path = temp_file("parhyb_cli_cfg.json");
  const auto trace_path = temp_file("parhyb_cli_trace.csv");
  {
    std::ofstream f(cfg_path);
    f << default_run_json(0.2);
  }

  auto run_cli = [&](const std::string& args) {
    const std::string cmd = std::string(PARHYB_CLI_PATH) + " " + args +
                            " > /dev/null 2> /dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };

  CHECK(run_cli("--config " + cfg_path.string() + " --trace " +
                trace_path.string() + " --quiet") == 0);
  const auto trace = Trace::read_csv_file(trace_path.string());
  CHECK(trace.rows.back().step_residual <= 1e-7);

  CHECK(run_cli("--config " + cfg_path.string() + " --max-iter 3") == 3);
  CHECK(run_cli("--config /nonexistent.json") == 2);

  // environment override of the worker count still solves cleanly
  {
    const std::string cmd = "PARHYB_WORKERS=2 " + std::string(PARHYB_CLI_PATH) +
                            " --config " + cfg_path.string() +
                            " --quiet > /dev/null 2> /dev/null";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    const std::string bad = "PARHYB_WORKERS=zero " +
                            std::string(PARHYB_CLI_PATH) + " --config " +
                            cfg_path.string() + " > /dev/null 2> /dev/null";
    CHECK(WEXITSTATUS(std::system(bad.c_str())) == 2);
  }

  {
    std::ofstream f(cfg_path);
    f << default_run_json(0.3);  // violates the step bound
  }
  CHECK(run_cli("--config " + cfg_path.string()) == 2);

  std::filesystem::remove(cfg_path);
  std::filesystem::remove(trace_path);
#endif
}
