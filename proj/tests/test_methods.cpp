#include <doctest.h>

#include <cmath>
#include <cstring>

#include "test_util.hpp"

using namespace parhyb;
using test_util::quasi_params_a;
using test_util::quasi_params_b;
using test_util::tiny_instance;

namespace {

bool bits_equal(const Vector& a, const Vector& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("driver A single step walks the worked values") {
  const auto problem = build_poly_ramp(tiny_instance());
  const auto params = quasi_params_a();
  SolverOptions opts;
  WorkerPool pool(1);

  auto state = make_state(problem, {1.0}, opts);
  step_a(problem, params, state, opts, pool);

  CHECK(state.ybar[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(state.zbar[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(state.ubar[0] == doctest::Approx(0.65).epsilon(1e-12));
  CHECK(std::abs(state.x[0] - 0.775) <= 1e-10);
  CHECK(state.eps_n == 0.0);
  CHECK(state.n == 1);
  CHECK(state.nested.halfspaces.size() == 2);
}

TEST_CASE("driver B single step appends one half-space") {
  const auto problem = build_poly_ramp(tiny_instance());
  const auto params = quasi_params_b({0.5, 0.5});
  SolverOptions opts;
  WorkerPool pool(1);

  auto state = make_state(problem, {1.0}, opts);
  step_b(problem, params, state, opts, pool);

  CHECK(state.zbar[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(state.ubar[0] == doctest::Approx(0.65).epsilon(1e-12));
  // bound (1 + 0.65) / 2
  CHECK(std::abs(state.x[0] - 0.825) <= 1e-10);
  CHECK(state.nested.halfspaces.size() == 1);
}

TEST_CASE("mann step projects the combination straight back onto C") {
  const auto problem = build_poly_ramp(tiny_instance());
  MannParams params;
  params.lambda_schedule = [](int) { return 0.2; };
  params.alpha_schedule = [](int) { return 0.5; };
  params.a = params.b = 0.2;
  params.alpha_decays_to_zero = true;  // declared; single-step test
  SolverOptions opts;
  WorkerPool pool(1);

  auto state = make_state(problem, {1.0}, opts);
  step_mann(problem, params, state, opts, pool);
  CHECK(state.x[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(state.nested.halfspaces.empty());
}

TEST_CASE("mann step is stationary at a solution") {
  BallBoxParams bp;
  bp.dimension = 3;
  const auto problem = build_ball_box(bp);
  MannParams params;
  params.lambda_schedule = [](int) { return 0.2; };
  params.alpha_schedule = [](int n) { return 1.0 / (n + 2); };
  params.a = params.b = 0.2;
  params.alpha_decays_to_zero = true;
  SolverOptions opts;
  WorkerPool pool(1);

  const Vector center(3, 0.5);  // in F, and A(center) = 0
  auto state = make_state(problem, center, opts);
  step_mann(problem, params, state, opts, pool);
  CHECK(bits_equal(state.x, center));
}

TEST_CASE("validate_params flags the step-size bound") {
  const auto problem = build_poly_ramp(tiny_instance());

  auto ok = quasi_params_a(0.2);
  CHECK(validate_params(problem, ok).empty());

  auto bad = quasi_params_a(0.3);  // bound is alpha*c^2/2 = 0.25
  const auto violations = validate_params(problem, bad);
  REQUIRE(!violations.empty());
  bool mentions_bound = false;
  for (const auto& v : violations) {
    mentions_bound = mentions_bound ||
                     v.find("alpha*c^2/2") != std::string::npos;
  }
  CHECK(mentions_bound);
}

TEST_CASE("validate_params catches bad weight rows") {
  const auto problem = build_poly_ramp(tiny_instance());

  {
    ParamsB p = quasi_params_b({0.5, 0.5, 0.1});  // wrong size and sum
    const auto violations = validate_params(problem, p);
    CHECK(!violations.empty());
  }
  {
    ParamsB p = quasi_params_b({0.5, 0.5});
    p.weight_schedule = [](int) { return std::vector<double>{0.6, 0.5}; };
    bool found = false;
    for (const auto& v : validate_params(problem, p)) {
      found = found || v.find("sum to 1") != std::string::npos;
    }
    CHECK(found);
  }
  {
    // degenerate row (1, 0): the fixed-point phase would be inert
    ParamsB p = quasi_params_b({1.0, 0.0});
    p.weight_floor = 1e-6;
    bool found = false;
    for (const auto& v : validate_params(problem, p)) {
      found = found || v.find("floor") != std::string::npos;
    }
    CHECK(found);
  }
}

TEST_CASE("validate_params checks variant requirements") {
  const auto problem = build_poly_ramp(tiny_instance());

  auto p = quasi_params_a();
  p.variant = Variant::asymptotic;  // omega missing
  bool found = false;
  for (const auto& v : validate_params(problem, p)) {
    found = found || v.find("omega") != std::string::npos;
  }
  CHECK(found);

  p.omega = 1.0;
  CHECK(validate_params(problem, p).empty());

  p.alpha_cap = 1.0;
  found = false;
  for (const auto& v : validate_params(problem, p)) {
    found = found || v.find("cap") != std::string::npos;
  }
  CHECK(found);

  MannParams mann;
  mann.lambda_schedule = [](int) { return 0.2; };
  mann.alpha_schedule = [](int) { return 0.5; };
  mann.a = mann.b = 0.2;
  found = false;
  for (const auto& v : validate_params(problem, mann)) {
    found = found || v.find("decay") != std::string::npos;
  }
  CHECK(found);
}

TEST_CASE("solve from the solution converges immediately") {
  const auto problem = build_poly_ramp(tiny_instance());
  SolverOptions opts;
  opts.tol = 1e-7;
  WorkerPool pool(1);
  const auto res = solve(problem, quasi_params_a(), {0.0}, opts, pool);
  CHECK(res.converged);
  CHECK(res.iterations <= 2);
  CHECK(res.state.x[0] == 0.0);
}

TEST_CASE("trace has one row per iteration plus the start row") {
  const auto problem = build_poly_ramp(tiny_instance());
  SolverOptions opts;
  opts.tol = 0.0;  // unreachable
  opts.max_iter = 10;
  WorkerPool pool(1);
  const auto res = solve(problem, quasi_params_a(), {1.0}, opts, pool);
  CHECK_FALSE(res.converged);
  CHECK(res.reason == StopReason::max_iter);
  CHECK(res.iterations == 10);
  CHECK(res.trace.rows.size() == 11);
  CHECK(res.trace.rows.front().n == 0);
  CHECK(res.trace.rows.back().n == 10);
}

TEST_CASE("phi to the start point is nondecreasing for drivers A and B") {
  const auto problem = build_poly_ramp(tiny_instance());
  SolverOptions opts;
  WorkerPool pool(1);
  const Vector x0 = {1.0};

  {
    auto state = make_state(problem, x0, opts);
    const auto params = quasi_params_a();
    double prev = phi(state.x, x0);
    for (int n = 0; n < 30; ++n) {
      step_a(problem, params, state, opts, pool);
      const double cur = phi(state.x, x0);
      CHECK(cur >= prev - 1e-10);
      CHECK(problem.feasible.contains(state.x, 1e-8));
      prev = cur;
    }
  }
  {
    auto state = make_state(problem, x0, opts);
    const auto params = quasi_params_b({0.5, 0.5});
    double prev = phi(state.x, x0);
    for (int n = 0; n < 30; ++n) {
      step_b(problem, params, state, opts, pool);
      const double cur = phi(state.x, x0);
      CHECK(cur >= prev - 1e-10);
      prev = cur;
    }
  }
}

TEST_CASE("the known solution satisfies every accumulated half-space") {
  auto params = tiny_instance();
  params.M = 3;
  params.N = 2;
  params.t = {0.3, 0.6};
  params.s = {1.2, 2.0};
  const auto problem = build_poly_ramp(params);
  const Vector solution = *problem.reference_solution;

  SolverOptions opts;
  WorkerPool pool(1);
  auto state = make_state(problem, {1.0}, opts);
  const auto pa = quasi_params_a();
  for (int n = 0; n < 40; ++n) {
    step_a(problem, pa, state, opts, pool);
    CHECK(state.nested.min_halfspace_slack(solution) >= -1e-10);
  }
}

TEST_CASE("step residuals decay to the tolerance") {
  const auto problem = build_poly_ramp(tiny_instance());
  SolverOptions opts;
  opts.tol = 1e-9;
  opts.max_iter = 200;
  WorkerPool pool(1);
  const auto res = solve(problem, quasi_params_a(), {1.0}, opts, pool);
  REQUIRE(res.converged);
  const auto& rows = res.trace.rows;
  CHECK(rows.back().step_residual <= rows[1].step_residual);
  CHECK(rows.back().step_residual <= opts.tol);
}

TEST_CASE("mann iterates do not move away from solutions") {
  BallBoxParams bp;
  const auto problem = build_ball_box(bp);
  const Vector u = *problem.reference_solution;

  MannParams params;
  params.lambda_schedule = [](int) { return 0.2; };
  params.alpha_schedule = [](int n) { return std::min(0.9, 1.0 / (n + 1)); };
  params.a = params.b = 0.2;
  params.alpha_decays_to_zero = true;

  SolverOptions opts;
  opts.quiet = true;
  WorkerPool pool(1);
  auto state = make_state(problem, Vector(5, 1.0), opts);
  double prev = phi(u, state.x);
  for (int n = 0; n < 50; ++n) {
    step_mann(problem, params, state, opts, pool);
    const double cur = phi(u, state.x);
    CHECK(cur <= prev + 1e-10);
    prev = cur;
  }
}

TEST_CASE("asymptotic variant with a synthetic k sequence still converges") {
  // one mapping with a low threshold so powers actually matter
  auto params = tiny_instance();
  params.t = {0.3};
  params.s = {1.2};
  auto problem = build_poly_ramp(params);
  for (auto& m : problem.mappings) {
    m.k_sequence = [](int n) { return 1.0 + 1.0 / ((n + 1.0) * (n + 1.0)); };
  }
  for (int n = 1; n < 100; ++n) {
    CHECK(problem.mappings[0].k(n) >= problem.mappings[0].k(n + 1));
    CHECK(problem.mappings[0].k(n) >= 1.0);
  }

  auto pa = quasi_params_a();
  pa.variant = Variant::asymptotic;
  pa.omega = 1.0;

  SolverOptions opts;
  opts.tol = 1e-9;
  opts.max_iter = 300;
  WorkerPool pool(1);
  const auto res = solve(problem, pa, {1.0}, opts, pool);
  CHECK(res.converged);
  CHECK(norm(res.state.x) <= 1e-6);
  CHECK(res.trace.rows[1].eps_n > 0.0);  // (k_1 - 1)(omega + ||x_0||)^2
  CHECK(res.trace.rows[1].eps_n ==
        doctest::Approx(0.25 * 4.0).epsilon(1e-9));
}

TEST_CASE("identical runs produce identical trajectories") {
  auto params = tiny_instance();
  params.M = 4;
  params.N = 3;
  params.K = 2;
  params.t = {0.2, 0.5, 0.8};
  params.s = {1.1, 1.5, 2.0};
  params.xi = {0.3, 0.7};
  params.eta = {0.1, 0.2};
  const auto problem = build_poly_ramp(params);

  SolverOptions opts;
  opts.tol = 1e-10;
  opts.max_iter = 60;

  WorkerPool p1(1);
  const auto ref = solve(problem, quasi_params_a(), {1.0}, opts, p1);
  const auto again = solve(problem, quasi_params_a(), {1.0}, opts, p1);
  CHECK(ref.trace.same_trajectory(again.trace));
  CHECK(bits_equal(ref.state.x, again.state.x));

  for (int workers : {2, 4}) {
    WorkerPool pw(workers);
    const auto par = solve(problem, quasi_params_a(), {1.0}, opts, pw);
    CHECK(ref.trace.same_trajectory(par.trace));
    CHECK(bits_equal(ref.state.x, par.state.x));
  }
}

TEST_CASE("mann drives a 2-D box/disk instance into the solution set") {
  BallBoxParams bp;
  bp.dimension = 2;
  const auto problem = build_ball_box(bp);

  MannParams params;
  params.lambda_schedule = [](int) { return 0.2; };
  params.alpha_schedule = [](int n) { return std::min(0.9, 1.0 / (n + 1)); };
  params.a = params.b = 0.2;
  params.alpha_decays_to_zero = true;

  SolverOptions opts;
  opts.tol = 1e-8;
  opts.max_iter = 10000;
  opts.quiet = true;
  WorkerPool pool(1);
  const auto res = solve(problem, params, {1.0, 1.0}, opts, pool);
  REQUIRE(res.converged);
  CHECK(problem.feasible.contains(res.state.x, 1e-9));
  CHECK(ball_box_distance_to_solution(bp, res.state.x) <= 1e-6);
}

TEST_CASE("solve rejects a start point outside the feasible set") {
  const auto problem = build_poly_ramp(tiny_instance());
  SolverOptions opts;
  WorkerPool pool(1);
  CHECK_THROWS_AS(solve(problem, quasi_params_a(), {1.5}, opts, pool),
                  InvalidParams);
}

TEST_CASE("resolvent failures surface as numerical failures") {
  const auto problem = build_poly_ramp(tiny_instance());
  SolverOptions opts;
  opts.force_iterative_resolvent = true;
  opts.inner_max = 1;
  opts.inner_tol = 1e-15;
  WorkerPool pool(1);
  CHECK_THROWS_AS(solve(problem, quasi_params_a(), {1.0}, opts, pool),
                  NumericalFailure);
}

TEST_CASE("runtime schedule violations are reported") {
  const auto problem = build_poly_ramp(tiny_instance());
  SolverOptions opts;
  WorkerPool pool(1);
  auto state = make_state(problem, {1.0}, opts);

  auto params = quasi_params_a();
  params.lambda_schedule = [](int n) { return n == 0 ? 0.2 : 0.4; };
  step_a(problem, params, state, opts, pool);  // n = 0 passes
  CHECK_THROWS_AS(step_a(problem, params, state, opts, pool), InvalidParams);
}
