#include "parhyb/problems.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "parhyb/geometry.hpp"

namespace parhyb {

namespace {

void spin_for_ms(double ms) {
  if (ms <= 0.0) return;
  using Clock = std::chrono::steady_clock;
  const auto until =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double, std::milli>(ms));
  while (Clock::now() < until) {
  }
}

double ramp(double x, double t, double s) {
  return x <= t ? 0.0 : s * (x - t);
}

double saturating_slope(double x, double xi, double eta) {
  return x <= xi ? (eta / xi) * x : eta;
}

// Unique z in [0, 1] with r*B(z) + z = x (for x in (0, 1]); 0 at x = 0.
double ramp_resolvent(double x, double r, double xi, double eta) {
  if (x <= 0.0) return 0.0;
  return x <= xi + r * eta ? xi * x / (xi + r * eta) : x - r * eta;
}

void validate_poly_ramp(const PolyRampParams& p) {
  auto fail = [](const std::string& what) {
    throw InvalidParams("poly_ramp: " + what);
  };
  if (p.M < 1 || p.N < 1 || p.K < 1) fail("M, N, K must be >= 1");
  if (p.t.size() != static_cast<std::size_t>(p.N) ||
      p.s.size() != static_cast<std::size_t>(p.N)) {
    fail("t and s must have N entries");
  }
  if (p.xi.size() != static_cast<std::size_t>(p.K) ||
      p.eta.size() != static_cast<std::size_t>(p.K)) {
    fail("xi and eta must have K entries");
  }
  double prev = 0.0;
  for (int i = 0; i < p.N; ++i) {
    if (!(p.t[i] > prev && p.t[i] < 1.0)) {
      fail("t must be strictly increasing inside (0, 1)");
    }
    prev = p.t[i];
    const double cap = 1.0 / (1.0 - p.t[i]);
    if (!(p.s[i] > 1.0 && p.s[i] <= cap)) {
      std::ostringstream msg;
      msg << "s[" << i << "] must lie in (1, " << cap << "]";
      fail(msg.str());
    }
  }
  prev = 0.0;
  for (int k = 0; k < p.K; ++k) {
    if (!(p.xi[k] > prev && p.xi[k] < 1.0)) {
      fail("xi must be strictly increasing inside (0, 1)");
    }
    prev = p.xi[k];
    if (!(p.eta[k] > 0.0 && p.eta[k] < p.xi[k])) {
      fail("eta[k] must lie in (0, xi[k])");
    }
  }
  if (p.eval_cost_ms < 0.0) fail("eval_cost_ms must be nonnegative");
}

}  // namespace

void PolyRampParams::fill_defaults() {
  if (t.empty()) {
    t.resize(N);
    for (int i = 0; i < N; ++i) t[i] = double(i + 1) / (N + 1);
  }
  if (s.empty()) {
    s.resize(N);
    for (int i = 0; i < N; ++i) s[i] = 1.0 / (1.0 - t[i]);
  }
  if (xi.empty()) {
    xi.resize(K);
    for (int k = 0; k < K; ++k) xi[k] = double(k + 1) / (K + 1);
  }
  if (eta.empty()) {
    eta.resize(K);
    for (int k = 0; k < K; ++k) eta[k] = xi[k] / 2.0;
  }
}

Problem build_poly_ramp(const PolyRampParams& params) {
  PolyRampParams p = params;
  p.fill_defaults();
  validate_poly_ramp(p);

  Problem problem;
  problem.dimension = 1;
  problem.feasible = make_interval_set(0.0, 1.0);
  problem.reference_solution = Vector{0.0};

  const double cost = p.eval_cost_ms;
  for (int i = 1; i <= p.M; ++i) {
    MonotoneOperator op;
    op.ism_modulus = 0.5;
    op.eval = [i, cost](const Vector& x) -> Vector {
      spin_for_ms(cost);
      const double v = x.at(0);
      return {v - std::pow(v, i + 1) / (i + 1)};
    };
    problem.operators.push_back(std::move(op));
  }
  for (int j = 0; j < p.N; ++j) {
    const double t = p.t[j];
    const double s = p.s[j];
    FixedPointMap map;
    map.lipschitz = s;
    map.eval_power = [t, s, cost](const Vector& x, int n) -> Vector {
      if (n < 1) throw InvalidParams("eval_power: power must be >= 1");
      spin_for_ms(cost);
      double v = x.at(0);
      for (int q = 0; q < n && v != 0.0; ++q) v = ramp(v, t, s);
      return {v};
    };
    problem.mappings.push_back(std::move(map));
  }
  for (int k = 0; k < p.K; ++k) {
    const double xi = p.xi[k];
    const double eta = p.eta[k];
    Bifunction f;
    f.eval = [xi, eta](const Vector& x, const Vector& y) {
      return saturating_slope(x.at(0), xi, eta) * (y.at(0) - x.at(0));
    };
    f.resolvent_closed_form = [xi, eta, cost](const Vector& x,
                                              double r) -> Vector {
      spin_for_ms(cost);
      return {ramp_resolvent(x.at(0), r, xi, eta)};
    };
    Bifunction::OperatorForm op;
    op.lipschitz = eta / xi;
    op.eval = [xi, eta, cost](const Vector& x) -> Vector {
      spin_for_ms(cost);
      return {saturating_slope(x.at(0), xi, eta)};
    };
    f.operator_form = std::move(op);
    problem.bifunctions.push_back(std::move(f));
  }
  return problem;
}

PolyRampParams random_poly_ramp_params(int M, int N, int K,
                                       std::uint64_t seed) {
  if (M < 1 || N < 1 || K < 1) {
    throw InvalidParams("random_poly_ramp_params: M, N, K must be >= 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  std::uniform_real_distribution<double> frac(0.1, 0.9);

  PolyRampParams p;
  p.M = M;
  p.N = N;
  p.K = K;
  p.t.resize(N);
  p.s.resize(N);
  for (int i = 0; i < N; ++i) {
    p.t[i] = (i + unit(rng)) / (N + 1);  // strictly increasing by spacing
    const double cap = 1.0 / (1.0 - p.t[i]);
    p.s[i] = 1.0 + frac(rng) * (cap - 1.0);
  }
  p.xi.resize(K);
  p.eta.resize(K);
  for (int k = 0; k < K; ++k) {
    p.xi[k] = (k + unit(rng)) / (K + 1);
    p.eta[k] = frac(rng) * p.xi[k];
  }
  return p;
}

Problem build_ball_box(const BallBoxParams& params) {
  BallBoxParams p = params;
  if (p.dimension < 1) throw InvalidParams("ball_box: dimension must be >= 1");
  const auto d = static_cast<std::size_t>(p.dimension);
  if (p.box_lo.empty()) p.box_lo.assign(d, 0.0);
  if (p.box_hi.empty()) p.box_hi.assign(d, 1.0);
  if (p.ball_center.empty()) p.ball_center.assign(d, 0.5);
  if (p.box_lo.size() != d || p.box_hi.size() != d ||
      p.ball_center.size() != d) {
    throw DimensionMismatch("ball_box: parameter dimensions disagree");
  }
  if (!(p.ball_radius > 0.0)) {
    throw InvalidParams("ball_box: ball radius must be positive");
  }
  // The ball must sit strictly inside the box; the center is then an
  // interior witness of the solution set.
  for (std::size_t i = 0; i < d; ++i) {
    if (!(p.ball_center[i] - p.ball_radius > p.box_lo[i] &&
          p.ball_center[i] + p.ball_radius < p.box_hi[i])) {
      throw InvalidParams(
          "ball_box: ball must lie strictly inside the box");
    }
  }

  Problem problem;
  problem.dimension = p.dimension;
  problem.feasible = make_box_set(p.box_lo, p.box_hi);
  problem.reference_solution = p.ball_center;

  MonotoneOperator zero_op;
  zero_op.ism_modulus = 0.5;
  zero_op.eval = [d](const Vector& x) {
    if (x.size() != d) throw DimensionMismatch("ball_box operator");
    return Vector(d, 0.0);
  };
  problem.operators.push_back(std::move(zero_op));

  FixedPointMap map;
  map.eval_power = [center = p.ball_center,
                    radius = p.ball_radius](const Vector& x, int n) {
    if (n < 1) throw InvalidParams("eval_power: power must be >= 1");
    return project_ball(x, center, radius);  // idempotent, any power
  };
  problem.mappings.push_back(std::move(map));
  return problem;
}

double ball_box_distance_to_solution(const BallBoxParams& params,
                                     const Vector& x) {
  BallBoxParams p = params;
  const auto d = static_cast<std::size_t>(p.dimension);
  if (p.ball_center.empty()) p.ball_center.assign(d, 0.5);
  return std::max(0.0, distance(x, p.ball_center) - p.ball_radius);
}

Vector brute_force_projection(
    const Vector& x0, const Vector& lo, const Vector& hi,
    const std::function<bool(const Vector&)>& member, double resolution) {
  require_same_dim(x0, lo, "brute_force_projection");
  require_same_dim(x0, hi, "brute_force_projection");
  if (x0.size() < 1 || x0.size() > 2) {
    throw InvalidParams("brute_force_projection: dimension must be 1 or 2");
  }
  if (!(resolution > 0.0)) {
    throw InvalidParams("brute_force_projection: resolution must be > 0");
  }
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || lo[i] > hi[i]) {
      throw InvalidParams("brute_force_projection: bounds must be finite "
                          "with lo <= hi");
    }
  }

  auto steps = [&](std::size_t i) {
    return static_cast<long>(std::ceil((hi[i] - lo[i]) / resolution));
  };

  Vector best;
  double best_d = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vector& z) {
    if (!member(z)) return;
    const double d = phi(z, x0);
    if (d < best_d) {
      best_d = d;
      best = z;
    }
  };

  if (x0.size() == 1) {
    const long n0 = steps(0);
    for (long a = 0; a <= n0; ++a) {
      consider({std::min(lo[0] + a * resolution, hi[0])});
    }
  } else {
    const long n0 = steps(0), n1 = steps(1);
    for (long a = 0; a <= n0; ++a) {
      const double za = std::min(lo[0] + a * resolution, hi[0]);
      for (long b = 0; b <= n1; ++b) {
        consider({za, std::min(lo[1] + b * resolution, hi[1])});
      }
    }
  }
  if (best.empty()) {
    throw EmptySetError(
        "brute_force_projection: no grid point inside the set");
  }
  return best;
}

IterationOracle closed_form_iteration_oracle(const PolyRampParams& params,
                                             double lambda, double alpha,
                                             double r, double x_n) {
  PolyRampParams p = params;
  p.fill_defaults();
  validate_poly_ramp(p);
  if (!(x_n >= 0.0 && x_n <= 1.0)) {
    throw InvalidParams("oracle: x_n must lie in [0, 1]");
  }

  IterationOracle out;

  double best_dist = -1.0;
  for (int i = 1; i <= p.M; ++i) {
    double y = (1.0 - lambda) * x_n + lambda * std::pow(x_n, i + 1) / (i + 1);
    y = std::min(1.0, std::max(0.0, y));
    const double dist = std::abs(y - x_n);
    if (dist > best_dist) {
      best_dist = dist;
      out.ybar = y;
    }
  }

  best_dist = -1.0;
  for (int j = 0; j < p.N; ++j) {
    const double z =
        alpha * x_n + (1.0 - alpha) * ramp(out.ybar, p.t[j], p.s[j]);
    const double dist = std::abs(z - x_n);
    if (dist > best_dist) {
      best_dist = dist;
      out.zbar = z;
    }
  }

  if (out.zbar == 0.0) {
    // Solved: every later quantity collapses to the solution.
    out.ubar = 0.0;
    out.x_next = 0.0;
    return out;
  }

  best_dist = -1.0;
  for (int k = 0; k < p.K; ++k) {
    const double u = ramp_resolvent(out.zbar, r, p.xi[k], p.eta[k]);
    const double dist = std::abs(u - x_n);
    if (dist > best_dist) {
      best_dist = dist;
      out.ubar = u;
    }
  }

  out.x_next = (out.zbar + out.ubar) / 2.0;
  return out;
}

}  // namespace parhyb
