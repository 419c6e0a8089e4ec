#pragma once

#include <cstdint>
#include <functional>

#include "parhyb/core.hpp"

namespace parhyb {

// 1-D family on C = [0, 1] with known common solution {0}:
//   operators  A_i(x) = x - x^{i+1}/(i+1)           (1/2-inverse strongly
//                                                     monotone)
//   mappings   S_i(x) = 0 on [0, t_i], s_i*(x - t_i) on [t_i, 1]
//   bifunctions f_k(x, y) = B_k(x)*(y - x) with
//              B_k(x) = (eta_k/xi_k)*x on [0, xi_k], eta_k beyond.
// Empty parameter vectors are filled with the defaults t_i = i/(N+1),
// s_i = 1/(1 - t_i), xi_k = k/(K+1), eta_k = xi_k/2.
struct PolyRampParams {
  int M = 10, N = 10, K = 10;
  std::vector<double> t, s, xi, eta;
  // Busy-spin inside every operator / mapping / resolvent evaluation, to
  // make per-phase work dominate scheduling in benchmarks.
  double eval_cost_ms = 0.0;

  void fill_defaults();
};

Problem build_poly_ramp(const PolyRampParams& params);

// Same family with admissible parameter sequences drawn at random.
PolyRampParams random_poly_ramp_params(int M, int N, int K,
                                       std::uint64_t seed);

// Fixture with an interior solution set: C is a box, the single mapping is
// the projection onto a ball placed strictly inside the box, and all
// operators vanish. The solution set is the ball itself.
struct BallBoxParams {
  int dimension = 5;
  Vector box_lo, box_hi;   // empty -> [0, 1]^d
  Vector ball_center;      // empty -> (0.5, ..., 0.5)
  double ball_radius = 0.3;
};

Problem build_ball_box(const BallBoxParams& params);

// Exact distance from a box point to the solution set (valid because the
// ball is inside the box).
double ball_box_distance_to_solution(const BallBoxParams& params,
                                     const Vector& x);

// Grid minimizer of ||z - x0||^2 over {z in [lo, hi] : member(z)}.
// Accuracy is bounded by the resolution; dimension must be 1 or 2.
Vector brute_force_projection(const Vector& x0, const Vector& lo,
                              const Vector& hi,
                              const std::function<bool(const Vector&)>& member,
                              double resolution);

// One driver-A iteration of the 1-D family, quasi variant, evaluated purely
// from the scalar closed forms (piecewise mappings, resolvent case split,
// midpoint constraint). Independent of the geometry / resolvent / parallel
// modules, for cross-checking the generic pipeline.
struct IterationOracle {
  double ybar = 0.0, zbar = 0.0, ubar = 0.0, x_next = 0.0;
};

IterationOracle closed_form_iteration_oracle(const PolyRampParams& params,
                                             double lambda, double alpha,
                                             double r, double x_n);

}  // namespace parhyb
