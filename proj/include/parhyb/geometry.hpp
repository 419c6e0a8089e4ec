#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "parhyb/core.hpp"

namespace parhyb {

// {z : <normal, z> <= offset}. A zero normal degenerates to the whole space
// (offset >= 0) or the empty set (offset < 0); both carry an explicit kind.
struct HalfSpace {
  enum class Kind { proper, whole_space, empty_set };

  Vector normal;
  double offset = 0.0;
  Kind kind = Kind::proper;

  static HalfSpace make(Vector a, double beta);

  // offset - <normal, z>; >= 0 means z is inside.
  double slack(const Vector& z) const;
  bool contains(const Vector& z, double tol = 0.0) const;
};

// Reduces {z : phi(z, u) <= phi(z, x) + eps} to the equivalent half-space
// {z : 2<z, x - u> <= ||x||^2 - ||u||^2 + eps}. The reduction is algebraic;
// membership is preserved exactly.
HalfSpace phi_comparison_to_halfspace(const Vector& u, const Vector& x,
                                      double eps);

double project_interval(double x, double lo, double hi);
Vector project_box(const Vector& x, const Vector& lo, const Vector& hi);
Vector project_ball(const Vector& x, const Vector& center, double radius);
Vector project_halfspace(const Vector& x, const HalfSpace& hs);

ConvexSet make_interval_set(double lo, double hi);  // subset of R^1
ConvexSet make_box_set(Vector lo, Vector hi);
ConvexSet make_ball_set(Vector center, double radius);

// The shrinking constraint set: the base feasible set intersected with the
// accumulated half-spaces. Append-only, so membership can only shrink.
struct NestedSet {
  int dimension = 0;
  ConvexSet base;
  std::vector<HalfSpace> halfspaces;
  std::size_t max_halfspaces = std::size_t{1} << 20;

  // Exact interval reduction of the stored half-spaces, maintained
  // incrementally for dimension-1 sets.
  double interval_lo = -std::numeric_limits<double>::infinity();
  double interval_hi = std::numeric_limits<double>::infinity();

  // Skips whole-space half-spaces, rejects empty ones, enforces the cap.
  void append(HalfSpace hs);

  bool contains(const Vector& z, double tol) const;
  // Smallest slack over stored half-spaces (+inf when none are stored).
  double min_halfspace_slack(const Vector& z) const;
};

// Nearest point of the intersection. Dimension-1 sets over an interval base
// reduce exactly to one clamp; everything else (or force_dykstra) runs
// Dykstra's cyclic algorithm over {base, halfspaces...}, stopping when the
// total movement within a cycle drops to tol and throwing NumericalFailure
// after max_inner cycles.
Vector project_nested(const Vector& x0, const NestedSet& set,
                      double tol = 1e-12, int max_inner = 10000,
                      bool force_dykstra = false);

}  // namespace parhyb
