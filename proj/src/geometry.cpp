#include "parhyb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace parhyb {

namespace {

bool is_zero_vector(const Vector& a) {
  for (double v : a) {
    if (v != 0.0) return false;
  }
  return true;
}

}  // namespace

HalfSpace HalfSpace::make(Vector a, double beta) {
  HalfSpace hs;
  if (is_zero_vector(a)) {
    hs.kind = beta >= 0.0 ? Kind::whole_space : Kind::empty_set;
    hs.normal = std::move(a);
    hs.offset = beta;
    return hs;
  }
  hs.kind = Kind::proper;
  hs.normal = std::move(a);
  hs.offset = beta;
  return hs;
}

double HalfSpace::slack(const Vector& z) const {
  switch (kind) {
    case Kind::whole_space:
      return std::numeric_limits<double>::infinity();
    case Kind::empty_set:
      return -std::numeric_limits<double>::infinity();
    case Kind::proper:
      return offset - inner(normal, z);
  }
  return 0.0;
}

bool HalfSpace::contains(const Vector& z, double tol) const {
  return slack(z) >= -tol;
}

HalfSpace phi_comparison_to_halfspace(const Vector& u, const Vector& x,
                                      double eps) {
  require_same_dim(u, x, "phi_comparison_to_halfspace");
  Vector a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = 2.0 * (x[i] - u[i]);
  const double beta = inner(x, x) - inner(u, u) + eps;
  return HalfSpace::make(std::move(a), beta);
}

double project_interval(double x, double lo, double hi) {
  if (lo > hi) throw EmptySetError("project_interval: lo > hi");
  return std::clamp(x, lo, hi);
}

Vector project_box(const Vector& x, const Vector& lo, const Vector& hi) {
  require_same_dim(x, lo, "project_box");
  require_same_dim(x, hi, "project_box");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (lo[i] > hi[i]) throw EmptySetError("project_box: lo > hi");
    out[i] = std::clamp(x[i], lo[i], hi[i]);
  }
  return out;
}

Vector project_ball(const Vector& x, const Vector& center, double radius) {
  require_same_dim(x, center, "project_ball");
  if (radius < 0.0) throw EmptySetError("project_ball: negative radius");
  double d = distance(x, center);
  if (d <= radius) return x;
  Vector out(x.size());
  const double t = radius / d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = center[i] + t * (x[i] - center[i]);
  }
  return out;
}

Vector project_halfspace(const Vector& x, const HalfSpace& hs) {
  switch (hs.kind) {
    case HalfSpace::Kind::whole_space:
      return x;
    case HalfSpace::Kind::empty_set:
      throw EmptySetError("project_halfspace: empty half-space");
    case HalfSpace::Kind::proper:
      break;
  }
  require_same_dim(x, hs.normal, "project_halfspace");
  const double viol = inner(hs.normal, x) - hs.offset;
  if (viol <= 0.0) return x;
  const double nn = inner(hs.normal, hs.normal);
  return add_scaled(x, -viol / nn, hs.normal);
}

ConvexSet make_interval_set(double lo, double hi) {
  if (lo > hi) throw EmptySetError("make_interval_set: lo > hi");
  ConvexSet set;
  set.kind = SetKind::interval;
  set.project = [lo, hi](const Vector& x) -> Vector {
    if (x.size() != 1) {
      throw DimensionMismatch("interval set expects dimension 1");
    }
    return {std::clamp(x[0], lo, hi)};
  };
  set.contains = [lo, hi](const Vector& x, double tol) {
    if (x.size() != 1) {
      throw DimensionMismatch("interval set expects dimension 1");
    }
    return x[0] >= lo - tol && x[0] <= hi + tol;
  };
  return set;
}

ConvexSet make_box_set(Vector lo, Vector hi) {
  require_same_dim(lo, hi, "make_box_set");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (lo[i] > hi[i]) throw EmptySetError("make_box_set: lo > hi");
  }
  ConvexSet set;
  set.kind = SetKind::box;
  set.project = [lo, hi](const Vector& x) { return project_box(x, lo, hi); };
  set.contains = [lo, hi](const Vector& x, double tol) {
    require_same_dim(x, lo, "box contains");
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    }
    return true;
  };
  return set;
}

ConvexSet make_ball_set(Vector center, double radius) {
  if (radius < 0.0) throw EmptySetError("make_ball_set: negative radius");
  ConvexSet set;
  set.kind = SetKind::ball;
  set.project = [center, radius](const Vector& x) {
    return project_ball(x, center, radius);
  };
  set.contains = [center, radius](const Vector& x, double tol) {
    return distance(x, center) <= radius + tol;
  };
  return set;
}

void NestedSet::append(HalfSpace hs) {
  switch (hs.kind) {
    case HalfSpace::Kind::whole_space:
      return;
    case HalfSpace::Kind::empty_set:
      throw EmptySetError("NestedSet::append: empty half-space");
    case HalfSpace::Kind::proper:
      break;
  }
  if (dimension > 0 &&
      hs.normal.size() != static_cast<std::size_t>(dimension)) {
    throw DimensionMismatch("NestedSet::append: half-space dimension " +
                            std::to_string(hs.normal.size()) + ", set is " +
                            std::to_string(dimension));
  }
  if (halfspaces.size() >= max_halfspaces) {
    throw Error("NestedSet::append: half-space cap (" +
                std::to_string(max_halfspaces) +
                ") reached; raise max_halfspaces or lower max_iter");
  }
  if (hs.normal.size() == 1) {
    const double bound = hs.offset / hs.normal[0];
    if (hs.normal[0] > 0.0) {
      interval_hi = std::min(interval_hi, bound);
    } else {
      interval_lo = std::max(interval_lo, bound);
    }
  }
  halfspaces.push_back(std::move(hs));
}

bool NestedSet::contains(const Vector& z, double tol) const {
  if (!base.contains(z, tol)) return false;
  for (const auto& hs : halfspaces) {
    if (!hs.contains(z, tol)) return false;
  }
  return true;
}

double NestedSet::min_halfspace_slack(const Vector& z) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& hs : halfspaces) m = std::min(m, hs.slack(z));
  return m;
}

namespace {

// Dykstra's cyclic corrected projections over {base} + the chosen
// half-spaces. Stops when the total movement within a cycle drops to tol.
Vector dykstra_cycle(const Vector& x0, const NestedSet& set,
                     const std::vector<std::size_t>& active, double tol,
                     int max_inner) {
  const std::size_t m = active.size() + 1;
  Vector x = x0;
  std::vector<Vector> corrections(m, Vector(x0.size(), 0.0));

  double last_change = std::numeric_limits<double>::infinity();
  for (int cycle = 0; cycle < max_inner; ++cycle) {
    double change = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      Vector& corr = corrections[s];
      Vector w(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) w[i] = x[i] + corr[i];
      Vector y = (s == 0)
                     ? set.base.project(w)
                     : project_halfspace(w, set.halfspaces[active[s - 1]]);
      require_same_dim(y, x, "project_nested");
      for (std::size_t i = 0; i < x.size(); ++i) corr[i] = w[i] - y[i];
      change += distance(y, x);
      x = std::move(y);
    }
    if (change <= tol) {
      require_finite(x, "project_nested");
      return x;
    }
    last_change = change;
  }
  std::ostringstream msg;
  msg << "project_nested: no convergence after " << max_inner
      << " cycles over " << m
      << " sets (intersection may be empty or ill-conditioned); last cycle "
         "moved "
      << last_change;
  throw NumericalFailure(msg.str());
}

// Violation of half-space i at z, in distance units.
double violation_distance(const NestedSet& set, std::size_t i,
                          const Vector& z) {
  const HalfSpace& hs = set.halfspaces[i];
  const double viol = inner(hs.normal, z) - hs.offset;
  if (viol <= 0.0) return 0.0;
  return viol / norm(hs.normal);
}

}  // namespace

// Dykstra runs on a lazily grown working set: if the projection onto the
// base and a subset of the half-spaces already satisfies the rest, it equals
// the projection onto the full intersection (the full set is contained in
// the relaxed one). Redundant half-spaces therefore never enter the cycle,
// which keeps Dykstra fast as constraints accumulate.
Vector project_nested(const Vector& x0, const NestedSet& set, double tol,
                      int max_inner, bool force_dykstra) {
  if (set.dimension > 0 &&
      x0.size() != static_cast<std::size_t>(set.dimension)) {
    throw DimensionMismatch("project_nested: point dimension " +
                            std::to_string(x0.size()) + ", set is " +
                            std::to_string(set.dimension));
  }
  if (tol <= 0.0 || max_inner < 1) {
    throw InvalidParams("project_nested: tol and max_inner must be positive");
  }

  // Dimension-1 half-spaces reduce exactly to interval bounds; with an
  // interval base the whole projection is one clamp. This keeps long runs
  // (one projection per iteration, each over the full history) at O(1).
  if (!force_dykstra && x0.size() == 1 &&
      set.base.kind == SetKind::interval) {
    const double kProbe = 1e300;
    const double base_lo = set.base.project({-kProbe})[0];
    const double base_hi = set.base.project({kProbe})[0];
    const double lo = std::max(base_lo, set.interval_lo);
    const double hi = std::min(base_hi, set.interval_hi);
    if (lo > hi) {
      throw NumericalFailure(
          "project_nested: intersection is empty (interval reduction gives "
          "lo > hi)");
    }
    return {std::clamp(x0[0], lo, hi)};
  }

  const std::size_t n_hs = set.halfspaces.size();
  std::vector<bool> in_working(n_hs, false);
  std::vector<std::size_t> working;

  Vector p = dykstra_cycle(x0, set, working, tol, max_inner);
  for (std::size_t round = 0; round <= n_hs; ++round) {
    std::size_t worst = n_hs;
    double worst_viol = tol;
    for (std::size_t i = 0; i < n_hs; ++i) {
      if (in_working[i]) continue;
      const double v = violation_distance(set, i, p);
      if (v > worst_viol) {
        worst_viol = v;
        worst = i;
      }
    }
    if (worst == n_hs) return p;
    in_working[worst] = true;
    working.push_back(worst);
    p = dykstra_cycle(x0, set, working, tol, max_inner);
  }
  throw NumericalFailure("project_nested: working set failed to settle");
}

}  // namespace parhyb
