#pragma once

#include "parhyb/core.hpp"

namespace parhyb {

struct ResolventConfig {
  double r = 1.0;          // regularization, > 0
  double gamma = 0.0;      // damped-iteration step; 0 picks r/(1 + r*L)
  double inner_tol = 1e-10;
  int inner_max = 100000;
  // Skip the closed form even when available (used to cross-check the
  // iterative path against it).
  bool force_iterative = false;
};

// z with f(z, y) + (1/r)<y - z, z - x> >= 0 for all y in C. Dispatch: closed
// form when attached, else the projected damped iteration
// z <- P_C(z - gamma*(B(z) + (z - x)/r)) for operator-form bifunctions.
Vector resolve(const Bifunction& f, const ConvexSet& C, const Vector& x,
               const ResolventConfig& cfg);

// Whether ||T_r x - T_r y||^2 <= <T_r x - T_r y, x - y> + tol.
bool check_firm_nonexpansive(const Bifunction& f, const ConvexSet& C,
                             const Vector& x, const Vector& y,
                             const ResolventConfig& cfg, double tol = 1e-10);

}  // namespace parhyb
