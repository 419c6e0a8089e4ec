#include "parhyb/resolvent.hpp"

#include <sstream>

namespace parhyb {

Vector resolve(const Bifunction& f, const ConvexSet& C, const Vector& x,
               const ResolventConfig& cfg) {
  if (cfg.r <= 0.0) throw InvalidParams("resolve: r must be positive");

  if (f.resolvent_closed_form && !cfg.force_iterative) {
    Vector z = f.resolvent_closed_form(x, cfg.r);
    require_same_dim(z, x, "resolve (closed form)");
    require_finite(z, "resolve (closed form)");
    return z;
  }

  if (!f.operator_form) {
    throw InvalidParams(
        "resolve: bifunction has neither a closed-form resolvent nor an "
        "operator form");
  }
  const auto& op = *f.operator_form;
  if (op.lipschitz <= 0.0) {
    throw InvalidParams("resolve: operator form needs a positive Lipschitz "
                        "bound");
  }
  const double gamma =
      cfg.gamma > 0.0 ? cfg.gamma : cfg.r / (1.0 + cfg.r * op.lipschitz);
  if (cfg.inner_tol <= 0.0 || cfg.inner_max < 1) {
    throw InvalidParams("resolve: inner_tol and inner_max must be positive");
  }

  Vector z = C.project(x);
  for (int it = 0; it < cfg.inner_max; ++it) {
    Vector g = op.eval(z);
    require_same_dim(g, z, "resolve (operator form)");
    Vector w(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      w[i] = z[i] - gamma * (g[i] + (z[i] - x[i]) / cfg.r);
    }
    Vector z_next = C.project(w);
    const double step = distance(z_next, z);
    z = std::move(z_next);
    if (step <= cfg.inner_tol) {
      require_finite(z, "resolve");
      return z;
    }
  }
  std::ostringstream msg;
  msg << "resolve: damped projection iteration missed tol " << cfg.inner_tol
      << " within " << cfg.inner_max << " steps (r=" << cfg.r
      << ", gamma=" << gamma << ")";
  throw NumericalFailure(msg.str());
}

bool check_firm_nonexpansive(const Bifunction& f, const ConvexSet& C,
                             const Vector& x, const Vector& y,
                             const ResolventConfig& cfg, double tol) {
  const Vector tx = resolve(f, C, x, cfg);
  const Vector ty = resolve(f, C, y, cfg);
  const Vector diff = add_scaled(tx, -1.0, ty);
  const double lhs = inner(diff, diff);
  const double rhs = inner(diff, add_scaled(x, -1.0, y));
  return lhs <= rhs + tol;
}

}  // namespace parhyb
