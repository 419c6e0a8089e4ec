#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "parhyb/errors.hpp"

namespace parhyb {

// Point in R^d. Dimension is fixed per problem instance; every public
// operation checks it.
using Vector = std::vector<double>;

void require_same_dim(const Vector& x, const Vector& y, const char* where);
void require_finite(const Vector& x, const char* where);
bool all_finite(const Vector& x);

double inner(const Vector& x, const Vector& y);
double norm(const Vector& x);
double distance(const Vector& x, const Vector& y);

// phi(x, y) = ||x - y||^2.
double phi(const Vector& x, const Vector& y);

Vector add_scaled(const Vector& x, double c, const Vector& y);  // x + c*y
Vector scale(double c, const Vector& x);

// A_i with a declared inverse-strong-monotonicity constant. The constant is
// taken on trust and checked only by sampled property tests.
struct MonotoneOperator {
  std::function<Vector(const Vector&)> eval;
  double ism_modulus = 0.0;  // alpha > 0
};

// S_j, evaluated as powers S^n. k_sequence declares the asymptotic
// nonexpansiveness factors k_n >= 1 (absent means k == 1).
struct FixedPointMap {
  std::function<Vector(const Vector&, int)> eval_power;  // n >= 1
  std::function<double(int)> k_sequence;
  std::optional<double> lipschitz;

  double k(int n) const { return k_sequence ? k_sequence(n) : 1.0; }
};

// f_k. The resolvent is computed from the closed form when present, else
// from the operator form f(x, y) = <B(x), y - x> with a declared Lipschitz
// bound for B.
struct Bifunction {
  std::function<double(const Vector&, const Vector&)> eval;
  std::function<Vector(const Vector&, double)> resolvent_closed_form;

  struct OperatorForm {
    std::function<Vector(const Vector&)> eval;
    double lipschitz = 0.0;
  };
  std::optional<OperatorForm> operator_form;
};

enum class SetKind { interval, box, ball, halfspace_intersection, custom };

struct ConvexSet {
  std::function<Vector(const Vector&)> project;
  std::function<bool(const Vector&, double tol)> contains;
  SetKind kind = SetKind::custom;
};

struct Problem {
  int dimension = 1;
  ConvexSet feasible;
  std::vector<MonotoneOperator> operators;
  std::vector<FixedPointMap> mappings;
  std::vector<Bifunction> bifunctions;
  // Known common solution, used for diagnostics and property checks only.
  std::optional<Vector> reference_solution;

  double min_ism_modulus() const;
};

}  // namespace parhyb
