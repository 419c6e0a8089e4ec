#include "parhyb/core.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace parhyb {

void require_same_dim(const Vector& x, const Vector& y, const char* where) {
  if (x.size() != y.size()) {
    throw DimensionMismatch(std::string(where) + ": dimension mismatch (" +
                            std::to_string(x.size()) + " vs " +
                            std::to_string(y.size()) + ")");
  }
}

bool all_finite(const Vector& x) {
  for (double v : x) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_finite(const Vector& x, const char* where) {
  if (!all_finite(x)) {
    throw NumericalFailure(std::string(where) + ": non-finite coordinate");
  }
}

double inner(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "inner");
  return std::inner_product(x.begin(), x.end(), y.begin(), 0.0);
}

double norm(const Vector& x) { return std::sqrt(inner(x, x)); }

double distance(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "distance");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return std::sqrt(s);
}

double phi(const Vector& x, const Vector& y) {
  require_same_dim(x, y, "phi");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

Vector add_scaled(const Vector& x, double c, const Vector& y) {
  require_same_dim(x, y, "add_scaled");
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + c * y[i];
  return out;
}

Vector scale(double c, const Vector& x) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = c * x[i];
  return out;
}

double Problem::min_ism_modulus() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& op : operators) m = std::min(m, op.ism_modulus);
  return m;
}

}  // namespace parhyb
