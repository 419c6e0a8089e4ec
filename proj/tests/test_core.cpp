#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"

using namespace parhyb;

TEST_CASE("phi is the squared distance") {
  CHECK(phi({1.0}, {0.0}) == doctest::Approx(1.0));
  CHECK(phi({2.0}, {2.0}) == 0.0);
  CHECK(phi({1.0}, {3.0}) == doctest::Approx(4.0));
}

TEST_CASE("phi three-point identity") {
  // phi(x,y) = phi(x,z) + phi(z,y) + 2<z-x, y-z>
  CHECK(phi({1.0}, {2.0}) + phi({2.0}, {3.0}) + 2.0 * (2.0 - 1.0) * (3.0 - 2.0)
        == doctest::Approx(phi({1.0}, {3.0})));

  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto x = test_util::random_vector(rng, 3, -5.0, 5.0);
    const auto y = test_util::random_vector(rng, 3, -5.0, 5.0);
    const auto z = test_util::random_vector(rng, 3, -5.0, 5.0);
    const double lhs = phi(x, y);
    const double rhs = phi(x, z) + phi(z, y) +
                       2.0 * inner(add_scaled(z, -1.0, x),
                                   add_scaled(y, -1.0, z));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("phi norm bounds") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto x = test_util::random_vector(rng, 4, -3.0, 3.0);
    const auto y = test_util::random_vector(rng, 4, -3.0, 3.0);
    const double p = phi(x, y);
    const double nx = norm(x), ny = norm(y);
    CHECK(p >= (nx - ny) * (nx - ny) - 1e-12);
    CHECK(p <= (nx + ny) * (nx + ny) + 1e-12);
  }
}

TEST_CASE("inner product basics") {
  CHECK(inner({1.0, 2.0}, {3.0, 4.0}) == doctest::Approx(11.0));
  CHECK(inner({5.0, -2.0, 7.0}, {0.0, 0.0, 0.0}) == 0.0);
  CHECK(inner({3.0}, {3.0}) == doctest::Approx(9.0));

  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const auto x = test_util::random_vector(rng, 5, -2.0, 2.0);
    const auto y = test_util::random_vector(rng, 5, -2.0, 2.0);
    CHECK(inner(x, y) == inner(y, x));
    CHECK(inner(x, x) == doctest::Approx(norm(x) * norm(x)));
  }
}

TEST_CASE("dimension mismatches are rejected") {
  CHECK_THROWS_AS(inner({1.0}, {1.0, 2.0}), DimensionMismatch);
  CHECK_THROWS_AS(phi({1.0, 2.0}, {1.0}), DimensionMismatch);
  CHECK_THROWS_AS(add_scaled({1.0}, 2.0, {1.0, 1.0}), DimensionMismatch);
}

TEST_CASE("finite checks") {
  CHECK(all_finite({1.0, -2.0}));
  CHECK_FALSE(all_finite({1.0, std::numeric_limits<double>::quiet_NaN()}));
  CHECK_FALSE(all_finite({std::numeric_limits<double>::infinity()}));
  Vector bad = {std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(require_finite(bad, "test"), NumericalFailure);
}

TEST_CASE("vector helpers") {
  CHECK(add_scaled({1.0, 2.0}, -0.5, {2.0, 4.0}) == Vector{0.0, 0.0});
  CHECK(scale(3.0, {1.0, -1.0}) == Vector{3.0, -3.0});
  CHECK(distance({0.0, 3.0}, {4.0, 0.0}) == doctest::Approx(5.0));
}

TEST_CASE("min ism modulus over the operator family") {
  Problem p;
  MonotoneOperator a, b;
  a.ism_modulus = 0.5;
  b.ism_modulus = 0.25;
  p.operators = {a, b};
  CHECK(p.min_ism_modulus() == doctest::Approx(0.25));
}
