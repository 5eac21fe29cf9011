#include <cmath>

#include "doctest.h"
#include "seditor/math/scalar.hpp"

using namespace seditor::math;

TEST_CASE("sigmoid fixed points and symmetry") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-800.0) == 0.0);
  for (double x : {0.1, 1.0, 5.0, 37.0}) {
    CHECK(sigmoid(x) + sigmoid(-x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sigmoid(x) > 0.5);
  }
}

TEST_CASE("softplus limits and known values") {
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  // Far negative input underflows to exactly zero; the multiplier-off
  // convention depends on this being 0.0, not just tiny.
  CHECK(softplus(-800.0) == 0.0);
  CHECK(softplus(-1e9) == 0.0);
  CHECK(softplus(50.0) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(softplus(1000.0) == 1000.0);
  // Monotone increasing, always above max(0, x).
  double prev = softplus(-10.0);
  for (double x = -9.5; x < 10.0; x += 0.5) {
    const double y = softplus(x);
    CHECK(y > prev);
    CHECK(y > 0.0);
    CHECK(y >= x);
    prev = y;
  }
}

TEST_CASE("softplus_inv round-trips") {
  CHECK(softplus_inv(1.0) == doctest::Approx(0.5413248546129181).epsilon(1e-15));
  for (double y : {1e-8, 1e-3, 0.1, 0.69314718055994531, 1.0, 4.2, 40.0, 700.0}) {
    CHECK(softplus(softplus_inv(y)) == doctest::Approx(y).epsilon(1e-12));
  }
  for (double x : {-30.0, -4.0, -0.5, 0.0, 0.5, 4.0, 30.0}) {
    CHECK(softplus_inv(softplus(x)) == doctest::Approx(x).epsilon(1e-9));
  }
  // Domain edge: y must be positive.
  CHECK(std::isinf(softplus_inv(0.0)));
  CHECK(std::isnan(softplus_inv(-1.0)));
}

TEST_CASE("clip pins to the interval") {
  CHECK(clip(0.5, -1.0, 1.0) == 0.5);
  CHECK(clip(3.0, -1.0, 1.0) == 1.0);
  CHECK(clip(-3.0, -1.0, 1.0) == -1.0);
  CHECK(clip(-1.0, -1.0, 1.0) == -1.0);
  CHECK(clip(1.0, -1.0, 1.0) == 1.0);
}
