#pragma once

#include <algorithm>
#include <cmath>

namespace seditor::math {

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow for large |x|.
inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// Inverse of softplus: y = log(exp(x) - 1). Requires y > 0.
inline double softplus_inv(double y) {
  // log(exp(y) - 1) = y + log(1 - exp(-y)), stable for large y.
  return y + std::log(-std::expm1(-y));
}

inline double clip(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

}  // namespace seditor::math
