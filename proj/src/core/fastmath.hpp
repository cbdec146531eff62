#pragma once

#include <cmath>

namespace mtlab {

// base^(k/2) for integer k, base > 0.  Binary exponentiation on sqrt(base);
// exact enough (few ulp) and much cheaper than std::pow on the sampling
// paths, where these half-integer exponents dominate the profile.
inline double powhalf(double base, int k) {
  if (k == 0) return 1.0;
  double b = std::sqrt(base);
  unsigned e = static_cast<unsigned>(k < 0 ? -k : k);
  double acc = 1.0;
  while (e) {
    if (e & 1u) acc *= b;
    b *= b;
    e >>= 1u;
  }
  return k < 0 ? 1.0 / acc : acc;
}

}  // namespace mtlab
