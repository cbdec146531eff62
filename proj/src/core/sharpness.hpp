#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "levelsets.hpp"
#include "numerics.hpp"

namespace mtlab::sharpness {

// Truncated kernel-power family concentrating at x0:
//   Phi_m(z) = K0(x0,z) |K0(x0,z)|^{beta-2}   if |K0(x0,z)| <= m, else 0
// with beta = n/(n-2); the excluded set is exactly the super-level set.
struct ExtremalFamily {
  Point x0;
  double m = 0.0;
  int n = 3;

  double beta() const { return n / (n - 2.0); }
  double beta_prime() const { return n / 2.0; }
};

double phi_m(const ExtremalFamily &fam, std::span<const double> z);

struct FunctionalOptions {
  int radial_order = 48;
  int sphere_points = 2048;
  double exclusion = 0.05;
  std::uint64_t x_samples = 400;  // measure samples (each costs one T eval)
  std::uint64_t seed = 1;
  int threads = 0;
};

struct FunctionalResult {
  double alpha = 0.0;
  MCEstimate value;
  double norm_f = 0.0;  // L^{n/2} norm of the input
  levelsets::MeasureSpec measure;
};

// int exp[ alpha (|Tf(x)| / ||f||_{n/2})^{n/(n-2)} ] d nu(x), with Tf by
// the canonical-solver quadrature at nu-sampled points.
FunctionalResult mt_functional(const Field &f, double alpha, int n,
                               const levelsets::MeasureSpec &measure,
                               const FunctionalOptions &opt = {});

struct GrowthCell {
  double factor = 0.0;
  double m = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

struct GrowthSlope {
  double factor = 0.0;
  double slope = 0.0;        // d log(value) / d log(m)
  double slope_stderr = 0.0;
};

struct GrowthTable {
  int n = 0;
  Point x0;
  std::vector<GrowthCell> cells;
  std::vector<GrowthSlope> slopes;
};

struct ExperimentOptions {
  std::uint64_t x_samples = 400000;  // measure draws per (m) cell
  std::uint64_t z_samples = 30000;   // kernel draws per (m) cell (boundary path)
  std::uint64_t seed = 1;
  double h_hat = 8.0;                // kernel bound for concentration radii
  int threads = 0;
};

// Growth table of the functional along Phi_m.  For interior x0 = 0 under
// Lebesgue measure, T Phi_m reduces exactly to a one-dimensional radial
// integral (spherical averaging of every kernel part), so only the measure
// sampling carries Monte Carlo error; other placements use a shared
// importance-sampled kernel estimate per m.
GrowthTable sharpness_experiment(int n, const Point &x0,
                                 std::span<const double> factors,
                                 std::span<const double> m_grid,
                                 const levelsets::MeasureSpec &measure,
                                 const ExperimentOptions &opt = {});

}  // namespace mtlab::sharpness
