#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "geometry.hpp"
#include "numerics.hpp"

namespace mtlab::levelsets {

enum class MeasureKind { LebesgueBall, SurfaceHausdorff, LambdaRegularTest };

// Upper-regular Borel measure on the closed ball: nu(B(a,r)) <= C0 r^lambda.
// The test measure is lambda-dimensional Lebesgue measure on the coordinate
// slice {x_{k+1} = ... = x_n = 0}, which satisfies the growth condition by
// construction with lambda = k.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::LebesgueBall;
  int n = 3;
  int slice_dim = 0;  // LambdaRegularTest only

  double lambda() const {
    switch (kind) {
      case MeasureKind::LebesgueBall: return n;
      case MeasureKind::SurfaceHausdorff: return n - 1.0;
      case MeasureKind::LambdaRegularTest: return slice_dim;
    }
    return n;
  }
  double total_mass() const;
};

MeasureSpec lebesgue_measure(int n);
MeasureSpec surface_measure(int n);
MeasureSpec lambda_test_measure(int n, int slice_dim);

struct LevelSetEstimate {
  double s = 0.0;
  Point at;  // the fixed x (lambda1) or z (lambda2)
  MCEstimate estimate;
  double sampling_radius = 0.0;
  // prefactor fields filled by callers: s^{exponent} * estimate
};

// lambda_1(s, x) = |{z in B_n : |K0(x,z)| > s}| by hit-or-miss sampling of
// B(x, r_s), r_s = (2*h_hat/s)^{1/(n-2)}.  The global kernel bound makes
// the complement of the sampling ball level-set free, so the estimate is
// unbiased.  h_hat comes from kernels::kernel_bound_with_margin.
LevelSetEstimate lambda1(double s, std::span<const double> x, int n,
                         std::uint64_t samples, std::uint64_t seed, double h_hat,
                         int threads = 0);

// lambda_2(s, z) = nu({x in closed ball : |K0(x,z)| > s}) for the three
// measure kinds, sampled from the measure restricted to B(z, r_s).
LevelSetEstimate lambda2(double s, std::span<const double> z,
                         const MeasureSpec &measure, int n, std::uint64_t samples,
                         std::uint64_t seed, double h_hat, int threads = 0);

// Fixed-slope least-squares fit of the prefactor A(x) in
// lambda_1(s,x) ~ A(x) s^{-n/(n-2)} over a geometric s-grid spanning at
// least two decades.
double fit_asymptotic_constant(std::span<const double> x, int n,
                               std::span<const double> s_grid,
                               std::uint64_t samples, std::uint64_t seed,
                               double h_hat, int threads = 0);

// Monte Carlo volume of one blow-up region, sampled from its elementary
// enclosing ball.
MCEstimate region_volume(const geometry::RegionSpec &spec, std::uint64_t samples,
                         std::uint64_t seed, int threads = 0);

// |E(theta) union D(theta)| by a union-of-enclosures proposal (proportional
// ball choice, multiplicity-corrected), unbiased for every dimension.
MCEstimate union_volume_ED(double theta, int n, std::uint64_t samples,
                           std::uint64_t seed, int threads = 0);

}  // namespace mtlab::levelsets
