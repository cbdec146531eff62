#pragma once

#include <cstdint>
#include <span>

#include "numerics.hpp"

namespace mtlab::kernels {

// All kernels are evaluated through q^2 = 1 - 2 x.z + |x|^2 |z|^2
// (= |x* - |x| z|^2), the cancellation-free form; the x -> 0 limit of the
// Green image term is taken continuously (q -> 1).

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double dist2(std::span<const double> a, std::span<const double> b);

// Newtonian kernel N(x) = -c_n |x|^{2-n} (n >= 3); (2 pi)^{-1} log|x| for
// n = 2.  The n = 2 form exists for reference only and feeds nothing else.
double newton(std::span<const double> x, int n);

// Dirichlet Green function G(x,z) = N(x-z) - N(x* - |x| z).
double green(std::span<const double> x, std::span<const double> z, int n);

// Extended Poisson kernel P(x,y).
double poisson_ext(std::span<const double> x, std::span<const double> y, int n);

// Harmonic Bergman reproducing kernel R(x,y).
double bergman(std::span<const double> x, std::span<const double> y, int n);

// Canonical-solution kernel K(x,z) = G(x,z) + (1-|z|^2)/2 P(x,z) and its
// normalization K0(x,z) = -K(x,z)/c_n.
double kernel_k(std::span<const double> x, std::span<const double> z, int n);
double kernel_k0(std::span<const double> x, std::span<const double> z, int n);

// Boundary asymptotic profile
//   g(x,z) = 2(n-2) [x*.(x*-z)][x*.(x*-|x|z)] / |x*-|x|z|^2  (>= 0 on pairs)
double asymptotic_g(std::span<const double> x, std::span<const double> z, int n);

// Empirical constant of the global bound |K0(x,z)| <= H |x-z|^{2-n}:
// supremum of |K0| |x-z|^{n-2} over `samples` sampled pairs (x biased to
// include boundary points, where the supremum is approached).
double estimate_kernel_bound(int n, std::uint64_t samples, std::uint64_t seed);

// Safe H for level-set sampling radii: twice the empirical constant,
// clipped from below by the closed-form bound 2n - 2.
double kernel_bound_with_margin(int n, std::uint64_t samples, std::uint64_t seed);

// Empirical constant of the near-boundary expansion
//   |K0 - [|x-z|^{2-n} - (1+g(x,z)) q^{2-n}]| <= C |x-z|^{3-n},  |x| >= b
double estimate_expansion_constant(int n, double b, std::uint64_t samples,
                                   std::uint64_t seed);

}  // namespace mtlab::kernels
