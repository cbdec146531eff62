#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "numerics.hpp"

namespace mtlab::operators {

// Solid harmonic polynomial, stored as monomial coefficients.
struct HarmonicPolynomial {
  int degree = 0;
  std::vector<double> coeffs;            // one per monomial
  std::vector<std::vector<int>> powers;  // exponent vectors, length n

  double operator()(std::span<const double> x) const;
};

struct HarmonicBasis {
  int n = 0;
  int max_degree = 0;
  std::vector<HarmonicPolynomial> members;
};

// Basis of solid harmonics through max_degree (<= 4): monomial-space
// nullspace of the Laplacian, orthonormalized coefficient vectors.
HarmonicBasis harmonic_basis(int n, int max_degree);

struct SolverOptions {
  int radial_order = 64;
  int sphere_points = 4096;
  double exclusion = 0.05;  // pole-exclusion radius delta
  double fd_step = 2e-3;
  std::uint64_t rule_seed = 0x6d746c61;
};

// Canonical Poisson solver: Tf(x) = int_B K(x,z) f(z) dz by quadrature
// over B setminus B(x, delta) plus the closed-form Newtonian correction
// for the excluded ball, -f(x) delta^2 / (2(n-2)).  For x within delta of
// the boundary the pole correction is skipped (the kernel degenerates to
// the boundary form there and the excluded integral is higher order).
double apply_T(const Field &f, std::span<const double> x, int n,
               const QuadratureRule &rule, double exclusion_radius);

// Same quadrature but sharing one exclusion set (centered at x) across a
// finite-difference stencil; corr(y) = f(x)(|y-x|^2/(2n) - delta^2/(2(n-2)))
// keeps the excluded Newtonian mass consistent, so FD Laplacians of the
// result see the exact unit source.
double apply_T_laplacian_fd(const Field &f, std::span<const double> x, int n,
                            const QuadratureRule &rule, double exclusion_radius,
                            double h);

// Bergman projection Rf(x) = int_B R(x,y) f(y) dy, x interior.
double apply_bergman_projection(const Field &f, std::span<const double> x, int n,
                                const QuadratureRule &rule);

struct SolverReport {
  double max_poisson_residual = 0.0;
  double max_orthogonality_defect = 0.0;
  std::string quadrature;
  std::vector<Point> test_points;
};

// Residual max_x |Delta(Tf)(x) - f(x)| over the test points and the
// normalized defect max_h |<Tf, h>| / (||Tf|| ||h||) over the basis.
SolverReport verify_canonical_solution(const Field &f, int n,
                                       const HarmonicBasis &basis,
                                       std::span<const Point> test_points,
                                       const SolverOptions &opt = {});

// Kernel-level orthogonality: defect_h = |int K(x,z) h(x) dx| normalized by
// int |K(x,z) h(x)| dx, max over basis members, for fixed interior z.
double kernel_orthogonality_defect(std::span<const double> z, int n,
                                   const HarmonicBasis &basis,
                                   const QuadratureRule &rule, double exclusion);

// Deterministic interior test points (low-discrepancy radii/directions).
std::vector<Point> default_test_points(int n, int count, double max_radius,
                                       std::uint64_t seed);

}  // namespace mtlab::operators
