#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "numerics.hpp"

namespace mtlab::certify {

enum class CertStatus { Pass, Fail, Margin };

// Margin records a value without pass/fail semantics (claims the source
// argument does not assert at that dimension).
struct Evidence {
  std::string label;
  double value = 0.0;
};

struct Certificate {
  std::string claim_id;
  int n_lo = 0;
  int n_hi = 0;
  CertStatus status = CertStatus::Fail;
  double worst_margin = 0.0;
  std::vector<Evidence> evidence;

  bool passed() const { return status != CertStatus::Fail; }
};

// Volume comparison |G_n| vs |B_n| for n = 3..n_max, concavity of
// H = log K on [0,1] by second differences, and the endpoint identities
// K(0) = K(1) = 1.
Certificate certify_prop10(int n_max, int grid = 10000);

// Gamma-ratio inequality Gamma(x+1)/Gamma(x+lambda) > (x + lambda/2)^{1-lambda}
// at both parameterizations used by the volume comparison, n = 5..n_max.
Certificate check_kershaw(int n_max);

// psi(z) > 0 on a z-grid in [0, z_max] for n = 4..n_max.
Certificate certify_psi(int n_max, double z_max = 50.0, int grid = 2000);

struct IntersectionReport {
  enum class Kind { None, Single, Two } kind = Kind::None;
  double b1 = 0.0;
  double b2 = 0.0;
};

// Intersections of the boundaries of B(theta) and G(theta): the hyperplane
// coordinates where h(b - theta) = f(b + theta), classified per dimension
// and theta range.
IntersectionReport find_intersections(double theta, int n);

// Root-structure certificate across a theta sweep for one dimension.
Certificate certify_intersections(int n, int theta_grid = 200);

// One certificate per asserted region inclusion at dimension n, each a
// counterexample search over `samples` proposal draws per theta cell.
std::vector<Certificate> certify_inclusions(int n, std::span<const double> theta_grid,
                                            std::uint64_t samples, std::uint64_t seed,
                                            int threads = 0);

// |E(theta) union D(theta)| <= |B_n| (n = 3,4) or |G_n| (n >= 5), within
// 3 sigma, across the theta grid.
Certificate certify_union_budget(int n, std::span<const double> theta_grid,
                                 std::uint64_t samples, std::uint64_t seed,
                                 int threads = 0);

// J(n) as defined by the theta1 volume comparison, with lambda_n from the
// dimensional band bracket.
double lemma20_j(int n);

// Banded lower-bound value for J over n in [n1, n2] with lambda localized
// in (mu1, mu2); n2 <= 0 selects the asymptotic (Gaussian-tail) variant.
double lemma20_j_lower(int n1, int n2, double mu1, double mu2);

// The full theta0 <= theta <= theta1 pipeline for one dimension n >= 6:
// psi positivity, lambda_n bracketing (n >= 13), the V(theta) curve, the
// V' sign identity, monotonicity and signs of phi(q(theta), theta), J(n),
// and the final V <= |G_n| budget.
Certificate certify_lemma20(int n, int v_grid = 50);

// q'(theta) < 0 (n >= 9), q + theta q' > 0 (n >= 6), and the sufficient
// condition 2(1 - F) - theta F' > 0 on [theta0, theta1].
Certificate certify_claim(int n, int grid = 400);

// Hormander-type smoothness condition: the three difference integrals over
// {|z| <= 1, |z - x0| >= r_m} stay bounded as m grows (slope within 2 sigma
// of zero), plus the pointwise quotient bound behind the first of them.
Certificate check_hormander(int n, std::span<const double> m_grid,
                            std::uint64_t samples, std::uint64_t seed,
                            double h_hat, int threads = 0);

std::vector<double> default_theta_grid(int points = 10);

}  // namespace mtlab::certify
