#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace mtlab {

using Point = std::vector<double>;
using Field = std::function<double(std::span<const double>)>;

struct MCEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Pools independent partial estimates (weighted by sample count); the merge
// is associative, so any partition of a budget gives the same estimate.
MCEstimate merge(const MCEstimate &a, const MCEstimate &b);

enum class Domain { Interval, UnitBall, UnitSphere };

// Quadrature nodes in flat storage: node i occupies coords[i*dim .. i*dim+dim).
struct QuadratureRule {
  Domain domain = Domain::Interval;
  int dim = 1;
  int order = 0;
  std::vector<double> coords;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> node(std::size_t i) const {
    return {coords.data() + i * dim, static_cast<std::size_t>(dim)};
  }
  double weight(std::size_t i) const { return weights[i]; }
  double total_weight() const;

  template <class F>
  double integrate(F &&f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < size(); ++i) acc += weights[i] * f(node(i));
    return acc;
  }
};

// Gauss-Legendre rule on [a,b]; exact for polynomials of degree <= 2*order-1.
QuadratureRule gauss_interval(double a, double b, int order);

// Nodes/weights on [-1,1] (order-point Gauss-Legendre).
void gauss_legendre(int order, std::vector<double> &nodes, std::vector<double> &weights);

// Product rule on the unit ball of R^n: radial Gauss rule carrying the
// r^{n-1} factor times an equal-weight antithetic Gaussian direction set.
// Total weight equals |B_n| to machine precision when radial_order >= n/2.
QuadratureRule ball_product_rule(int n, int radial_order, int sphere_points,
                                 std::uint64_t seed);

// Equal-weight antithetic point set on S^{n-1}, total weight omega_{n-1}.
QuadratureRule sphere_rule(int n, int points, std::uint64_t seed);

struct Box {
  Point lo;
  Point hi;
  double volume() const;
};

using Predicate = std::function<bool(std::span<const double>)>;

// Hit-or-miss volume of {y in box : member(y)}.  The box must contain the
// region; the estimate is unbiased with binomial standard error.
MCEstimate mc_region_volume(const Predicate &member, const Box &box,
                            std::uint64_t samples, std::uint64_t seed,
                            int threads = 0);

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;
};

RootBracket make_bracket(const std::function<double(double)> &f, double lo, double hi);

// Bisection to an interval of width <= tol; returns the midpoint.
double bisect_root(const std::function<double(double)> &f, RootBracket bracket,
                   double tol);

// Second-order central-difference Laplacian of a field on the unit ball.
// Requires dist(x, boundary) > 2h.
double fd_laplacian(const Field &u, std::span<const double> x, double h);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

// Weighted least squares line through (x_i, y_i) with per-point standard
// errors; slope_stderr is the propagated error of the slope.
LineFit weighted_line_fit(std::span<const double> xs, std::span<const double> ys,
                          std::span<const double> sigmas);

// log Gamma wrapper (keeps call sites uniform; double precision, ~1e-15
// relative on the half-integer and small-real arguments used here).
double log_gamma(double x);

// Surface measure of the unit sphere S^{k} embedded in R^{k+1}.
double sphere_surface(int k);

}  // namespace mtlab
