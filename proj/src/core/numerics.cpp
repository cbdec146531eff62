#include "numerics.hpp"

#include <algorithm>
#include <cmath>

namespace mtlab {

MCEstimate merge(const MCEstimate &a, const MCEstimate &b) {
  if (a.samples == 0) return b;
  if (b.samples == 0) return a;
  MCEstimate out;
  const double na = static_cast<double>(a.samples);
  const double nb = static_cast<double>(b.samples);
  out.samples = a.samples + b.samples;
  out.seed = a.seed;
  const double n = na + nb;
  out.value = (na * a.value + nb * b.value) / n;
  // pooled variance of the mean
  const double va = a.std_error * a.std_error * na * na;
  const double vb = b.std_error * b.std_error * nb * nb;
  out.std_error = std::sqrt(va + vb) / n;
  return out;
}

double QuadratureRule::total_weight() const {
  double acc = 0.0;
  for (double w : weights) acc += w;
  return acc;
}

void gauss_legendre(int order, std::vector<double> &nodes, std::vector<double> &weights) {
  if (order < 1) throw InvalidArgument("gauss_legendre: order must be >= 1");
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration on P_order from the Chebyshev-like initial guess
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
}

QuadratureRule gauss_interval(double a, double b, int order) {
  if (order < 1) throw InvalidArgument("gauss_interval: order must be >= 1");
  if (!(a < b)) throw InvalidArgument("gauss_interval: requires a < b");
  std::vector<double> x, w;
  gauss_legendre(order, x, w);
  QuadratureRule rule;
  rule.domain = Domain::Interval;
  rule.dim = 1;
  rule.order = order;
  rule.coords.resize(order);
  rule.weights.resize(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    rule.coords[i] = mid + half * x[i];
    rule.weights[i] = half * w[i];
  }
  return rule;
}

namespace {

// M antithetic unit directions in R^n (M rounded up to even).
std::vector<double> direction_set(int n, int points, std::uint64_t seed) {
  const int m = points + (points & 1);
  std::vector<double> dirs(static_cast<std::size_t>(m) * n);
  Rng rng(seed, /*stream=*/0x5f3e);
  std::vector<double> d(n);
  for (int j = 0; j < m / 2; ++j) {
    rng.unit_vector(d);
    for (int k = 0; k < n; ++k) {
      dirs[static_cast<std::size_t>(2 * j) * n + k] = d[k];
      dirs[static_cast<std::size_t>(2 * j + 1) * n + k] = -d[k];
    }
  }
  return dirs;
}

}  // namespace

QuadratureRule sphere_rule(int n, int points, std::uint64_t seed) {
  if (n < 2) throw UnsupportedDimension("sphere_rule: n must be >= 2");
  if (points < 2) throw InvalidArgument("sphere_rule: need at least 2 points");
  QuadratureRule rule;
  rule.domain = Domain::UnitSphere;
  rule.dim = n;
  rule.coords = direction_set(n, points, seed);
  const int m = static_cast<int>(rule.coords.size()) / n;
  rule.order = 1;
  rule.weights.assign(m, sphere_surface(n - 1) / m);
  return rule;
}

QuadratureRule ball_product_rule(int n, int radial_order, int sphere_points,
                                 std::uint64_t seed) {
  if (n < 3) throw UnsupportedDimension("ball_product_rule: n must be >= 3");
  if (radial_order < (n + 1) / 2)
    throw InvalidArgument("ball_product_rule: radial_order too small for exact total weight");
  if (sphere_points < 2) throw InvalidArgument("ball_product_rule: too few sphere points");

  std::vector<double> rx, rw;
  gauss_legendre(radial_order, rx, rw);
  const auto dirs = direction_set(n, sphere_points, seed);
  const int m = static_cast<int>(dirs.size()) / n;
  const double wdir = sphere_surface(n - 1) / m;

  QuadratureRule rule;
  rule.domain = Domain::UnitBall;
  rule.dim = n;
  rule.order = radial_order;
  rule.coords.resize(static_cast<std::size_t>(radial_order) * m * n);
  rule.weights.resize(static_cast<std::size_t>(radial_order) * m);
  std::size_t idx = 0;
  for (int k = 0; k < radial_order; ++k) {
    const double r = 0.5 * (rx[k] + 1.0);  // map to (0,1)
    const double wr = 0.5 * rw[k] * std::pow(r, n - 1);
    for (int j = 0; j < m; ++j, ++idx) {
      rule.weights[idx] = wr * wdir;
      for (int c = 0; c < n; ++c)
        rule.coords[idx * n + c] = r * dirs[static_cast<std::size_t>(j) * n + c];
    }
  }
  return rule;
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

MCEstimate mc_region_volume(const Predicate &member, const Box &box,
                            std::uint64_t samples, std::uint64_t seed, int threads) {
  if (box.lo.size() != box.hi.size() || box.lo.empty())
    throw InvalidArgument("mc_region_volume: malformed box");
  for (std::size_t i = 0; i < box.lo.size(); ++i)
    if (!(box.lo[i] < box.hi[i]))
      throw InvalidArgument("mc_region_volume: box side is nonpositive");
  const double vbox = box.volume();
  const std::size_t dim = box.lo.size();
  const std::uint64_t hits = mc_hits(
      seed, samples,
      [&](Rng &rng) {
        thread_local std::vector<double> y;
        y.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) y[i] = rng.uniform(box.lo[i], box.hi[i]);
        return member(y);
      },
      threads);
  const double p = samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
  MCEstimate est;
  est.value = vbox * p;
  est.std_error =
      samples ? vbox * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(samples))
              : 0.0;
  est.samples = samples;
  est.seed = seed;
  return est;
}

RootBracket make_bracket(const std::function<double(double)> &f, double lo, double hi) {
  return RootBracket{lo, hi, f(lo), f(hi)};
}

double bisect_root(const std::function<double(double)> &f, RootBracket b, double tol) {
  if (!(b.lo < b.hi)) throw InvalidArgument("bisect_root: bracket requires lo < hi");
  if (!(tol > 0.0)) throw InvalidArgument("bisect_root: tol must be positive");
  if (b.f_lo == 0.0) return b.lo;
  if (b.f_hi == 0.0) return b.hi;
  if (b.f_lo * b.f_hi > 0.0)
    throw NoSignChange("bisect_root: no sign change over the bracket");
  double lo = b.lo, hi = b.hi, flo = b.f_lo;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // tol below spacing of doubles
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

double fd_laplacian(const Field &u, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw InvalidArgument("fd_laplacian: h must be positive");
  double norm2 = 0.0;
  for (double c : x) norm2 += c * c;
  if (1.0 - std::sqrt(norm2) <= 2.0 * h)
    throw DomainError("fd_laplacian: point too close to the boundary for step h");
  thread_local std::vector<double> y;
  y.assign(x.begin(), x.end());
  const double center = u(y);
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double xi = y[i];
    y[i] = xi + h;
    const double up = u(y);
    y[i] = xi - h;
    const double dn = u(y);
    y[i] = xi;
    acc += up + dn - 2.0 * center;
  }
  return acc / (h * h);
}

LineFit weighted_line_fit(std::span<const double> xs, std::span<const double> ys,
                          std::span<const double> sigmas) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw InvalidArgument("weighted_line_fit: need matching arrays of length >= 2");
  double sw = 0.0, swx = 0.0, swy = 0.0;
  std::vector<double> w(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double s = (i < sigmas.size() && sigmas[i] > 0.0) ? sigmas[i] : 1.0;
    w[i] = 1.0 / (s * s);
    sw += w[i];
    swx += w[i] * xs[i];
    swy += w[i] * ys[i];
  }
  const double xbar = swx / sw, ybar = swy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += w[i] * (xs[i] - xbar) * (xs[i] - xbar);
    sxy += w[i] * (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (sxx <= 0.0) throw InvalidArgument("weighted_line_fit: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * xbar;
  fit.slope_stderr = std::sqrt(1.0 / sxx);
  return fit;
}

double log_gamma(double x) { return std::lgamma(x); }

double sphere_surface(int k) {
  // |S^k| = 2 pi^{(k+1)/2} / Gamma((k+1)/2)
  const double half = 0.5 * (k + 1);
  return 2.0 * std::exp(half * std::log(M_PI) - log_gamma(half));
}

}  // namespace mtlab
