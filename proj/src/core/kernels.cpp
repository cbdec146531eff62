#include "kernels.hpp"

#include <algorithm>
#include <cmath>

#include "fastmath.hpp"
#include "geometry.hpp"

namespace mtlab::kernels {

namespace {

constexpr double kSingular2 = 1e-280;  // squared-distance floor

// q^2 = 1 - 2 x.z + |x|^2 |z|^2
double qsq(std::span<const double> x, std::span<const double> z) {
  return 1.0 - 2.0 * dot(x, z) + norm2(x) * norm2(z);
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> a) { return dot(a, a); }

double dist2(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double newton(std::span<const double> x, int n) {
  const double r2 = norm2(x);
  if (r2 < kSingular2) throw SingularPoint("newton: evaluated at the origin");
  if (n == 2) return std::log(r2) / (4.0 * M_PI);
  if (n < 2) throw UnsupportedDimension("newton: n must be >= 2");
  const double c_n = 1.0 / ((n - 2.0) * sphere_surface(n - 1));
  return -c_n * powhalf(r2, 2 - n);
}

double green(std::span<const double> x, std::span<const double> z, int n) {
  if (n < 3) throw UnsupportedDimension("green: n must be >= 3");
  const double d2 = dist2(x, z);
  if (d2 < kSingular2) throw SingularPoint("green: x = z");
  const double q2 = qsq(x, z);
  if (q2 < kSingular2) throw SingularPoint("green: image point singularity");
  const double c_n = 1.0 / ((n - 2.0) * sphere_surface(n - 1));
  return -c_n * (powhalf(d2, 2 - n) - powhalf(q2, 2 - n));
}

double poisson_ext(std::span<const double> x, std::span<const double> y, int n) {
  if (n < 2) throw UnsupportedDimension("poisson_ext: n must be >= 2");
  const double q2 = qsq(x, y);
  if (q2 < kSingular2) throw SingularPoint("poisson_ext: x* = |x| y");
  return (1.0 - norm2(x) * norm2(y)) * powhalf(q2, -n) / sphere_surface(n - 1);
}

double bergman(std::span<const double> x, std::span<const double> y, int n) {
  if (n < 3) throw UnsupportedDimension("bergman: n must be >= 3");
  const double q2 = qsq(x, y);
  if (q2 < kSingular2) throw SingularPoint("bergman: x* = |x| y");
  const double a = norm2(x) * norm2(y);
  const double num = (n - 4.0) * a * a + (8.0 * dot(x, y) - 2.0 * n - 4.0) * a + n;
  return num * powhalf(q2, -(n + 2)) / sphere_surface(n - 1);
}

double kernel_k0(std::span<const double> x, std::span<const double> z, int n) {
  if (n < 3) throw UnsupportedDimension("kernel_k0: n must be >= 3");
  const double d2 = dist2(x, z);
  if (d2 < kSingular2) throw SingularPoint("kernel_k0: x = z");
  const double q2 = qsq(x, z);
  if (q2 < kSingular2) throw SingularPoint("kernel_k0: image point singularity");
  const double z2 = norm2(z);
  const double x2 = norm2(x);
  return powhalf(d2, 2 - n) - powhalf(q2, 2 - n) -
         0.5 * (n - 2.0) * (1.0 - z2) * (1.0 - x2 * z2) * powhalf(q2, -n);
}

double kernel_k(std::span<const double> x, std::span<const double> z, int n) {
  const double c_n = 1.0 / ((n - 2.0) * sphere_surface(n - 1));
  return -c_n * kernel_k0(x, z, n);
}

double asymptotic_g(std::span<const double> x, std::span<const double> z, int n) {
  if (n < 3) throw UnsupportedDimension("asymptotic_g: n must be >= 3");
  const double x2 = norm2(x);
  if (x2 < kSingular2) throw SingularPoint("asymptotic_g: x = 0");
  const double q2 = qsq(x, z);
  if (q2 < kSingular2) throw SingularPoint("asymptotic_g: image point singularity");
  const double xn = std::sqrt(x2);
  const double xz = dot(x, z);
  // x*.(x* - z) = 1 - x.z/|x|,   x*.(x* - |x| z) = 1 - x.z
  return 2.0 * (n - 2.0) * (1.0 - xz / xn) * (1.0 - xz) / q2;
}

double estimate_kernel_bound(int n, std::uint64_t samples, std::uint64_t seed) {
  const std::uint64_t nchunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<double> partial(nchunks, 0.0);
  parallel_for(nchunks, [&](std::uint64_t c) {
    Rng rng(seed, 0x48b0 + c);
    const std::uint64_t lo = c * kMcChunk;
    const std::uint64_t len = std::min<std::uint64_t>(kMcChunk, samples - lo);
    std::vector<double> x(n), z(n);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < len; ++i) {
      // half the x draws on the sphere, half in the ball; z concentrates
      // near x on a log-radial scale so the small-separation regime is hit
      if (i & 1) {
        rng.unit_vector(x);
      } else {
        rng.ball_point(x);
      }
      const double r = std::exp(rng.uniform(std::log(1e-6), std::log(2.0)));
      bool ok = false;
      for (int attempt = 0; attempt < 64 && !ok; ++attempt) {
        rng.unit_vector(z);
        double nz2 = 0.0;
        for (int k = 0; k < n; ++k) {
          z[k] = x[k] + r * z[k];
          nz2 += z[k] * z[k];
        }
        ok = nz2 < 1.0;
      }
      if (!ok) rng.ball_point(z);
      const double d2 = dist2(x, z);
      if (d2 < kSingular2) continue;
      const double v = std::abs(kernel_k0(x, z, n)) * powhalf(d2, n - 2);
      worst = std::max(worst, v);
    }
    partial[c] = worst;
  });
  double sup = 0.0;
  for (double v : partial) sup = std::max(sup, v);
  return sup;
}

double kernel_bound_with_margin(int n, std::uint64_t samples, std::uint64_t seed) {
  // analytic: |K0| |x-z|^{n-2} <= 1 + 1 + 2(n-2) = 2n - 2
  const double closed = 2.0 * n - 2.0;
  return std::min(2.0 * estimate_kernel_bound(n, samples, seed), closed);
}

double estimate_expansion_constant(int n, double b, std::uint64_t samples,
                                   std::uint64_t seed) {
  if (!(b > 0.0 && b < 1.0))
    throw InvalidArgument("estimate_expansion_constant: b must lie in (0,1)");
  const std::uint64_t nchunks = (samples + kMcChunk - 1) / kMcChunk;
  std::vector<double> partial(nchunks, 0.0);
  parallel_for(nchunks, [&](std::uint64_t c) {
    Rng rng(seed, 0x77aa + c);
    const std::uint64_t lo = c * kMcChunk;
    const std::uint64_t len = std::min<std::uint64_t>(kMcChunk, samples - lo);
    std::vector<double> x(n), z(n);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < len; ++i) {
      rng.unit_vector(x);
      const double rx = rng.uniform(b, 1.0);
      for (auto &cdd : x) cdd *= rx;
      rng.ball_point(z);
      const double d2 = dist2(x, z);
      if (d2 < 1e-12) continue;
      const double q2 = 1.0 - 2.0 * dot(x, z) + norm2(x) * norm2(z);
      const double lead = powhalf(d2, 2 - n) -
                          (1.0 + asymptotic_g(x, z, n)) * powhalf(q2, 2 - n);
      const double rem = std::abs(kernel_k0(x, z, n) - lead);
      worst = std::max(worst, rem * powhalf(d2, n - 3));
    }
    partial[c] = worst;
  });
  double sup = 0.0;
  for (double v : partial) sup = std::max(sup, v);
  return sup;
}

}  // namespace mtlab::kernels
