#include "levelsets.hpp"

#include <algorithm>
#include <cmath>

#include "fastmath.hpp"
#include "kernels.hpp"

namespace mtlab::levelsets {

namespace {

double ball_volume(int k, double r) {
  if (k == 0) return 1.0;
  return sphere_surface(k - 1) / k * std::pow(r, k);
}

// surface measure of the cap {x in S^{n-1} : x . zhat >= t_min}
double cap_measure(int n, double t_min) {
  if (t_min <= -1.0) return sphere_surface(n - 1);
  if (t_min >= 1.0) return 0.0;
  const auto rule = gauss_interval(std::asin(std::clamp(t_min, -1.0, 1.0)), 0.5 * M_PI, 128);
  const double integral = rule.integrate([&](std::span<const double> u) {
    return std::pow(std::cos(u[0]), n - 2.0);
  });
  return sphere_surface(n - 2) * integral;
}

}  // namespace

double MeasureSpec::total_mass() const {
  switch (kind) {
    case MeasureKind::LebesgueBall: return ball_volume(n, 1.0);
    case MeasureKind::SurfaceHausdorff: return sphere_surface(n - 1);
    case MeasureKind::LambdaRegularTest: return ball_volume(slice_dim, 1.0);
  }
  return 0.0;
}

MeasureSpec lebesgue_measure(int n) { return {MeasureKind::LebesgueBall, n, 0}; }
MeasureSpec surface_measure(int n) { return {MeasureKind::SurfaceHausdorff, n, 0}; }
MeasureSpec lambda_test_measure(int n, int slice_dim) {
  if (slice_dim < 1 || slice_dim > n)
    throw InvalidArgument("lambda_test_measure: slice_dim must lie in [1, n]");
  return {MeasureKind::LambdaRegularTest, n, slice_dim};
}

LevelSetEstimate lambda1(double s, std::span<const double> x, int n,
                         std::uint64_t samples, std::uint64_t seed, double h_hat,
                         int threads) {
  if (!(s > 0.0)) throw InvalidArgument("lambda1: s must be positive");
  const double r_s = std::min(2.0, std::pow(2.0 * h_hat / s, 1.0 / (n - 2.0)));
  const double vol = ball_volume(n, r_s);
  const std::uint64_t hits = mc_hits(
      seed, samples,
      [&, n, s, r_s](Rng &rng) {
        thread_local std::vector<double> z;
        z.resize(n);
        rng.ball_point(z);
        double nz2 = 0.0;
        for (int i = 0; i < n; ++i) {
          z[i] = x[i] + r_s * z[i];
          nz2 += z[i] * z[i];
        }
        if (nz2 >= 1.0) return false;
        const double d2 = kernels::dist2(x, z);
        if (d2 < 1e-280) return true;  // at the pole the kernel exceeds any level
        return std::abs(kernels::kernel_k0(x, z, n)) > s;
      },
      threads);
  LevelSetEstimate out;
  out.s = s;
  out.at.assign(x.begin(), x.end());
  out.sampling_radius = r_s;
  const double p = samples ? static_cast<double>(hits) / samples : 0.0;
  out.estimate.value = vol * p;
  out.estimate.std_error =
      samples ? vol * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples) : 0.0;
  out.estimate.samples = samples;
  out.estimate.seed = seed;
  return out;
}

LevelSetEstimate lambda2(double s, std::span<const double> z,
                         const MeasureSpec &measure, int n, std::uint64_t samples,
                         std::uint64_t seed, double h_hat, int threads) {
  if (!(s > 0.0)) throw InvalidArgument("lambda2: s must be positive");
  if (kernels::norm2(z) >= 1.0) throw DomainError("lambda2: z must be interior");
  const double r_s = std::min(2.0, std::pow(2.0 * h_hat / s, 1.0 / (n - 2.0)));

  LevelSetEstimate out;
  out.s = s;
  out.at.assign(z.begin(), z.end());
  out.sampling_radius = r_s;
  out.estimate.samples = samples;
  out.estimate.seed = seed;

  const auto level_hit = [&](std::span<const double> x) {
    const double d2 = kernels::dist2(x, z);
    if (d2 < 1e-280) return true;
    return std::abs(kernels::kernel_k0(x, z, n)) > s;
  };

  switch (measure.kind) {
    case MeasureKind::LebesgueBall: {
      const double vol = ball_volume(n, r_s);
      const std::uint64_t hits = mc_hits(
          seed, samples,
          [&](Rng &rng) {
            thread_local std::vector<double> x;
            x.resize(n);
            rng.ball_point(x);
            double nx2 = 0.0;
            for (int i = 0; i < n; ++i) {
              x[i] = z[i] + r_s * x[i];
              nx2 += x[i] * x[i];
            }
            if (nx2 > 1.0) return false;
            return level_hit(x);
          },
          threads);
      const double p = samples ? static_cast<double>(hits) / samples : 0.0;
      out.estimate.value = vol * p;
      out.estimate.std_error =
          samples ? vol * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples) : 0.0;
      return out;
    }
    case MeasureKind::SurfaceHausdorff: {
      const double znorm = std::sqrt(kernels::norm2(z));
      if (1.0 - znorm >= r_s) return out;  // the sphere misses B(z, r_s); measure 0
      // cap {x in S: |x - z| < r_s} = {x . zhat > t_min}
      double t_min = -1.0;
      if (znorm > 1e-14) t_min = (1.0 + znorm * znorm - r_s * r_s) / (2.0 * znorm);
      const double sigma = cap_measure(n, t_min);
      const double u_max = 1.0 - std::max(t_min, -1.0);
      const std::uint64_t hits = mc_hits(
          seed, samples,
          [&](Rng &rng) {
            thread_local std::vector<double> x, w;
            x.resize(n);
            w.resize(n);
            // cap-uniform: u = 1 - t with density (u(2-u))^{(n-3)/2}
            double u;
            for (;;) {
              u = u_max * std::pow(rng.u01(), 2.0 / (n - 1.0));
              const double accept = std::pow(0.5 * (2.0 - u), 0.5 * (n - 3.0));
              if (rng.u01() <= accept) break;
            }
            const double t = 1.0 - u;
            // direction: zhat when z != 0, else e_n
            thread_local std::vector<double> zhat;
            zhat.assign(z.begin(), z.end());
            double zn = std::sqrt(kernels::norm2(zhat));
            if (zn < 1e-14) {
              std::fill(zhat.begin(), zhat.end(), 0.0);
              zhat[n - 1] = 1.0;
              zn = 1.0;
            }
            for (auto &c : zhat) c /= zn;
            rng.unit_vector(w);
            double wd = kernels::dot(w, zhat);
            double wn2 = 0.0;
            for (int i = 0; i < n; ++i) {
              w[i] -= wd * zhat[i];
              wn2 += w[i] * w[i];
            }
            if (wn2 < 1e-28) return false;  // measure-zero degenerate draw
            const double scale = std::sqrt((1.0 - t * t) / wn2);
            for (int i = 0; i < n; ++i) x[i] = t * zhat[i] + scale * w[i];
            return level_hit(x);
          },
          threads);
      const double p = samples ? static_cast<double>(hits) / samples : 0.0;
      out.estimate.value = sigma * p;
      out.estimate.std_error =
          samples ? sigma * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples) : 0.0;
      return out;
    }
    case MeasureKind::LambdaRegularTest: {
      const int k = measure.slice_dim;
      const double volk = ball_volume(k, r_s);
      const std::uint64_t hits = mc_hits(
          seed, samples,
          [&](Rng &rng) {
            thread_local std::vector<double> x, xs;
            x.assign(n, 0.0);
            xs.resize(k);
            rng.ball_point(xs);
            double nx2 = 0.0;
            for (int i = 0; i < k; ++i) {
              x[i] = z[i] + r_s * xs[i];
              nx2 += x[i] * x[i];
            }
            if (nx2 > 1.0) return false;
            return level_hit(x);
          },
          threads);
      const double p = samples ? static_cast<double>(hits) / samples : 0.0;
      out.estimate.value = volk * p;
      out.estimate.std_error =
          samples ? volk * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples) : 0.0;
      return out;
    }
  }
  return out;
}

double fit_asymptotic_constant(std::span<const double> x, int n,
                               std::span<const double> s_grid,
                               std::uint64_t samples, std::uint64_t seed,
                               double h_hat, int threads) {
  if (s_grid.size() < 3)
    throw InvalidArgument("fit_asymptotic_constant: need at least 3 grid points");
  const auto [lo, hi] = std::minmax_element(s_grid.begin(), s_grid.end());
  if (*hi / *lo < 99.0)
    throw InvalidArgument("fit_asymptotic_constant: s-grid must span two decades");
  const double beta = static_cast<double>(n) / (n - 2.0);
  double acc = 0.0;
  std::uint64_t used = 0;
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    const auto est = lambda1(s_grid[i], x, n, samples, seed + i, h_hat, threads);
    if (est.estimate.value <= 0.0) continue;
    acc += std::log(est.estimate.value) + beta * std::log(s_grid[i]);
    ++used;
  }
  if (used == 0) throw DomainError("fit_asymptotic_constant: empty level sets");
  return std::exp(acc / static_cast<double>(used));
}

MCEstimate region_volume(const geometry::RegionSpec &spec, std::uint64_t samples,
                         std::uint64_t seed, int threads) {
  const auto enc = geometry::region_enclosure(spec);
  const int n = spec.n;
  if (enc.radius <= 0.0) return MCEstimate{0.0, 0.0, samples, seed};
  const double vol = ball_volume(n, enc.radius);
  const std::uint64_t hits = mc_hits(
      seed, samples,
      [&](Rng &rng) {
        thread_local std::vector<double> y;
        y.resize(n);
        rng.ball_point(y);
        for (auto &c : y) c *= enc.radius;
        y[0] += enc.center1;
        return geometry::in_region(spec, y);
      },
      threads);
  const double p = samples ? static_cast<double>(hits) / samples : 0.0;
  MCEstimate est;
  est.value = vol * p;
  est.std_error = samples ? vol * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples) : 0.0;
  est.samples = samples;
  est.seed = seed;
  return est;
}

MCEstimate union_volume_ED(double theta, int n, std::uint64_t samples,
                           std::uint64_t seed, int threads) {
  const geometry::RegionSpec eSpec{geometry::RegionTag::E, n, theta, 0.0};
  const geometry::RegionSpec dSpec{geometry::RegionTag::D, n, theta, 0.0};
  const auto encE = geometry::region_enclosure(eSpec);
  const auto encD = geometry::region_enclosure(dSpec);
  const double volE = ball_volume(n, encE.radius);
  const double volD = ball_volume(n, encD.radius);
  const double vtot = volE + volD;

  const auto moments = mc_moments(
      seed, samples,
      [&](Rng &rng) {
        thread_local std::vector<double> y;
        y.resize(n);
        const bool fromE = rng.u01() * vtot < volE;
        const auto &enc = fromE ? encE : encD;
        rng.ball_point(y);
        for (auto &c : y) c *= enc.radius;
        y[0] += enc.center1;
        if (!(geometry::in_region(eSpec, y) || geometry::in_region(dSpec, y))) return 0.0;
        // multiplicity of y across the two proposal balls
        int mult = 0;
        double d1 = kernels::norm2(y) - 2.0 * y[0] * encE.center1 + encE.center1 * encE.center1;
        if (d1 <= encE.radius * encE.radius) ++mult;
        double d2 = kernels::norm2(y) - 2.0 * y[0] * encD.center1 + encD.center1 * encD.center1;
        if (d2 <= encD.radius * encD.radius) ++mult;
        return vtot / std::max(mult, 1);
      },
      threads);
  MCEstimate est;
  est.value = moments.mean();
  est.std_error = moments.std_error();
  est.samples = samples;
  est.seed = seed;
  return est;
}

}  // namespace mtlab::levelsets
