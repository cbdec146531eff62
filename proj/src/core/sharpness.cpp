#include "sharpness.hpp"

#include <algorithm>
#include <cmath>

#include "fastmath.hpp"
#include "kernels.hpp"
#include "operators.hpp"

namespace mtlab::sharpness {

namespace {

double ball_volume(int k, double r) {
  return sphere_surface(k - 1) / k * std::pow(r, k);
}

}  // namespace

double phi_m(const ExtremalFamily &fam, std::span<const double> z) {
  double k0;
  try {
    k0 = kernels::kernel_k0(fam.x0, z, fam.n);
  } catch (const SingularPoint &) {
    return 0.0;  // z = x0 lies inside the excluded super-level set
  }
  const double a = std::abs(k0);
  if (a > fam.m || a == 0.0) return 0.0;
  return k0 * std::pow(a, fam.beta() - 2.0);
}

FunctionalResult mt_functional(const Field &f, double alpha, int n,
                               const levelsets::MeasureSpec &measure,
                               const FunctionalOptions &opt) {
  const auto rule = ball_product_rule(n, opt.radial_order, opt.sphere_points, 0x6d74);
  const double p = 0.5 * n;  // L^{n/2}
  double norm_acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    norm_acc += rule.weight(i) * std::pow(std::abs(f(rule.node(i))), p);
  const double norm_f = std::pow(norm_acc, 1.0 / p);
  if (!(norm_f > 0.0)) throw InvalidArgument("mt_functional: input has zero norm");

  const double beta = n / (n - 2.0);
  const double mass = measure.total_mass();
  const auto moments = mc_moments(
      opt.seed, opt.x_samples,
      [&](Rng &rng) {
        thread_local std::vector<double> x;
        x.resize(n);
        switch (measure.kind) {
          case levelsets::MeasureKind::LebesgueBall:
            rng.ball_point(x);
            break;
          case levelsets::MeasureKind::SurfaceHausdorff:
            rng.unit_vector(x);
            break;
          case levelsets::MeasureKind::LambdaRegularTest: {
            std::fill(x.begin(), x.end(), 0.0);
            thread_local std::vector<double> xs;
            xs.resize(measure.slice_dim);
            rng.ball_point(xs);
            std::copy(xs.begin(), xs.end(), x.begin());
            break;
          }
        }
        const double tf = operators::apply_T(f, x, n, rule, opt.exclusion);
        return std::exp(alpha * std::pow(std::abs(tf) / norm_f, beta));
      },
      opt.threads);

  FunctionalResult out;
  out.alpha = alpha;
  out.norm_f = norm_f;
  out.measure = measure;
  out.value.value = mass * moments.mean();
  out.value.std_error = mass * moments.std_error();
  out.value.samples = opt.x_samples;
  out.value.seed = opt.seed;
  return out;
}

namespace {

// ---- radial fast path (x0 = 0, Lebesgue measure) ----

// K0(0, z) as a function of rho = |z|
double kappa_center(double rho, int n) {
  return powhalf(rho * rho, 2 - n) - 1.0 - 0.5 * (n - 2.0) * (1.0 - rho * rho);
}

double rho_cut(double m, int n) {
  const auto f = [&](double r) { return kappa_center(r, n) - m; };
  double lo = 1e-12;
  while (f(lo) < 0.0 && lo > 1e-300) lo *= 0.5;  // paranoid: kappa(lo) must exceed m
  return bisect_root(f, make_bracket(f, lo, 1.0), 1e-15);
}

// integrate g over [a,b] in log coordinates (u = log rho)
double log_integrate(const std::function<double(double)> &g, double a, double b,
                     int order = 160) {
  if (!(b > a)) return 0.0;
  const auto rule = gauss_interval(std::log(a), std::log(b), order);
  return rule.integrate([&](std::span<const double> u) {
    const double rho = std::exp(u[0]);
    return g(rho) * rho;
  });
}

struct RadialFamily {
  int n;
  double m;
  double rho_m;
  double vnorm;                 // ||Phi_m||_{beta'}^{beta'}
  std::vector<double> log_r;    // interpolation grid for T(r), log spacing
  std::vector<double> t_vals;   // T Phi_m at those radii (K-kernel units)
  double t_at0;

  double T(double r) const {
    if (r <= std::exp(log_r.front())) return t_at0;
    const double lr = std::log(std::min(r, 1.0));
    const double step = log_r[1] - log_r[0];
    const double pos = (lr - log_r.front()) / step;
    const std::size_t i =
        std::min(static_cast<std::size_t>(std::max(pos, 0.0)), log_r.size() - 2);
    const double w = std::clamp(pos - static_cast<double>(i), 0.0, 1.0);
    return (1.0 - w) * t_vals[i] + w * t_vals[i + 1];
  }
};

RadialFamily build_radial_family(int n, double m) {
  RadialFamily fam;
  fam.n = n;
  fam.m = m;
  fam.rho_m = rho_cut(m, n);
  const double beta = n / (n - 2.0);
  const double omega = sphere_surface(n - 1);
  const double inv_n2 = 1.0 / (n - 2.0);

  fam.vnorm = omega * log_integrate(
                          [&](double rho) {
                            return std::pow(rho, n - 1.0) *
                                   std::pow(kappa_center(rho, n), beta);
                          },
                          fam.rho_m, 1.0, 240);

  // T Phi_m(r) = int rho^{n-1} kappa^{beta-1} S(r, rho) drho with the exact
  // spherical average S(r, rho) = -(max(r,rho)^{2-n} - 1)/(n-2) + (1-rho^2)/2
  const auto t_of_r = [&](double r) {
    const auto body = [&](double rho) {
      const double mx = std::max(r, rho);
      const double S = -(powhalf(mx * mx, 2 - n) - 1.0) * inv_n2 +
                       0.5 * (1.0 - rho * rho);
      return std::pow(rho, n - 1.0) * std::pow(kappa_center(rho, n), beta - 1.0) * S;
    };
    if (r > fam.rho_m && r < 1.0)
      return log_integrate(body, fam.rho_m, r, 120) + log_integrate(body, r, 1.0, 120);
    return log_integrate(body, fam.rho_m, 1.0, 200);
  };

  const double lr_lo = std::log(fam.rho_m) - std::log(10.0);
  const int grid = 2400;
  fam.log_r.resize(grid);
  fam.t_vals.resize(grid);
  const double step = (0.0 - lr_lo) / (grid - 1);
  for (int i = 0; i < grid; ++i) {
    fam.log_r[i] = lr_lo + step * i;
    fam.t_vals[i] = t_of_r(std::exp(fam.log_r[i]));
  }
  fam.t_at0 = t_of_r(0.0);
  return fam;
}

// ---- boundary path: shared importance-sampled kernel representation ----

struct SampledFamily {
  int n;
  double m;
  Point x0;
  std::vector<double> zs;       // flat z samples
  std::vector<double> weights;  // 1/q(z) * Phi_m(z) premultiplied? kept separate
  std::vector<double> phis;
  double vnorm = 0.0;

  double T(std::span<const double> x) const {
    const std::size_t cnt = weights.size();
    double acc = 0.0;
    for (std::size_t j = 0; j < cnt; ++j) {
      if (phis[j] == 0.0) continue;
      const std::span<const double> z(zs.data() + j * n, static_cast<std::size_t>(n));
      const double d2 = kernels::dist2(x, z);
      if (d2 < 1e-26) continue;
      acc += weights[j] * kernels::kernel_k(x, z, n) * phis[j];
    }
    return acc / static_cast<double>(cnt);
  }
};

SampledFamily build_sampled_family(int n, const Point &x0, double m, double h_hat,
                                   std::uint64_t z_samples, std::uint64_t seed) {
  SampledFamily fam;
  fam.n = n;
  fam.m = m;
  fam.x0 = x0;
  const double beta = n / (n - 2.0);
  const double r_lo = 0.5 * std::pow(2.0 * h_hat / m, 1.0 / (n - 2.0));
  const double lognorm = std::log(2.0 / r_lo);
  const double omega = sphere_surface(n - 1);
  const double vol_ball = ball_volume(n, 1.0);

  Rng rng(seed, 0xfa01);
  std::vector<double> z(n), dir(n);
  fam.zs.reserve(z_samples * n);
  fam.weights.reserve(z_samples);
  fam.phis.reserve(z_samples);
  const ExtremalFamily ef{x0, m, n};
  for (std::uint64_t j = 0; j < z_samples; ++j) {
    const bool radial = (j & 1u) == 0;
    if (radial) {
      const double rho = r_lo * std::exp(rng.u01() * lognorm);
      rng.unit_vector(dir);
      double nz2 = 0.0;
      for (int k = 0; k < n; ++k) {
        z[k] = x0[k] + rho * dir[k];
        nz2 += z[k] * z[k];
      }
      if (nz2 >= 1.0) {  // outside the ball: contributes zero, keep the slot
        fam.zs.insert(fam.zs.end(), z.begin(), z.end());
        fam.weights.push_back(0.0);
        fam.phis.push_back(0.0);
        continue;
      }
    } else {
      rng.ball_point(z);
    }
    // mixture density: 0.5 log-radial (inside its shell) + 0.5 uniform
    double rho2 = kernels::dist2(z, x0);
    double q = 0.5 / vol_ball;
    if (rho2 > r_lo * r_lo && rho2 < 4.0) {
      q += 0.5 / (lognorm * omega * powhalf(rho2, n));
    }
    fam.zs.insert(fam.zs.end(), z.begin(), z.end());
    fam.weights.push_back(1.0 / q);
    fam.phis.push_back(phi_m(ef, z));
  }
  // ||Phi||_{beta'}^{beta'} from the same sample set
  double acc = 0.0;
  for (std::size_t j = 0; j < fam.weights.size(); ++j)
    if (fam.phis[j] != 0.0)
      acc += fam.weights[j] * std::pow(std::abs(fam.phis[j]), 0.5 * n);
  // |Phi|^{beta'} = |K0|^{(beta-1) beta'} = |K0|^{beta};  beta' = n/2
  fam.vnorm = acc / static_cast<double>(fam.weights.size());
  (void)beta;
  return fam;
}

}  // namespace

GrowthTable sharpness_experiment(int n, const Point &x0,
                                 std::span<const double> factors,
                                 std::span<const double> m_grid,
                                 const levelsets::MeasureSpec &measure,
                                 const ExperimentOptions &opt) {
  if (n < 3) throw UnsupportedDimension("sharpness_experiment: n must be >= 3");
  if (static_cast<int>(x0.size()) != n)
    throw InvalidArgument("sharpness_experiment: x0 has wrong dimension");
  GrowthTable table;
  table.n = n;
  table.x0 = x0;

  const auto cn = geometry::constants(n);
  const double beta = n / (n - 2.0);
  const double alpha_base = measure.lambda() / n * cn.alpha;
  const double c_n = cn.c_n;
  const bool radial_path = measure.kind == levelsets::MeasureKind::LebesgueBall &&
                           kernels::norm2(x0) < 1e-28;

  // per-factor accumulators for the slope fit
  std::vector<std::vector<double>> lnv(factors.size()), sig(factors.size());
  std::vector<double> lnm;

  for (std::size_t mi = 0; mi < m_grid.size(); ++mi) {
    const double m = m_grid[mi];
    lnm.push_back(std::log(m));

    // the m-dependent family evaluator: returns |T Phi_m| / ||Phi_m||_{beta'}
    std::function<double(std::span<const double>)> ratio;
    RadialFamily rad;
    SampledFamily smp;
    if (radial_path) {
      rad = build_radial_family(n, m);
      const double norm = std::pow(rad.vnorm, 2.0 / n);
      ratio = [rad = std::move(rad), c_n, norm](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return c_n * std::abs(rad.T(std::sqrt(r2))) / norm;
      };
    } else {
      smp = build_sampled_family(n, x0, m, opt.h_hat, opt.z_samples, opt.seed + mi);
      const double norm = std::pow(smp.vnorm, 2.0 / n);
      auto fam = std::make_shared<SampledFamily>(std::move(smp));
      ratio = [fam = std::move(fam), norm](std::span<const double> x) {
        return std::abs(fam->T(x)) / norm;
      };
    }

    // concentration radius for the measure sampler
    const double r_conc =
        std::min(0.9, 10.0 * std::pow(1.0 / m, 1.0 / (n - 2.0)));
    const double vol_ball_n = ball_volume(n, 1.0);
    const double vol_conc = ball_volume(n, r_conc);
    const double omega = sphere_surface(n - 1);
    const double log_lo = std::log(std::max(r_conc / 10.0, 1e-6));
    const double lognorm = std::log(2.0) - log_lo;
    const double cap_u_max = std::min(2.0, 0.5 * r_conc * r_conc);
    const double cap_mass = [&] {
      const auto rule = gauss_interval(0.0, cap_u_max, 64);
      return sphere_surface(n - 2) * rule.integrate([&](std::span<const double> uu) {
               return std::pow(uu[0] * (2.0 - uu[0]), 0.5 * (n - 3.0));
             });
    }();

    // draw x from the measure-adapted mixture; return (x, 1/q(x)) weight
    const auto draw_x = [&](Rng &rng, std::vector<double> &x) -> double {
      switch (measure.kind) {
        case levelsets::MeasureKind::LebesgueBall: {
          const double u = rng.u01();
          if (u < 0.5) {
            rng.ball_point(x);
          } else if (u < 0.75) {
            rng.ball_point(x);
            for (int k = 0; k < n; ++k) x[k] = x0[k] + r_conc * x[k];
          } else {
            const double rho = std::exp(log_lo + rng.u01() * lognorm);
            rng.unit_vector(x);
            for (int k = 0; k < n; ++k) x[k] = x0[k] + rho * x[k];
          }
          double nx2 = kernels::norm2(x);
          if (nx2 > 1.0) return 0.0;  // outside the ball: nu-integrand zero
          double q = 0.5 / vol_ball_n;
          const double d2 = kernels::dist2(x, x0);
          if (d2 < r_conc * r_conc) q += 0.25 / vol_conc;
          if (d2 > std::exp(2.0 * log_lo) && d2 < 4.0)
            q += 0.25 / (lognorm * omega * powhalf(d2, n));
          return 1.0 / q;
        }
        case levelsets::MeasureKind::SurfaceHausdorff: {
          // mixture of uniform sphere and a cap around x0 (x0 on sphere)
          const bool in_cap = rng.u01() < 0.5;
          const double u_max = std::min(2.0, 0.5 * r_conc * r_conc);
          if (in_cap) {
            double u;
            for (;;) {
              u = u_max * std::pow(rng.u01(), 2.0 / (n - 1.0));
              if (rng.u01() <= std::pow(0.5 * (2.0 - u), 0.5 * (n - 3.0))) break;
            }
            const double t = 1.0 - u;
            thread_local std::vector<double> w;
            w.resize(n);
            rng.unit_vector(w);
            double wd = kernels::dot(w, x0);
            double wn2 = 0.0;
            for (int k = 0; k < n; ++k) {
              w[k] -= wd * x0[k];
              wn2 += w[k] * w[k];
            }
            if (wn2 < 1e-28) return 0.0;
            const double scale = std::sqrt((1.0 - t * t) / wn2);
            for (int k = 0; k < n; ++k) x[k] = t * x0[k] + scale * w[k];
          } else {
            rng.unit_vector(x);
          }
          // cap density relative to surface measure
          const double t = kernels::dot(x, x0);
          const double u = 1.0 - t;
          double q = 0.5 / omega;
          if (u < u_max && u > 0.0) {
            // cap sampler density: p(u) du over the cap, uniform on the slice
            const double capmass = [&] {
              const auto rule = gauss_interval(0.0, u_max, 64);
              return sphere_surface(n - 2) *
                     rule.integrate([&](std::span<const double> uu) {
                       return std::pow(uu[0] * (2.0 - uu[0]), 0.5 * (n - 3.0));
                     });
            }();
            q += 0.5 / capmass;
          }
          return 1.0 / q;
        }
        case levelsets::MeasureKind::LambdaRegularTest: {
          std::fill(x.begin(), x.end(), 0.0);
          thread_local std::vector<double> xs;
          xs.resize(measure.slice_dim);
          rng.ball_point(xs);
          std::copy(xs.begin(), xs.end(), x.begin());
          return measure.total_mass();  // plain sampling: weight = mass
        }
      }
      return 0.0;
    };

    for (std::size_t fi = 0; fi < factors.size(); ++fi) {
      const double alpha = factors[fi] * alpha_base;
      const auto moments = mc_moments(
          opt.seed + 131 * mi, opt.x_samples,
          [&](Rng &rng) {
            thread_local std::vector<double> x;
            x.resize(n);
            const double w = draw_x(rng, x);
            if (w == 0.0) return 0.0;
            const double rr = ratio(x);
            return w * std::exp(alpha * std::pow(rr, beta));
          },
          opt.threads);
      GrowthCell cell;
      cell.factor = factors[fi];
      cell.m = m;
      // mixture weights already integrate the measure; for Lebesgue and
      // surface the weight w carries the full mass normalization
      const double mass_scale =
          measure.kind == levelsets::MeasureKind::LambdaRegularTest ? 1.0 : 1.0;
      cell.value = mass_scale * moments.mean();
      cell.std_error = mass_scale * moments.std_error();
      table.cells.push_back(cell);
      if (cell.value > 0.0) {
        lnv[fi].push_back(std::log(cell.value));
        sig[fi].push_back(cell.std_error / cell.value);
      }
    }
  }

  for (std::size_t fi = 0; fi < factors.size(); ++fi) {
    if (lnv[fi].size() != lnm.size()) continue;
    const auto fit = weighted_line_fit(lnm, lnv[fi], sig[fi]);
    table.slopes.push_back({factors[fi], fit.slope, fit.slope_stderr});
  }
  return table;
}

}  // namespace mtlab::sharpness
