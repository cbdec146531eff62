#include "certify.hpp"

#include <algorithm>
#include <cmath>

#include "fastmath.hpp"
#include "kernels.hpp"
#include "levelsets.hpp"

namespace mtlab::certify {

namespace {

using geometry::RegionSpec;
using geometry::RegionTag;

double kfun(double t) {
  return std::pow(2.0, -1.0 + 2.0 * t) * std::pow(t * t + 2.0, 1.0 - t) *
         std::pow(t + 2.0, t) / ((t * t + t + 1.0) * (t * t + 1.0));
}

Certificate make(const std::string &id, int n_lo, int n_hi) {
  Certificate c;
  c.claim_id = id;
  c.n_lo = n_lo;
  c.n_hi = n_hi;
  c.worst_margin = std::numeric_limits<double>::infinity();
  c.status = CertStatus::Pass;
  return c;
}

void push_margin(Certificate &c, const std::string &label, double margin) {
  c.evidence.push_back({label, margin});
  c.worst_margin = std::min(c.worst_margin, margin);
  if (!(margin > 0.0)) c.status = CertStatus::Fail;
}

}  // namespace

std::vector<double> default_theta_grid(int points) {
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = static_cast<double>(i) / (points - 1);
  return grid;
}

Certificate certify_prop10(int n_max, int grid) {
  if (n_max < 5) throw InvalidArgument("certify_prop10: n_max must be >= 5");
  Certificate c = make("Prop10", 3, n_max);

  const auto c3 = geometry::constants(3);
  const auto c4 = geometry::constants(4);
  push_margin(c, "volB3_gt_volG3", c3.vol_ball - c3.vol_g);
  push_margin(c, "volB4_eq_volG4", 1e-12 - std::abs(c4.vol_ball - c4.vol_g));
  double worst_gap = std::numeric_limits<double>::infinity();
  for (int n = 5; n <= n_max; ++n) {
    const auto cn = geometry::constants(n);
    worst_gap = std::min(worst_gap, cn.vol_g - cn.vol_ball);
  }
  push_margin(c, "volG_gt_volB_5_to_nmax", worst_gap);

  push_margin(c, "K0_eq_1", 1e-14 - std::abs(kfun(0.0) - 1.0));
  push_margin(c, "K1_eq_1", 1e-14 - std::abs(kfun(1.0) - 1.0));

  // H'' < 0 on (0,1) by centered second differences of H = log K
  const double h = 1.0 / (grid + 1);
  double worst_h2 = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= grid; ++i) {
    const double t = i * h;
    const double h2 =
        (std::log(kfun(t + h)) - 2.0 * std::log(kfun(t)) + std::log(kfun(t - h))) /
        (h * h);
    worst_h2 = std::max(worst_h2, h2);
  }
  push_margin(c, "Hsecond_neg", -worst_h2);
  return c;
}

Certificate check_kershaw(int n_max) {
  Certificate c = make("Kershaw", 5, n_max);
  double worst1 = std::numeric_limits<double>::infinity();
  double worst2 = worst1;
  for (int n = 5; n <= n_max; ++n) {
    const double t = 2.0 / (n - 2.0);
    // log-domain margin of Gamma(x+1)/Gamma(x+lambda) > (x + lambda/2)^{1-lambda}
    const auto lmargin = [](double x, double lambda) {
      return log_gamma(x + 1.0) - log_gamma(x + lambda) -
             (1.0 - lambda) * std::log(x + 0.5 * lambda);
    };
    worst1 = std::min(worst1, lmargin(1.0 / t, t));
    worst2 = std::min(worst2, lmargin(0.5 + t, 1.0 - t));
  }
  push_margin(c, "first_application", worst1);
  push_margin(c, "second_application", worst2);
  // degenerate lambda -> 1 limit: margin collapses to 0 from above
  const double eps = 1e-6;
  const double edge = log_gamma(2.5) - log_gamma(1.5 + (1.0 - eps)) -
                      eps * std::log(1.5 + 0.5 * (1.0 - eps));
  c.evidence.push_back({"lambda_to_1_margin", edge});
  return c;
}

Certificate certify_psi(int n_max, double z_max, int grid) {
  Certificate c = make("Psi", 4, n_max);
  double worst = std::numeric_limits<double>::infinity();
  for (int n = 4; n <= n_max; ++n)
    for (int i = 0; i <= grid; ++i)
      worst = std::min(worst, geometry::psi(z_max * i / grid, n));
  push_margin(c, "psi_positive", worst);
  return c;
}

IntersectionReport find_intersections(double theta, int n) {
  if (n < 4) throw UnsupportedDimension("find_intersections: n must be >= 4");
  if (theta < 0.0 || theta > 1.0)
    throw InvalidArgument("find_intersections: theta must lie in [0,1]");
  const auto cn = geometry::constants(n);
  const double outerG = std::pow(2.0 * n - 4.0, 1.0 / (n - 2.0));
  const double b_hi = std::min(1.0 + theta, outerG - theta);
  const auto phi = [&](double b) { return geometry::phi_b(b, theta, n); };
  const double scale = std::max(1.0, std::abs(phi(b_hi)));

  IntersectionReport rep;
  if (theta < cn.theta0) {
    if (n == 5 && theta > cn.theta1) {
      rep.kind = IntersectionReport::Kind::None;  // phi < 0 on the whole range
      return rep;
    }
    const double cap = theta > 0.0
                           ? std::min(1.0 / (theta * (2.0 * n - 4.0)), 1.0 + theta)
                           : 1.0 + theta;
    rep.kind = IntersectionReport::Kind::Single;
    rep.b1 = bisect_root(phi, make_bracket(phi, 0.0, cap), 1e-13);
    return rep;
  }
  if (theta <= cn.theta1 && n >= 6) {
    const double mid = 1.0 / (theta * (2.0 * n - 4.0));
    rep.kind = IntersectionReport::Kind::Two;
    if (std::abs(phi(0.0)) <= 1e-12 * scale) {
      rep.b1 = 0.0;  // theta = theta1 contact
    } else {
      rep.b1 = bisect_root(phi, make_bracket(phi, 0.0, mid), 1e-13);
    }
    const double top = outerG - theta;
    if (std::abs(phi(top)) <= 1e-12 * scale) {
      rep.b2 = top;  // theta = theta0 contact, b2 = 1 + theta0
    } else {
      rep.b2 = bisect_root(phi, make_bracket(phi, mid, top), 1e-13);
    }
    return rep;
  }
  // theta above both transition values: boundaries no longer meet over the
  // shared b-range (D and E already live inside B there)
  rep.kind = IntersectionReport::Kind::None;
  return rep;
}

Certificate certify_intersections(int n, int theta_grid) {
  Certificate c = make("Lemma17", n, n);
  const auto cn = geometry::constants(n);
  const double outerG = std::pow(2.0 * n - 4.0, 1.0 / (n - 2.0));

  // below theta0: a single contact under both caps
  double worst_resid = std::numeric_limits<double>::infinity();
  double worst_cap = worst_resid;
  for (int i = 1; i < theta_grid; ++i) {
    const double theta = cn.theta0 * i / theta_grid;
    if (n == 5 && theta > cn.theta1) continue;
    const auto rep = find_intersections(theta, n);
    if (rep.kind != IntersectionReport::Kind::Single) {
      push_margin(c, "single_root_missing", -1.0);
      continue;
    }
    worst_resid =
        std::min(worst_resid, 1e-10 - std::abs(geometry::phi_b(rep.b1, theta, n)));
    const double cap = std::min(1.0 / (theta * (2.0 * n - 4.0)), 1.0 + theta);
    worst_cap = std::min(worst_cap, std::min(rep.b1, cap - rep.b1));
  }
  push_margin(c, "single_root_residual", worst_resid);
  push_margin(c, "single_root_in_range", worst_cap);

  if (n == 5) {
    // theta1 < theta < theta0: no intersections, phi < 0 throughout
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 1; i < theta_grid; ++i) {
      const double theta = cn.theta1 + (cn.theta0 - cn.theta1) * i / theta_grid;
      const double b_hi = std::min(1.0 + theta, outerG - theta);
      for (int j = 0; j <= 50; ++j)
        worst = std::min(worst, -geometry::phi_b(b_hi * j / 50.0, theta, n));
    }
    push_margin(c, "no_intersection_band", worst);
  }

  if (n >= 6) {
    double worst_resid2 = std::numeric_limits<double>::infinity();
    double worst_order = worst_resid2;
    for (int i = 0; i <= theta_grid; ++i) {
      const double theta = cn.theta0 + (cn.theta1 - cn.theta0) * i / theta_grid;
      const auto rep = find_intersections(theta, n);
      if (rep.kind != IntersectionReport::Kind::Two) {
        push_margin(c, "two_roots_missing", -1.0);
        continue;
      }
      const double mid = 1.0 / (theta * (2.0 * n - 4.0));
      worst_resid2 = std::min(
          {worst_resid2, 1e-10 - std::abs(geometry::phi_b(rep.b1, theta, n)),
           1e-10 - std::abs(geometry::phi_b(rep.b2, theta, n))});
      worst_order = std::min({worst_order, mid - rep.b1, rep.b2 - mid,
                              outerG - theta - rep.b2 + 1e-15,
                              1.0 + theta - (outerG - theta) + 1e-15});
    }
    push_margin(c, "two_roots_residual", worst_resid2);
    push_margin(c, "two_roots_ordering", worst_order);
    // contact identities at the band edges
    const auto at0 = find_intersections(cn.theta0, n);
    const auto at1 = find_intersections(cn.theta1, n);
    push_margin(c, "b2_at_theta0_eq_1_plus_theta0",
                1e-10 - std::abs(at0.b2 - (1.0 + cn.theta0)));
    push_margin(c, "b1_at_theta1_eq_0", 1e-10 - std::abs(at1.b1));
  }
  return c;
}

namespace {

struct InclusionClaim {
  std::string id;
  RegionSpec subset;        // proposal comes from its enclosure
  RegionSpec superset;      // tag ignored when empty_check
  bool empty_check = false; // subset must be empty
  double y1_lo = -1e300;    // optional slab restriction on the subset
  double y1_hi = 1e300;
};

Certificate run_inclusion(const InclusionClaim &claim, int n,
                          std::span<const double> thetas, std::uint64_t samples,
                          std::uint64_t seed, int threads) {
  Certificate c = make(claim.id, n, n);
  for (std::size_t ti = 0; ti < thetas.size(); ++ti) {
    RegionSpec sub = claim.subset;
    RegionSpec sup = claim.superset;
    sub.theta = thetas[ti];
    sup.theta = thetas[ti];
    const auto enc = geometry::region_enclosure(sub);
    if (enc.radius <= 0.0) continue;
    struct Cell {
      std::uint64_t inside = 0, violations = 0;
    };
    const std::uint64_t nchunks = (samples + kMcChunk - 1) / kMcChunk;
    std::vector<Cell> partial(nchunks);
    parallel_for(
        nchunks,
        [&](std::uint64_t ch) {
          Rng rng(seed + ti, 0x1c1 + ch);
          const std::uint64_t lo = ch * kMcChunk;
          const std::uint64_t len = std::min<std::uint64_t>(kMcChunk, samples - lo);
          std::vector<double> y(n);
          Cell cell;
          for (std::uint64_t i = 0; i < len; ++i) {
            rng.ball_point(y);
            for (auto &v : y) v *= enc.radius;
            y[0] += enc.center1;
            if (y[0] < claim.y1_lo || y[0] > claim.y1_hi) continue;
            if (!geometry::in_region(sub, y)) continue;
            ++cell.inside;
            if (claim.empty_check || !geometry::in_region(sup, y)) ++cell.violations;
          }
          partial[ch] = cell;
        },
        threads);
    std::uint64_t inside = 0, violations = 0;
    for (const auto &cell : partial) {
      inside += cell.inside;
      violations += cell.violations;
    }
    c.evidence.push_back({"theta=" + std::to_string(thetas[ti]) + "_hits",
                          static_cast<double>(inside)});
    const double margin =
        violations == 0 ? 1.0 : -static_cast<double>(violations);
    if (!(margin > 0.0)) c.status = CertStatus::Fail;
    c.worst_margin = std::min(c.worst_margin, margin);
  }
  if (c.evidence.empty()) c.evidence.push_back({"empty_grid", 0.0});
  return c;
}

}  // namespace

std::vector<Certificate> certify_inclusions(int n, std::span<const double> theta_grid,
                                            std::uint64_t samples, std::uint64_t seed,
                                            int threads) {
  if (n < 3) throw UnsupportedDimension("certify_inclusions: n must be >= 3");
  const auto cn = geometry::constants(n);
  std::vector<Certificate> out;
  std::vector<double> all(theta_grid.begin(), theta_grid.end());

  const auto select = [&](double lo, double hi) {
    std::vector<double> grid;
    for (double t : all)
      if (t >= lo && t <= hi) grid.push_back(t);
    return grid;
  };

  const RegionSpec E{RegionTag::E, n, 0.0, 0.0};
  const RegionSpec D{RegionTag::D, n, 0.0, 0.0};
  const RegionSpec B{RegionTag::B, n, 0.0, 0.0};
  const RegionSpec G{RegionTag::G, n, 0.0, 0.0};
  const RegionSpec Bstar{RegionTag::Bstar, n, 0.0, 0.0};

  out.push_back(run_inclusion({"Lemma15-EsubB", E, B}, n, all, samples, seed, threads));
  out.push_back(run_inclusion({"Lemma15-DsubG", D, G}, n, all, samples, seed, threads));
  out.push_back(
      run_inclusion({"Lemma18-EsubBstar", E, Bstar}, n, all, samples, seed, threads));

  if (n == 3) {
    const auto high = select(std::nextafter(0.5, 1.0), 1.0);
    InclusionClaim dempty{"Lemma16-Dempty3", D, D};
    dempty.empty_check = true;
    out.push_back(run_inclusion(dempty, n, high, samples, seed, threads));
    // E(theta) within the 2/3-ball around theta e1 for theta <= 1/2:
    // encode the target ball through a scaled B-tag in dimension n with
    // radius 2/3 via a slab-free custom check below.
    Certificate ball23 = make("Lemma18-E3ball23", n, n);
    for (double theta : select(0.0, 0.5)) {
      RegionSpec sub = E;
      sub.theta = theta;
      const auto enc = geometry::region_enclosure(sub);
      std::uint64_t inside = 0, violations = 0;
      const std::uint64_t nchunks = (samples + kMcChunk - 1) / kMcChunk;
      std::vector<std::pair<std::uint64_t, std::uint64_t>> partial(nchunks, {0, 0});
      parallel_for(
          nchunks,
          [&](std::uint64_t ch) {
            Rng rng(seed + static_cast<std::uint64_t>(theta * 1e6), 0x1c2 + ch);
            const std::uint64_t lo = ch * kMcChunk;
            const std::uint64_t len = std::min<std::uint64_t>(kMcChunk, samples - lo);
            std::vector<double> y(n);
            std::uint64_t in = 0, bad = 0;
            for (std::uint64_t i = 0; i < len; ++i) {
              rng.ball_point(y);
              for (auto &v : y) v *= enc.radius;
              y[0] += enc.center1;
              if (!geometry::in_region(sub, y)) continue;
              ++in;
              double d2 = (y[0] - theta) * (y[0] - theta);
              for (int k = 1; k < n; ++k) d2 += y[k] * y[k];
              if (d2 > (2.0 / 3.0) * (2.0 / 3.0)) ++bad;
            }
            partial[ch] = {in, bad};
          },
          threads);
      for (const auto &cell : partial) {
        inside += cell.first;
        violations += cell.second;
      }
      ball23.evidence.push_back(
          {"theta=" + std::to_string(theta) + "_hits", static_cast<double>(inside)});
      const double margin = violations == 0 ? 1.0 : -static_cast<double>(violations);
      if (!(margin > 0.0)) ball23.status = CertStatus::Fail;
      ball23.worst_margin = std::min(ball23.worst_margin, margin);
    }
    out.push_back(std::move(ball23));
  }

  if (n >= 4) {
    out.push_back(run_inclusion({"Lemma16-DsubB", D, B}, n, select(cn.theta1, 1.0),
                                samples, seed, threads));
    out.push_back(run_inclusion(
        {"Lemma18-EsubG", E, G}, n,
        select(0.0, std::nextafter(cn.theta0, 0.0)), samples, seed, threads));
    // E(theta) cap {y1 theta (2n-4) <= 1} subset G(theta), all theta
    Certificate cap = make("Lemma18-EcapSubG", n, n);
    for (double theta : all) {
      InclusionClaim cl{"Lemma18-EcapSubG", E, G};
      if (theta > 0.0) cl.y1_hi = 1.0 / (theta * (2.0 * n - 4.0));
      std::vector<double> single{theta};
      const auto sub = run_inclusion(cl, n, single, samples, seed, threads);
      for (const auto &e : sub.evidence) cap.evidence.push_back(e);
      cap.worst_margin = std::min(cap.worst_margin, sub.worst_margin);
      if (!sub.passed()) cap.status = CertStatus::Fail;
    }
    out.push_back(std::move(cap));
  }

  if (n >= 6) {
    for (double theta : select(cn.theta0, cn.theta1)) {
      const auto rep = find_intersections(theta, n);
      if (rep.kind != IntersectionReport::Kind::Two) continue;
      std::vector<double> single{theta};
      InclusionClaim b57{"Lemma17-band57", G, B};
      b57.y1_lo = 0.0;
      b57.y1_hi = rep.b1;
      InclusionClaim b58{"Lemma17-band58", B, G};
      b58.y1_lo = rep.b1;
      b58.y1_hi = rep.b2;
      InclusionClaim b59{"Lemma17-band59", G, B};
      b59.y1_lo = rep.b2;
      b59.y1_hi = 1.0 + theta;
      for (const auto &cl : {b57, b58, b59})
        out.push_back(run_inclusion(cl, n, single, samples, seed, threads));
    }
  }
  return out;
}

Certificate certify_union_budget(int n, std::span<const double> theta_grid,
                                 std::uint64_t samples, std::uint64_t seed,
                                 int threads) {
  Certificate c = make("Cor19-union", n, n);
  const auto cn = geometry::constants(n);
  const double bound = n <= 4 ? cn.vol_ball : cn.vol_g;
  for (double theta : theta_grid) {
    const auto est = levelsets::union_volume_ED(theta, n, samples, seed, threads);
    const double margin = bound + 3.0 * est.std_error - est.value;
    c.evidence.push_back({"theta=" + std::to_string(theta) + "_vol", est.value});
    c.worst_margin = std::min(c.worst_margin, margin);
    if (!(margin > 0.0)) c.status = CertStatus::Fail;
  }
  return c;
}

namespace {

double integrate_gauss(const std::function<double(double)> &f, double a, double b,
                       int order = 200) {
  if (!(b > a)) return 0.0;
  const auto rule = gauss_interval(a, b, order);
  return rule.integrate([&](std::span<const double> x) { return f(x[0]); });
}

double band_power(double base, double expo) {
  return base <= 0.0 ? 0.0 : std::pow(base, expo);
}

}  // namespace

double lemma20_j(int n) {
  const auto root = geometry::lambda_star(n);
  const double lam = root.root;
  const double nn = n;
  const double tn4 = 2.0 * nn - 4.0;
  const double U = std::pow(tn4, 0.5 + 1.0 / (nn - 2.0));
  const auto fbody = [&](double x) {
    return std::pow(x, 2.0 - 2.0 / nn) *
           band_power(1.0 - std::pow(x, 2.0 - 4.0 / nn) / tn4, 0.5 * (nn - 1.0));
  };
  const auto hbody = [&](double x) {
    return band_power(1.0 - x * x / tn4, 0.5 * (nn - 1.0));
  };
  return integrate_gauss(fbody, 0.0, 1.0) + integrate_gauss(fbody, lam + 1.0, U) -
         integrate_gauss(hbody, lam - 1.0, std::sqrt(tn4));
}

double lemma20_j_lower(int n1, int n2, double mu1, double mu2) {
  const double m1 = n1;
  const double t1 = 2.0 * m1 - 4.0;
  if (n2 <= 0) {
    // asymptotic band: n2 -> infinity
    const auto first = [&](double x) {
      return x * x * band_power(1.0 - std::pow(x, 2.0 - 4.0 / m1) / t1, 0.5 * (m1 - 1.0));
    };
    const auto second = [&](double x) {
      return std::pow(x, 2.0 - 2.0 / m1) * band_power(1.0 - x * x / t1, 0.5 * (m1 - 1.0));
    };
    const double tail = std::sqrt(M_PI) * std::erfc(0.5 * (mu1 - 1.0));
    return integrate_gauss(first, 0.0, 1.0) +
           integrate_gauss(second, mu2 + 1.0, std::sqrt(t1)) - tail;
  }
  const double m2 = n2;
  const double t2 = 2.0 * m2 - 4.0;
  const auto first = [&](double x) {
    return std::pow(x, 2.0 - 2.0 / m2) *
           band_power(1.0 - std::pow(x, 2.0 - 4.0 / m1) / t1, 0.5 * (m1 - 1.0));
  };
  const auto second = [&](double x) {
    return std::pow(x, 2.0 - 2.0 / m1) *
           band_power(1.0 - std::pow(x, 2.0 - 4.0 / m2) / t1, 0.5 * (m1 - 1.0));
  };
  const auto third = [&](double x) {
    return band_power(1.0 - x * x / t2, 0.5 * (m2 - 1.0));
  };
  return integrate_gauss(first, 0.0, 1.0) +
         integrate_gauss(second, mu2 + 1.0, std::sqrt(t1)) -
         integrate_gauss(third, mu1 - 1.0, std::sqrt(t2));
}

Certificate certify_lemma20(int n, int v_grid) {
  if (n < 6) throw UnsupportedDimension("certify_lemma20: n must be >= 6");
  Certificate c = make("Lemma20", n, n);
  const auto cn = geometry::constants(n);
  const double nn = n;

  // (i) psi positivity over the working z-range
  double psi_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 500; ++i)
    psi_min = std::min(psi_min, geometry::psi(50.0 * i / 500.0, n));
  push_margin(c, "psi_positive", psi_min);

  // (ii) lambda_n band bracketing, n >= 13
  if (n >= 13) {
    const auto root = geometry::lambda_star(n);
    c.evidence.push_back({"lambda_n", root.root});
    push_margin(c, "lambda_band_lo", root.root - root.bracket.lo);
    push_margin(c, "lambda_band_hi", root.bracket.hi - root.root);
  }

  // (iii)-(iv) V(theta) curve and the V' sign identity
  const double w = sphere_surface(n - 2) / (nn - 1.0);
  std::vector<double> thetas(v_grid), V(v_grid), Vp(v_grid);
  const auto fpow = [&](double v) {
    return band_power(geometry::profile_f(v, n), 0.5 * (nn - 1.0));
  };
  const auto hpow = [&](double v) {
    return band_power(geometry::profile_h(v), 0.5 * (nn - 1.0));
  };
  for (int i = 0; i < v_grid; ++i) {
    const double theta = cn.theta0 + (cn.theta1 - cn.theta0) * i / (v_grid - 1.0);
    thetas[i] = theta;
    const auto rep = find_intersections(theta, n);
    const double b2 = rep.kind == IntersectionReport::Kind::Two ? rep.b2 : 1.0 + theta;
    V[i] = w * (integrate_gauss(fpow, theta, b2 + theta) +
                integrate_gauss(hpow, b2 - theta, 1.0));
    Vp[i] = 2.0 * hpow(b2 - theta) - fpow(theta);  // proportional to V'
  }
  // at most one sign change, minus to plus
  bool seen_positive = false;
  double order_margin = 1.0;
  for (int i = 0; i < v_grid; ++i) {
    if (Vp[i] > 0.0) seen_positive = true;
    if (seen_positive && Vp[i] < 0.0) order_margin = std::min(order_margin, Vp[i]);
  }
  push_margin(c, "Vprime_single_minimum", order_margin);
  if (n <= 12) {
    double worst = -std::numeric_limits<double>::infinity();
    for (double v : Vp) worst = std::max(worst, v);
    push_margin(c, "Vprime_negative_n_le_12", -worst);
  }

  // (v) phi(theta) = phi_b(q(theta), theta): increasing, negative at theta0
  std::vector<double> phi(v_grid);
  for (int i = 0; i < v_grid; ++i)
    phi[i] = geometry::phi_b(geometry::q_theta(thetas[i], n), thetas[i], n);
  double diff_min = std::numeric_limits<double>::infinity();
  for (int i = 1; i < v_grid; ++i) diff_min = std::min(diff_min, phi[i] - phi[i - 1]);
  push_margin(c, "phi_increasing", diff_min);
  push_margin(c, "phi_at_theta0_negative", -phi.front());
  if (n <= 12) {
    push_margin(c, "phi_at_theta1_negative", -phi.back());
  } else {
    c.evidence.push_back({"phi_at_theta1_recorded", phi.back()});
  }

  // (vi) J(n) > 0 for n >= 13
  if (n >= 13) {
    const double j = lemma20_j(n);
    push_margin(c, "J_positive", j);
  }

  // (vii) the final budget V <= |G_n|
  double budget = std::numeric_limits<double>::infinity();
  for (double v : V) budget = std::min(budget, cn.vol_g - v);
  push_margin(c, "V_le_volG", budget);
  return c;
}

Certificate certify_claim(int n, int grid) {
  if (n < 6) throw UnsupportedDimension("certify_claim: n must be >= 6");
  Certificate c = make("Claim", n, n);
  const auto cn = geometry::constants(n);
  const double h = (cn.theta1 - cn.theta0) * 1e-6;
  double qp_max = -std::numeric_limits<double>::infinity();
  double qpp_min = std::numeric_limits<double>::infinity();
  double cond81_min = qpp_min;
  for (int i = 0; i <= grid; ++i) {
    const double theta = cn.theta0 + (cn.theta1 - cn.theta0) * i / grid;
    const double qp =
        (geometry::q_theta(theta + h, n) - geometry::q_theta(theta - h, n)) / (2.0 * h);
    qp_max = std::max(qp_max, qp);
    qpp_min = std::min(qpp_min, geometry::q_theta(theta, n) + theta * qp);
    cond81_min = std::min(cond81_min,
                          2.0 * (1.0 - geometry::F_theta(theta, n)) -
                              theta * geometry::dF_theta(theta, n));
  }
  if (n >= 9) {
    push_margin(c, "qprime_negative", -qp_max);
  } else {
    c.evidence.push_back({"qprime_max_recorded", qp_max});
  }
  push_margin(c, "q_plus_theta_qprime_positive", qpp_min);
  push_margin(c, "suff_cond_81", cond81_min);
  return c;
}

Certificate check_hormander(int n, std::span<const double> m_grid,
                            std::uint64_t samples, std::uint64_t seed, double h_hat,
                            int threads) {
  if (n < 4) throw UnsupportedDimension("check_hormander: n must be >= 4");
  Certificate c = make("Hormander", n, n);
  const double omega = sphere_surface(n - 1);

  std::vector<double> lnm, v83, v84, v85, s83, s84, s85;
  double ratio86_sup = 0.0;

  for (std::size_t mi = 0; mi < m_grid.size(); ++mi) {
    const double m = m_grid[mi];
    const double r_m = std::pow(2.0 * h_hat / m, 1.0 / (n - 2.0));
    // probe points within r_m/10 of e1, inside the closed ball
    std::vector<Point> xs;
    for (double cfrac : {0.05, 0.025}) {
      Point x(n, 0.0);
      x[0] = 1.0 - cfrac * r_m;
      xs.push_back(x);
    }
    {
      Point x(n, 0.0);  // tilted probe
      x[0] = 1.0 - r_m / 30.0;
      x[1] = r_m / 30.0;
      double nx = 0.0;
      for (double v : x) nx += v * v;
      if (nx > 1.0)
        for (auto &v : x) v /= std::sqrt(nx);
      xs.push_back(x);
    }

    double w83 = 0.0, w84 = 0.0, w85 = 0.0, e83 = 0.0, e84 = 0.0, e85 = 0.0;
    for (std::size_t xi = 0; xi < xs.size(); ++xi) {
      const auto &x = xs[xi];
      double dxe = 0.0;
      {
        Point e1(n, 0.0);
        e1[0] = 1.0;
        dxe = std::sqrt(kernels::dist2(x, e1));
      }
      const double lognorm = std::log(2.0 / r_m);
      const std::uint64_t nchunks = (samples + kMcChunk - 1) / kMcChunk;
      std::vector<McMoments> m83(nchunks), m84(nchunks), m85(nchunks);
      std::vector<double> sup86(nchunks, 0.0);
      parallel_for(
          nchunks,
          [&](std::uint64_t ch) {
            Rng rng(seed + mi * 977 + xi, 0xb0 + ch);
            const std::uint64_t lo = ch * kMcChunk;
            const std::uint64_t len = std::min<std::uint64_t>(kMcChunk, samples - lo);
            std::vector<double> z(n), dir(n);
            Point e1(n, 0.0);
            e1[0] = 1.0;
            McMoments a, b, cc;
            double sup = 0.0;
            for (std::uint64_t i = 0; i < len; ++i) {
              // log-radial proposal around e1 on [r_m, 2]
              const double rho = r_m * std::exp(rng.u01() * lognorm);
              rng.unit_vector(dir);
              double nz2 = 0.0;
              for (int k = 0; k < n; ++k) {
                z[k] = e1[k] + rho * dir[k];
                nz2 += z[k] * z[k];
              }
              double i83 = 0.0, i84 = 0.0, i85 = 0.0;
              if (nz2 <= 1.0) {
                const double weight = lognorm * omega * powhalf(rho * rho, n);
                const double dez2 = kernels::dist2(e1, z);
                const double dxz2 = kernels::dist2(x, z);
                const double qx2 = 1.0 - 2.0 * kernels::dot(x, z) +
                                   kernels::norm2(x) * kernels::norm2(z);
                const double base = powhalf(dez2, 2 - n);
                const double w2 = 1.0 / dez2;
                i83 = std::abs(powhalf(dxz2, 2 - n) - base) * w2 * weight;
                i84 = std::abs(powhalf(qx2, 2 - n) - base) * w2 * weight;
                i85 = std::abs(kernels::asymptotic_g(x, z, n) -
                               kernels::asymptotic_g(e1, z, n)) *
                      powhalf(dez2, -n) * weight;
                const double denom = dxe * powhalf(dez2, -(n + 1));
                if (denom > 0.0)
                  sup = std::max(sup, std::abs(powhalf(dxz2, 2 - n) - base) * w2 / denom);
              }
              a.sum += i83;
              a.sum_sq += i83 * i83;
              b.sum += i84;
              b.sum_sq += i84 * i84;
              cc.sum += i85;
              cc.sum_sq += i85 * i85;
            }
            a.count = b.count = cc.count = len;
            m83[ch] = a;
            m84[ch] = b;
            m85[ch] = cc;
            sup86[ch] = sup;
          },
          threads);
      McMoments t83, t84, t85;
      for (std::size_t ch = 0; ch < nchunks; ++ch) {
        t83.sum += m83[ch].sum;
        t83.sum_sq += m83[ch].sum_sq;
        t83.count += m83[ch].count;
        t84.sum += m84[ch].sum;
        t84.sum_sq += m84[ch].sum_sq;
        t84.count += m84[ch].count;
        t85.sum += m85[ch].sum;
        t85.sum_sq += m85[ch].sum_sq;
        t85.count += m85[ch].count;
        ratio86_sup = std::max(ratio86_sup, sup86[ch]);
      }
      if (t83.mean() > w83) {
        w83 = t83.mean();
        e83 = t83.std_error();
      }
      if (t84.mean() > w84) {
        w84 = t84.mean();
        e84 = t84.std_error();
      }
      if (t85.mean() > w85) {
        w85 = t85.mean();
        e85 = t85.std_error();
      }
    }
    lnm.push_back(std::log(m));
    v83.push_back(w83);
    s83.push_back(e83);
    v84.push_back(w84);
    s84.push_back(e84);
    v85.push_back(w85);
    s85.push_back(e85);
    c.evidence.push_back({"m=" + std::to_string(m) + "_I83", w83});
    c.evidence.push_back({"m=" + std::to_string(m) + "_I84", w84});
    c.evidence.push_back({"m=" + std::to_string(m) + "_I85", w85});
  }

  const auto slope_margin = [&](std::span<const double> vals,
                                std::span<const double> sig) {
    const auto fit = weighted_line_fit(lnm, vals, sig);
    return 2.0 * fit.slope_stderr - std::abs(fit.slope);
  };
  push_margin(c, "I83_no_trend", slope_margin(v83, s83));
  push_margin(c, "I84_no_trend", slope_margin(v84, s84));
  push_margin(c, "I85_no_trend", slope_margin(v85, s85));

  const double bound86 = (n - 2.0) * std::pow(10.0 / 9.0, n - 1.0);
  push_margin(c, "pointwise_86", bound86 - ratio86_sup);
  return c;
}

}  // namespace mtlab::certify
