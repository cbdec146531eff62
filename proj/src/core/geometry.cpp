#include "geometry.hpp"

#include <cmath>

#include "fastmath.hpp"

namespace mtlab::geometry {

namespace {

double sq(double v) { return v * v; }

double norm2_shifted(std::span<const double> y, double shift1) {
  // |y + shift1 * e1|^2
  double acc = sq(y[0] + shift1);
  for (std::size_t i = 1; i < y.size(); ++i) acc += sq(y[i]);
  return acc;
}

}  // namespace

double vol_g_closed(int n) {
  if (n < 3) throw UnsupportedDimension("vol_g_closed: n must be >= 3");
  const double nn = n;
  const double e = nn / (nn - 2.0);
  const double lg = 0.5 * (nn - 1.0) * std::log(M_PI) - std::log(nn) +
                    e * std::log(2.0 * nn - 4.0) + log_gamma(0.5 + e) -
                    log_gamma(0.5 * nn + e);
  return std::exp(lg);
}

Constants constants(int n) {
  if (n < 3) throw UnsupportedDimension("constants: n must be >= 3");
  Constants c;
  c.n = n;
  const double nn = n;
  c.omega = sphere_surface(n - 1);
  c.c_n = 1.0 / ((nn - 2.0) * c.omega);
  c.vol_ball = c.omega / nn;
  c.vol_g = vol_g_closed(n);
  const double cpow = std::pow(c.c_n, -nn / (nn - 2.0));
  c.alpha = (n <= 4) ? cpow / c.vol_ball : cpow / c.vol_g;
  c.theta0 = 0.5 * (std::pow(2.0 * nn - 4.0, 1.0 / (nn - 2.0)) - 1.0);
  c.theta1 = 1.0 / std::sqrt(2.0 * nn - 4.0);
  c.theta00 = 0.5 * (std::sqrt(1.0 + 2.0 / (nn - 2.0)) - 1.0);
  return c;
}

double vol_g_spherical(int n, int order) {
  if (n < 3) throw UnsupportedDimension("vol_g_spherical: n must be >= 3");
  const double nn = n;
  const double e = nn / (nn - 2.0);
  // t = sin(u) removes the (1-t^2)^{(n-3)/2} endpoint singularity
  const auto rule = gauss_interval(0.0, 0.5 * M_PI, order);
  const double integral = rule.integrate([&](std::span<const double> u) {
    const double s = std::sin(u[0]);
    const double cu = std::cos(u[0]);
    return std::pow(s * s, e) * std::pow(cu, nn - 2.0);
  });
  return sphere_surface(n - 2) / nn * std::pow(2.0 * nn - 4.0, e) * integral;
}

double profile_h(double v) { return 1.0 - v * v; }

double profile_f(double v, int n) {
  if (v < 0.0) throw DomainError("profile_f: v must be nonnegative");
  const double nn = n;
  return std::pow(2.0 * nn - 4.0, 2.0 / nn) * std::pow(v, 4.0 / nn) - v * v;
}

double phi_b(double b, double theta, int n) {
  const double nn = n;
  return std::pow(1.0 + 4.0 * theta * b, nn / 4.0) -
         std::sqrt(2.0 * nn - 4.0) * (b + theta);
}

double psi(double z, int n) {
  if (z < 0.0) throw DomainError("psi: z must be nonnegative");
  if (n < 4) throw UnsupportedDimension("psi: n must be >= 4");
  const double nn = n;
  return std::pow(1.0 + 2.0 * z / (nn - 2.0), nn / 2.0) - z * z - z;
}

double F_theta(double theta, int n) {
  const double nn = n;
  return std::pow(2.0, -2.0 / (nn - 1.0)) * profile_f(theta, n);
}

double dF_theta(double theta, int n) {
  const double nn = n;
  return std::pow(2.0, -2.0 / (nn - 1.0)) *
         (std::pow(2.0 * nn - 4.0, 2.0 / nn) * (4.0 / nn) * std::pow(theta, 4.0 / nn - 1.0) -
          2.0 * theta);
}

double q_theta(double theta, int n) {
  const double F = F_theta(theta, n);
  if (F > 1.0) throw DomainError("q_theta: 1 - F is negative");
  return theta + std::sqrt(1.0 - F);
}

void lambda_band(int n, double &lo, double &hi) {
  if (n < 13) throw UnsupportedDimension("lambda_band: n must be >= 13");
  if (n >= 66) {
    lo = 2.51;
    hi = 2.56;
  } else if (n >= 33) {
    lo = 2.56;
    hi = 2.61;
  } else if (n >= 21) {
    lo = 2.61;
    hi = 2.67;
  } else {
    lo = 2.67;
    hi = 2.79;
  }
}

BracketedRoot lambda_star(int n) {
  if (n < 13) throw UnsupportedDimension("lambda_star: n must be >= 13");
  double lo, hi;
  lambda_band(n, lo, hi);
  const auto g = [n](double lam) {
    return std::pow(1.0 + 2.0 * lam / (n - 2.0), n / 4.0) - 1.0 - lam;
  };
  BracketedRoot out;
  out.bracket = make_bracket(g, lo, hi);
  out.root = bisect_root(g, out.bracket, 1e-13);
  return out;
}

RegionTag region_tag_from_string(const std::string &tag) {
  if (tag == "Gn") return RegionTag::Gn;
  if (tag == "B") return RegionTag::B;
  if (tag == "G") return RegionTag::G;
  if (tag == "D") return RegionTag::D;
  if (tag == "D0") return RegionTag::D0;
  if (tag == "E") return RegionTag::E;
  if (tag == "Et") return RegionTag::Et;
  if (tag == "Bstar") return RegionTag::Bstar;
  throw InvalidArgument("unknown region tag: " + tag);
}

std::string region_tag_name(RegionTag tag) {
  switch (tag) {
    case RegionTag::Gn: return "Gn";
    case RegionTag::B: return "B";
    case RegionTag::G: return "G";
    case RegionTag::D: return "D";
    case RegionTag::D0: return "D0";
    case RegionTag::E: return "E";
    case RegionTag::Et: return "Et";
    case RegionTag::Bstar: return "Bstar";
  }
  return "?";
}

bool in_region(const RegionSpec &spec, std::span<const double> y) {
  const int n = spec.n;
  const double nn = n;
  const double th = spec.theta;
  const double y1 = y[0];

  switch (spec.tag) {
    case RegionTag::Gn: {
      if (y1 <= 0.0) return false;
      const double r2 = norm2_shifted(y, 0.0);
      return powhalf(r2, n) < (2.0 * nn - 4.0) * y1 * y1;
    }
    case RegionTag::B:
      return norm2_shifted(y, -th) <= 1.0;
    case RegionTag::G: {
      const double u = y1 + th;
      if (u < 0.0 || u > std::pow(2.0 * nn - 4.0, 1.0 / (nn - 2.0))) return false;
      const double r2 = norm2_shifted(y, th);
      return powhalf(r2, n) <= (2.0 * nn - 4.0) * u * u;
    }
    case RegionTag::D: {
      if (y1 < 0.0) return false;
      const double r2 = norm2_shifted(y, th);
      return powhalf(r2, n) <= (2.0 * nn - 4.0) * y1 * (y1 + th);
    }
    case RegionTag::D0: {
      if (y1 < 0.0) return false;
      const double p2 = norm2_shifted(y, th);   // |y + theta e1|^2
      const double m2 = norm2_shifted(y, -th);  // |y - theta e1|^2
      if (p2 == 0.0) return true;               // pole of the leading term
      if (m2 == 0.0) return false;
      const double lead = (1.0 + (2.0 * nn - 4.0) * y1 * (y1 + th) / p2) *
                          powhalf(p2, 2 - n);
      return lead - powhalf(m2, 2 - n) > 1.0;
    }
    case RegionTag::E:
    case RegionTag::Et: {
      if (y1 < 0.0) return false;
      const double t = (spec.tag == RegionTag::Et) ? spec.t : 0.0;
      // E(theta, t) from the blown-up kernel inequality; the expansion
      // constant multiplying t is fixed to 1 (regions certified against
      // the lemmas all use t = 0, where the constant drops out).
      const double m2 = norm2_shifted(y, -th);
      if (m2 == 0.0) return true;
      // |y + theta e1 - theta t y|^2
      const double a = 1.0 - th * t;
      double p2 = sq(a * y1 + th);
      for (std::size_t i = 1; i < y.size(); ++i) p2 += sq(a * y[i]);
      if (p2 == 0.0) return false;
      const double lead = (1.0 + t) * powhalf(m2, 2 - n);
      const double sub = (1.0 + (2.0 * nn - 4.0) * y1 * (y1 + th - th * t * y1) / p2) *
                         powhalf(p2, 2 - n);
      return lead - sub > 1.0;
    }
    case RegionTag::Bstar: {
      if (y1 < 0.0) return false;
      const double m2 = norm2_shifted(y, -th);
      return powhalf(m2, n) <= (2.0 * nn - 4.0) * th * y1;
    }
  }
  return false;
}

Enclosure region_enclosure(const RegionSpec &spec) {
  const double nn = spec.n;
  const double th = spec.theta;
  switch (spec.tag) {
    case RegionTag::Gn:
      return {0.0, std::pow(2.0 * nn - 4.0, 1.0 / (nn - 2.0))};
    case RegionTag::B:
      return {th, 1.0};
    case RegionTag::G:
      return {-th, std::pow(2.0 * nn - 4.0, 1.0 / (nn - 2.0))};
    case RegionTag::D:
      // |y+th e1|^n <= (2n-4) y1 (y1+th) <= (2n-4) |y+th e1|^2
      return {-th, std::pow(2.0 * nn - 4.0, 1.0 / (nn - 2.0))};
    case RegionTag::D0:
      // membership forces |y+th e1|^{n-2} < 1 + (2n-4) = 2n-3
      return {-th, std::pow(2.0 * nn - 3.0, 1.0 / (nn - 2.0))};
    case RegionTag::E:
      // F_theta(y) > 1 forces |y - th e1| < 1
      return {th, 1.0};
    case RegionTag::Et:
      return {th, std::pow(1.0 + spec.t, 1.0 / (nn - 2.0))};
    case RegionTag::Bstar: {
      // |y-th e1|^n <= (2n-4) th y1 <= (2n-4) th (|y-th e1| + th)
      const double c = (2.0 * nn - 4.0) * th;
      double r = 1.0;
      for (int i = 0; i < 80; ++i) r = std::pow(c * (r + th), 1.0 / nn);
      return {th, r * 1.0000001 + 1e-12};
    }
  }
  return {0.0, 0.0};
}

}  // namespace mtlab::geometry
