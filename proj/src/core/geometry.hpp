#pragma once

#include <span>
#include <string>

#include "numerics.hpp"

namespace mtlab::geometry {

// Per-dimension constants bundle.  alpha is the sharp exponential constant:
// c_n^{-n/(n-2)} / |B_n| for n = 3,4 and c_n^{-n/(n-2)} / |G_n| for n >= 5.
struct Constants {
  int n = 0;
  double omega = 0.0;  // |S^{n-1}|
  double c_n = 0.0;    // 1/((n-2) omega)
  double vol_ball = 0.0;
  double vol_g = 0.0;
  double alpha = 0.0;
  double theta0 = 0.0;   // (1/2)[(2n-4)^{1/(n-2)} - 1]
  double theta1 = 0.0;   // (2n-4)^{-1/2}
  double theta00 = 0.0;  // (1/2)[(1 + 2/(n-2))^{1/2} - 1]
};

Constants constants(int n);

// |G_n| by the closed Gamma-ratio form.
double vol_g_closed(int n);

// |G_n| by the one-dimensional spherical reduction
//   (omega_{n-2}/n) (2n-4)^{n/(n-2)} int_0^1 t^{2n/(n-2)} (1-t^2)^{(n-3)/2} dt
// evaluated with a Gauss rule under t = sin(u).
double vol_g_spherical(int n, int order = 200);

// Generatrix profiles of G(theta) and B(theta):
//   h(v) = 1 - v^2,   f(v) = (2n-4)^{2/n} v^{4/n} - v^2  (v >= 0)
double profile_h(double v);
double profile_f(double v, int n);

// phi(b, theta) = (1 + 4 theta b)^{n/4} - sqrt(2n-4) (b + theta);
// its sign decides h(b-theta) vs f(b+theta).
double phi_b(double b, double theta, int n);

// psi(z) = (1 + 2z/(n-2))^{n/2} - z^2 - z, the positivity function behind
// D(theta) subset B(theta) for theta >= theta1.
double psi(double z, int n);

// F(theta) = 2^{-2/(n-1)} f(theta) and q(theta) = theta + sqrt(1 - F).
double F_theta(double theta, int n);
double dF_theta(double theta, int n);  // analytic derivative of F
double q_theta(double theta, int n);

struct BracketedRoot {
  RootBracket bracket;
  double root = 0.0;
};

// The unique positive root of (1 + 2 lambda/(n-2))^{n/4} - 1 - lambda,
// bracketed by sign evaluations at the dimensional band edges.
BracketedRoot lambda_star(int n);

// Published localization band for lambda_star(n), n >= 13.
void lambda_band(int n, double &lo, double &hi);

enum class RegionTag { Gn, B, G, D, D0, E, Et, Bstar };

RegionTag region_tag_from_string(const std::string &tag);
std::string region_tag_name(RegionTag tag);

// Tagged membership description of the Step-6 regions.  theta applies to
// every tag but Gn; t only to Et.  All tags except B and G carry the
// y1 >= 0 restriction (points reachable from the ball under the blow-up
// change of variables satisfy it; without it D(0) would grow a mirror blob
// outside G(0)).
struct RegionSpec {
  RegionTag tag = RegionTag::Gn;
  int n = 3;
  double theta = 0.0;
  double t = 0.0;
};

bool in_region(const RegionSpec &spec, std::span<const double> y);

// Elementary enclosure ball(center = offset * e1, radius) containing the
// region, derived from the region's own defining inequality only.  Used as
// the sampling proposal for counterexample searches and union volumes.
struct Enclosure {
  double center1 = 0.0;  // e1 coordinate of the ball center
  double radius = 0.0;
};

Enclosure region_enclosure(const RegionSpec &spec);

}  // namespace mtlab::geometry
