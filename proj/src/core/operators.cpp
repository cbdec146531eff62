#include "operators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

#include "kernels.hpp"

namespace mtlab::operators {

double HarmonicPolynomial::operator()(std::span<const double> x) const {
  double acc = 0.0;
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    double term = coeffs[m];
    const auto &pw = powers[m];
    for (std::size_t i = 0; i < pw.size(); ++i) {
      for (int k = 0; k < pw[i]; ++k) term *= x[i];
    }
    acc += term;
  }
  return acc;
}

namespace {

void enumerate_monomials(int n, int degree, std::vector<int> &current, int pos,
                         int remaining, std::vector<std::vector<int>> &out) {
  if (pos == n - 1) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    current[pos] = k;
    enumerate_monomials(n, degree, current, pos + 1, remaining - k, out);
  }
}

std::vector<std::vector<int>> monomials(int n, int degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(n, 0);
  enumerate_monomials(n, degree, current, 0, degree, out);
  return out;
}

// homogeneous harmonics of one degree: nullspace of the Laplacian acting on
// monomial coefficients
std::vector<HarmonicPolynomial> harmonics_of_degree(int n, int d) {
  const auto mono = monomials(n, d);
  std::vector<HarmonicPolynomial> out;
  if (d <= 1) {  // constants and coordinates are harmonic as they stand
    for (const auto &pw : mono) {
      HarmonicPolynomial p;
      p.degree = d;
      p.coeffs = {1.0};
      p.powers = {pw};
      out.push_back(std::move(p));
    }
    return out;
  }
  const auto target = monomials(n, d - 2);
  std::map<std::vector<int>, int> target_index;
  for (std::size_t i = 0; i < target.size(); ++i) target_index[target[i]] = static_cast<int>(i);

  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(target.size()),
                                            static_cast<Eigen::Index>(mono.size()));
  for (std::size_t j = 0; j < mono.size(); ++j) {
    for (int i = 0; i < n; ++i) {
      if (mono[j][i] < 2) continue;
      auto reduced = mono[j];
      reduced[i] -= 2;
      L(target_index.at(reduced), static_cast<Eigen::Index>(j)) +=
          mono[j][i] * (mono[j][i] - 1.0);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeFullV);
  const auto &sv = svd.singularValues();
  const double tol = 1e-10 * (sv.size() ? sv(0) : 1.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol) ++rank;
  const Eigen::MatrixXd V = svd.matrixV();
  for (Eigen::Index j = rank; j < V.cols(); ++j) {
    HarmonicPolynomial p;
    p.degree = d;
    for (std::size_t m = 0; m < mono.size(); ++m) {
      const double c = V(static_cast<Eigen::Index>(m), j);
      if (std::abs(c) < 1e-14) continue;
      p.coeffs.push_back(c);
      p.powers.push_back(mono[m]);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

HarmonicBasis harmonic_basis(int n, int max_degree) {
  if (n < 2) throw UnsupportedDimension("harmonic_basis: n must be >= 2");
  if (max_degree < 0 || max_degree > 4)
    throw InvalidArgument("harmonic_basis: degree capped at 4");
  HarmonicBasis basis;
  basis.n = n;
  basis.max_degree = max_degree;
  for (int d = 0; d <= max_degree; ++d) {
    auto block = harmonics_of_degree(n, d);
    for (auto &p : block) basis.members.push_back(std::move(p));
  }
  return basis;
}

namespace {

double pole_correction(double fx, double r2, double delta, int n) {
  // Newtonian potential of the excluded delta-ball at squared distance r2
  // from its center (interior form; equals -delta^2/(2(n-2)) at the center)
  return fx * (r2 / (2.0 * n) - delta * delta / (2.0 * (n - 2.0)));
}

}  // namespace

double apply_T(const Field &f, std::span<const double> x, int n,
               const QuadratureRule &rule, double delta) {
  if (!(delta > 0.0) || delta >= 0.5)
    throw InvalidArgument("apply_T: exclusion radius must lie in (0, 0.5)");
  const double d2min = delta * delta;
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto z = rule.node(i);
    if (kernels::dist2(x, z) <= d2min) continue;
    acc += rule.weight(i) * kernels::kernel_k(x, z, n) * f(z);
  }
  if (std::sqrt(kernels::norm2(x)) < 1.0 - delta)
    acc += pole_correction(f(x), 0.0, delta, n);
  return acc;
}

double apply_T_laplacian_fd(const Field &f, std::span<const double> x, int n,
                            const QuadratureRule &rule, double delta, double h) {
  if (2.0 * h >= delta)
    throw InvalidArgument("apply_T_laplacian_fd: need h << exclusion radius");
  double xnorm2 = kernels::norm2(x);
  if (1.0 - std::sqrt(xnorm2) <= delta + 2.0 * h)
    throw DomainError("apply_T_laplacian_fd: point too close to the boundary");
  const double fx = f(x);
  const double d2min = delta * delta;
  // fixed exclusion set, smooth in the evaluation point
  std::vector<std::size_t> keep;
  keep.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i)
    if (kernels::dist2(x, rule.node(i)) > d2min) keep.push_back(i);

  const auto eval = [&](std::span<const double> y) {
    double acc = 0.0;
    for (auto i : keep)
      acc += rule.weight(i) * kernels::kernel_k(y, rule.node(i), n) * f(rule.node(i));
    return acc + pole_correction(fx, kernels::dist2(x, y), delta, n);
  };

  thread_local std::vector<double> y;
  y.assign(x.begin(), x.end());
  const double center = eval(y);
  double lap = 0.0;
  for (int i = 0; i < n; ++i) {
    const double xi = y[i];
    y[i] = xi + h;
    const double up = eval(y);
    y[i] = xi - h;
    const double dn = eval(y);
    y[i] = xi;
    lap += up + dn - 2.0 * center;
  }
  return lap / (h * h);
}

double apply_bergman_projection(const Field &f, std::span<const double> x, int n,
                                const QuadratureRule &rule) {
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto y = rule.node(i);
    acc += rule.weight(i) * kernels::bergman(x, y, n) * f(y);
  }
  return acc;
}

std::vector<Point> default_test_points(int n, int count, double max_radius,
                                       std::uint64_t seed) {
  std::vector<Point> pts;
  pts.reserve(count);
  Rng rng(seed, 0x7e57);
  Point p(n);
  for (int i = 0; i < count; ++i) {
    rng.ball_point(p);
    for (auto &c : p) c *= max_radius;
    pts.push_back(p);
  }
  return pts;
}

SolverReport verify_canonical_solution(const Field &f, int n,
                                       const HarmonicBasis &basis,
                                       std::span<const Point> test_points,
                                       const SolverOptions &opt) {
  const auto rule = ball_product_rule(n, opt.radial_order, opt.sphere_points, opt.rule_seed);
  SolverReport report;
  report.quadrature = "ball r" + std::to_string(opt.radial_order) + " x s" +
                      std::to_string(opt.sphere_points) + " delta " +
                      std::to_string(opt.exclusion);
  report.test_points.assign(test_points.begin(), test_points.end());

  for (const auto &x : test_points) {
    const double lap = apply_T_laplacian_fd(f, x, n, rule, opt.exclusion, opt.fd_step);
    report.max_poisson_residual =
        std::max(report.max_poisson_residual, std::abs(lap - f(x)));
  }

  // orthogonality on a coarser outer rule; Tf evaluated once per node
  const auto outer = ball_product_rule(n, 24, 512, opt.rule_seed + 1);
  std::vector<double> tf(outer.size());
  parallel_for(outer.size(), [&](std::uint64_t i) {
    tf[i] = apply_T(f, outer.node(i), n, rule, opt.exclusion);
  });
  double tf_norm2 = 0.0;
  for (std::size_t i = 0; i < outer.size(); ++i)
    tf_norm2 += outer.weight(i) * tf[i] * tf[i];
  const double tf_norm = std::sqrt(std::max(tf_norm2, 1e-300));
  for (const auto &h : basis.members) {
    double inner = 0.0, h_norm2 = 0.0;
    for (std::size_t i = 0; i < outer.size(); ++i) {
      const double hv = h(outer.node(i));
      inner += outer.weight(i) * tf[i] * hv;
      h_norm2 += outer.weight(i) * hv * hv;
    }
    const double defect = std::abs(inner) / (tf_norm * std::sqrt(h_norm2));
    report.max_orthogonality_defect = std::max(report.max_orthogonality_defect, defect);
  }
  return report;
}

double kernel_orthogonality_defect(std::span<const double> z, int n,
                                   const HarmonicBasis &basis,
                                   const QuadratureRule &rule, double delta) {
  const double d2min = delta * delta;
  const double c_n = 1.0 / ((n - 2.0) * sphere_surface(n - 1));
  double worst = 0.0;
  std::vector<double> kv(rule.size(), 0.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const auto x = rule.node(i);
    if (kernels::dist2(x, z) <= d2min) continue;
    kv[i] = kernels::kernel_k(x, z, n);
  }
  for (const auto &h : basis.members) {
    double inner = 0.0, absval = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      if (kv[i] == 0.0) continue;
      const double t = rule.weight(i) * kv[i] * h(rule.node(i));
      inner += t;
      absval += std::abs(t);
    }
    // excluded Newtonian mass, weighted by h at the pole
    const double corr = -h(z) * c_n * sphere_surface(n - 1) * delta * delta / 2.0;
    inner += corr;
    absval += std::abs(corr);
    if (absval > 0.0) worst = std::max(worst, std::abs(inner) / absval);
  }
  return worst;
}

}  // namespace mtlab::operators
