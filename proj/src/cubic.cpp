#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rdrho/errors.hpp"
#include "rdrho/mle.hpp"

namespace rdrho {

namespace {

// Leading coefficients below this fraction of the largest are treated as 0.
constexpr double kDegenerate = 1e-12;

// A few Newton steps, kept only while they reduce the residual.
double polish(const CubicCoeffs& c, double x) {
  double fx = c(x);
  for (int i = 0; i < 4 && fx != 0.0; ++i) {
    const double slope = (3.0 * c.a * x + 2.0 * c.b) * x + c.c;
    if (slope == 0.0) break;
    const double next = x - fx / slope;
    const double fn = c(next);
    if (!(std::abs(fn) < std::abs(fx))) break;
    x = next;
    fx = fn;
  }
  return x;
}

std::vector<double> quadratic_roots(double a, double b, double c, double scale) {
  std::vector<double> roots;
  if (std::abs(a) <= kDegenerate * scale) {
    if (std::abs(b) > kDegenerate * scale) roots.push_back(-c / b);
    return roots;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return roots;
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q != 0.0) {
    roots.push_back(q / a);
    roots.push_back(c / q);
  } else {
    roots.push_back(0.0);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

double CubicCoeffs::max_abs() const {
  return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

CubicCoeffs cubic_coeffs(const FrequencyTable& t, std::size_t g, double rho) {
  const auto& m = t.bilateral[g];
  const auto& n = t.unilateral[g];
  const double m0 = static_cast<double>(m[0]);
  const double m1 = static_cast<double>(m[1]);
  const double m2 = static_cast<double>(m[2]);
  const double n0 = static_cast<double>(n[0]);
  const double n1 = static_cast<double>(n[1]);
  const double m_tot = m0 + m1 + m2;
  const double n_tot = n0 + n1;
  CubicCoeffs c;
  c.a = (1.0 - rho) * (1.0 - rho) * (2.0 * m_tot + n_tot);
  c.b = (1.0 - rho) * ((3.0 * rho - 2.0) * m0 + 3.0 * (rho - 1.0) * m1 + (3.0 * rho - 4.0) * m2 +
                       (rho - 1.0) * n0 + 2.0 * (rho - 1.0) * n1);
  c.c = rho * (rho - 2.0) * m0 + (rho * (rho - 4.0) + 1.0) * m1 + (rho * (rho - 4.0) + 2.0) * m2 +
        (rho * (rho - 3.0) + 1.0) * n1 - rho * n0;
  c.d = rho * (m1 + m2 + n1);
  return c;
}

double cubic_root(const CubicCoeffs& c) {
  const double scale = c.max_abs();
  if (!(c.a > kDegenerate * scale)) {
    throw CubicFallbackRequired("leading coefficient is not positive");
  }
  const double d0 = c.b * c.b - 3.0 * c.a * c.c;
  const double d1 = 2.0 * c.b * c.b * c.b - 9.0 * c.a * c.b * c.c + 27.0 * c.a * c.a * c.d;
  if (!(d0 > 0.0)) throw CubicFallbackRequired("b^2 - 3ac is not positive");
  double arg = -d1 / (2.0 * d0 * std::sqrt(d0));
  if (std::abs(arg) > 1.0 + 1e-12) throw CubicFallbackRequired("arccos argument outside [-1, 1]");
  arg = std::clamp(arg, -1.0, 1.0);
  const double theta = std::acos(arg);
  const double x =
      (-c.b + 2.0 * std::sqrt(d0) * std::cos(theta / 3.0 - 2.0 * std::numbers::pi / 3.0)) / (3.0 * c.a);
  return polish(c, x);
}

std::vector<double> real_cubic_roots(const CubicCoeffs& c) {
  const double scale = c.max_abs();
  if (scale == 0.0) return {};
  if (std::abs(c.a) <= kDegenerate * scale) {
    auto roots = quadratic_roots(c.b, c.c, c.d, scale);
    for (double& r : roots) r = polish(c, r);
    return roots;
  }
  std::vector<double> roots;
  const double d0 = c.b * c.b - 3.0 * c.a * c.c;
  const double d1 = 2.0 * c.b * c.b * c.b - 9.0 * c.a * c.b * c.c + 27.0 * c.a * c.a * c.d;
  const double arg = d0 > 0.0 ? -d1 / (2.0 * d0 * std::sqrt(d0)) : 0.0;
  if (d0 > 0.0 && std::abs(arg) <= 1.0 + 1e-12) {
    const double theta = std::acos(std::clamp(arg, -1.0, 1.0));
    for (int k = 0; k < 3; ++k) {
      const double angle = theta / 3.0 - 2.0 * std::numbers::pi * k / 3.0;
      roots.push_back((-c.b + 2.0 * std::sqrt(d0) * std::cos(angle)) / (3.0 * c.a));
    }
  } else {
    // One real root (Cardano), choosing the branch that avoids cancellation.
    const double disc = d1 * d1 - 4.0 * d0 * d0 * d0;
    const double s = std::sqrt(std::max(disc, 0.0));
    const double big = std::cbrt(0.5 * (d1 + (d1 >= 0.0 ? s : -s)));
    const double x = big == 0.0 ? -c.b / (3.0 * c.a) : -(c.b + big + d0 / big) / (3.0 * c.a);
    roots.push_back(x);
  }
  for (double& r : roots) r = polish(c, r);
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace rdrho
