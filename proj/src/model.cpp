#include "rdrho/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rdrho/errors.hpp"

namespace rdrho {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// count * log(p) with 0 * log(0) = 0.
double xlogp(Count count, double p) {
  if (count == 0) return 0.0;
  if (!(p > 0.0)) return kNegInf;
  return static_cast<double>(count) * std::log(p);
}

// count / denom with a zero count contributing nothing.
double xdiv(Count count, double denom) {
  return count == 0 ? 0.0 : static_cast<double>(count) / denom;
}

void require_interior(const GammaParams& g, const char* what) {
  if (!is_admissible(g)) {
    throw DomainError(std::string(what) + " requires strictly interior parameters (delta=" +
                      std::to_string(g.delta) + ", pi1=" + std::to_string(g.pi1) +
                      ", rho=" + std::to_string(g.rho) + ")");
  }
}

}  // namespace

double rho_lower_bound(double pi) {
  return std::max(-pi / (1.0 - pi), -(1.0 - pi) / pi);
}

double rho_lower_bound(double pi1, double pi2) {
  return std::max(rho_lower_bound(pi1), rho_lower_bound(pi2));
}

CellProbs raw_cell_probs(double pi, double rho) {
  CellProbs c;
  c.p2 = pi * (pi + (1.0 - pi) * rho);
  c.p1 = 2.0 * pi * (1.0 - pi) * (1.0 - rho);
  c.p0 = (1.0 - pi) * (1.0 - pi + pi * rho);
  return c;
}

bool is_admissible(double pi, double rho) {
  if (!(pi > 0.0 && pi < 1.0) || !(rho < 1.0)) return false;
  const CellProbs c = raw_cell_probs(pi, rho);
  return c.p0 > 0.0 && c.p1 > 0.0 && c.p2 > 0.0;
}

bool is_admissible(const BetaParams& b) { return is_admissible(b.pi1, b.rho) && is_admissible(b.pi2, b.rho); }

bool is_admissible(const GammaParams& g) { return is_admissible(to_beta(g)); }

CellProbs cell_probs(double pi, double rho) {
  if (!(pi >= 0.0 && pi <= 1.0)) {
    throw DomainError("probability pi=" + std::to_string(pi) + " outside [0, 1]");
  }
  if (!std::isfinite(rho)) throw DomainError("correlation rho is not finite");
  const CellProbs c = raw_cell_probs(pi, rho);
  if (c.p1 < 0.0) {
    throw DomainError("cell p1 (one organ cured) negative: rho=" + std::to_string(rho) + " exceeds 1");
  }
  if (c.p2 < 0.0) {
    throw DomainError("cell p2 (both organs cured) negative: rho=" + std::to_string(rho) +
                      " below -pi/(1-pi) for pi=" + std::to_string(pi));
  }
  if (c.p0 < 0.0) {
    throw DomainError("cell p0 (no organ cured) negative: rho=" + std::to_string(rho) +
                      " below -(1-pi)/pi for pi=" + std::to_string(pi));
  }
  return c;
}

double group_loglik(const FrequencyTable& t, std::size_t g, double pi, double rho) {
  if (!(pi >= 0.0 && pi <= 1.0) || !(rho <= 1.0)) return kNegInf;
  const CellProbs c = raw_cell_probs(pi, rho);
  if (c.p0 < 0.0 || c.p1 < 0.0 || c.p2 < 0.0) return kNegInf;
  const auto& m = t.bilateral[g];
  const auto& n = t.unilateral[g];
  return xlogp(m[0], c.p0) + xlogp(m[1], c.p1) + xlogp(m[2], c.p2) + xlogp(n[0], 1.0 - pi) +
         xlogp(n[1], pi);
}

double loglik_beta(const FrequencyTable& t, const BetaParams& b) {
  return group_loglik(t, 0, b.pi1, b.rho) + group_loglik(t, 1, b.pi2, b.rho);
}

double loglik_gamma(const FrequencyTable& t, const GammaParams& g) {
  return group_loglik(t, 0, g.pi1, g.rho) + group_loglik(t, 1, g.pi1 + g.delta, g.rho);
}

GroupScore group_score(const FrequencyTable& t, std::size_t g, double pi, double rho) {
  const auto& m = t.bilateral[g];
  const auto& n = t.unilateral[g];
  // p0 = (1 - pi) * a, p2 = pi * b
  const double a = 1.0 - (1.0 - rho) * pi;
  const double b = rho + (1.0 - rho) * pi;
  GroupScore s;
  s.d_pi = -xdiv(m[0] + m[1] + n[0], 1.0 - pi) + xdiv(m[1] + m[2] + n[1], pi) -
           xdiv(m[0], a / (1.0 - rho)) + xdiv(m[2], b / (1.0 - rho));
  s.d_rho = xdiv(m[0], a / pi) + xdiv(m[2], b / (1.0 - pi)) - xdiv(m[1], 1.0 - rho);
  return s;
}

double dloglik_drho(const FrequencyTable& t, const BetaParams& beta) {
  return group_score(t, 0, beta.pi1, beta.rho).d_rho + group_score(t, 1, beta.pi2, beta.rho).d_rho;
}

double d2loglik_drho2(const FrequencyTable& t, const BetaParams& beta) {
  double h = 0.0;
  const double rho = beta.rho;
  for (std::size_t g = 0; g < 2; ++g) {
    const double pi = g == 0 ? beta.pi1 : beta.pi2;
    const auto& m = t.bilateral[g];
    const double a = 1.0 - (1.0 - rho) * pi;
    const double b = rho + (1.0 - rho) * pi;
    h -= xdiv(m[0], (a * a) / (pi * pi)) + xdiv(m[1], (1.0 - rho) * (1.0 - rho)) +
         xdiv(m[2], (b * b) / ((1.0 - pi) * (1.0 - pi)));
  }
  return h;
}

Score3 score_gamma(const FrequencyTable& t, const GammaParams& g) {
  require_interior(g, "score_gamma");
  const GroupScore s1 = group_score(t, 0, g.pi1, g.rho);
  const GroupScore s2 = group_score(t, 1, g.pi2(), g.rho);
  return {s2.d_pi, s1.d_pi + s2.d_pi, s1.d_rho + s2.d_rho};
}

GroupInfo group_info(Count bilateral_total, Count unilateral_total, double pi, double rho) {
  const double m = static_cast<double>(bilateral_total);
  const double n = static_cast<double>(unilateral_total);
  // (1 - (1-rho) pi)(rho + (1-rho) pi) = rho + (1-rho)^2 pi (1-pi)
  const double d = (1.0 - (1.0 - rho) * pi) * (rho + (1.0 - rho) * pi);
  GroupInfo info;
  info.pi_pi = (m * (2.0 - rho) + n) / (pi * (1.0 - pi)) - m * rho * (1.0 - rho * rho) / d;
  info.pi_rho = m * rho * (2.0 * pi - 1.0) / d;
  info.rho_rho = m * (1.0 + rho) * pi * (1.0 - pi) / ((1.0 - rho) * d);
  return info;
}

double group_info_det(Count bilateral_total, Count unilateral_total, double pi, double rho) {
  const double m = static_cast<double>(bilateral_total);
  const double n = static_cast<double>(unilateral_total);
  const CellProbs c = raw_cell_probs(pi, rho);
  const double q = pi * (1.0 - pi);
  // Gradients of (p0, p1, p2) in (pi, rho).
  const std::array<double, 3> p{c.p0, c.p1, c.p2};
  const std::array<double, 3> dpi{-2.0 * (1.0 - pi) + (1.0 - 2.0 * pi) * rho, 2.0 * (1.0 - 2.0 * pi) * (1.0 - rho),
                                  2.0 * pi + (1.0 - 2.0 * pi) * rho};
  const std::array<double, 3> drho{q, -2.0 * q, q};
  double det = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      const double cross = dpi[i] * drho[j] - drho[i] * dpi[j];
      det += m * m * cross * cross / (p[i] * p[j]);
    }
    // Unilateral information only acts on pi.
    det += m * n / q * drho[i] * drho[i] / p[i];
  }
  return det;
}

InfoMatrix fisher_info(const FrequencyTable& t, const GammaParams& g) {
  require_interior(g, "fisher_info");
  const GroupInfo j1 = group_info(t.bilateral_total(0), t.unilateral_total(0), g.pi1, g.rho);
  const GroupInfo j2 = group_info(t.bilateral_total(1), t.unilateral_total(1), g.pi2(), g.rho);
  // delta and pi1 both shift pi2 one-for-one, so the delta row repeats the
  // second group's pi terms.
  InfoMatrix info;
  auto& a = info.a;
  a[0][0] = j2.pi_pi;
  a[0][1] = a[1][0] = j2.pi_pi;
  a[0][2] = a[2][0] = j2.pi_rho;
  a[1][1] = j1.pi_pi + j2.pi_pi;
  a[1][2] = a[2][1] = j1.pi_rho + j2.pi_rho;
  a[2][2] = j1.rho_rho + j2.rho_rho;
  return info;
}

}  // namespace rdrho
