#pragma once

#include <array>
#include <cstddef>

#include "rdrho/table.hpp"

namespace rdrho {

// (pi1, pi2, rho): per-group cure probabilities and the common intra-subject
// correlation.
struct BetaParams {
  double pi1 = 0.5;
  double pi2 = 0.5;
  double rho = 0.0;
};

// (delta, pi1, rho) with delta = pi2 - pi1.
struct GammaParams {
  double delta = 0.0;
  double pi1 = 0.5;
  double rho = 0.0;

  double pi2() const { return pi1 + delta; }
};

inline GammaParams to_gamma(const BetaParams& b) { return {b.pi2 - b.pi1, b.pi1, b.rho}; }
inline BetaParams to_beta(const GammaParams& g) { return {g.pi1, g.pi2(), g.rho}; }

// Joint probabilities of 0, 1, 2 cured organs for one bilateral subject.
struct CellProbs {
  double p0 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;
};

// Smallest rho keeping every cell of one group non-negative:
// max(-pi/(1-pi), -(1-pi)/pi). Lies in [-1, 0): -1 at pi = 0.5, tending to 0
// as pi approaches 0 or 1.
double rho_lower_bound(double pi);

// Intersection over both groups.
double rho_lower_bound(double pi1, double pi2);

// True when 0 < pi < 1 and all three cells are strictly positive.
bool is_admissible(double pi, double rho);
bool is_admissible(const BetaParams& beta);
bool is_admissible(const GammaParams& gamma);

// Cell probabilities without any domain checking.
CellProbs raw_cell_probs(double pi, double rho);

// Cell probabilities; throws DomainError naming the offending cell when
// pi is outside [0, 1] or a cell would be negative.
CellProbs cell_probs(double pi, double rho);

// Log-likelihood contribution of one group, constant dropped. Zero counts
// contribute 0 even on zero cells; a positive count on a zero cell, or a
// point outside the closed parameter region, gives -infinity.
double group_loglik(const FrequencyTable& table, std::size_t group, double pi, double rho);

double loglik_beta(const FrequencyTable& table, const BetaParams& beta);
double loglik_gamma(const FrequencyTable& table, const GammaParams& gamma);

// Partial derivatives of one group's log-likelihood in (pi, rho).
struct GroupScore {
  double d_pi = 0.0;
  double d_rho = 0.0;
};
GroupScore group_score(const FrequencyTable& table, std::size_t group, double pi, double rho);

// Derivative of the beta log-likelihood in rho, and its second derivative,
// at fixed (pi1, pi2).
double dloglik_drho(const FrequencyTable& table, const BetaParams& beta);
double d2loglik_drho2(const FrequencyTable& table, const BetaParams& beta);

// Gradient of loglik_gamma, ordered (delta, pi1, rho). Throws DomainError
// unless gamma is strictly interior.
using Score3 = std::array<double, 3>;
Score3 score_gamma(const FrequencyTable& table, const GammaParams& gamma);

// Expected information of one group in (pi, rho), given its bilateral and
// unilateral subject totals.
struct GroupInfo {
  double pi_pi = 0.0;
  double pi_rho = 0.0;
  double rho_rho = 0.0;
};
GroupInfo group_info(Count bilateral_total, Count unilateral_total, double pi, double rho);

// pi_pi * rho_rho - pi_rho^2 of group_info, summed as non-negative
// Cauchy-Binet terms so it stays accurate where a cell probability is tiny.
double group_info_det(Count bilateral_total, Count unilateral_total, double pi, double rho);

// Symmetric 3x3 Fisher information in (delta, pi1, rho).
struct InfoMatrix {
  std::array<std::array<double, 3>, 3> a{};

  double operator()(std::size_t i, std::size_t j) const { return a[i][j]; }
};

// Depends on the table only through its group totals. Throws DomainError
// unless gamma is strictly interior.
InfoMatrix fisher_info(const FrequencyTable& table, const GammaParams& gamma);

}  // namespace rdrho
