#pragma once

#include <cstddef>
#include <vector>

#include "rdrho/model.hpp"
#include "rdrho/table.hpp"

namespace rdrho {

// Coefficients of a*pi^3 + b*pi^2 + c*pi + d, whose roots are the stationary
// points of one group's log-likelihood in pi at fixed rho.
struct CubicCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double operator()(double x) const { return ((a * x + b) * x + c) * x + d; }
  double max_abs() const;
};

CubicCoeffs cubic_coeffs(const FrequencyTable& table, std::size_t group, double rho);

// The middle real root of the cubic by the trigonometric closed form, which
// is the local maximiser of the group log-likelihood. Throws
// CubicFallbackRequired when a is not (numerically) positive, when
// b^2 - 3ac <= 0, or when the arccos argument leaves [-1, 1] by more than
// 1e-12.
double cubic_root(const CubicCoeffs& c);

// All real roots, ascending, for any coefficients. Degenerate leading
// coefficients reduce to the quadratic (or linear) case.
std::vector<double> real_cubic_roots(const CubicCoeffs& c);

// Open interval of pi for which (pi, rho) keeps every cell strictly
// positive, shrunk by the clamping margins below.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
};

inline constexpr double kPiMargin = 1e-10;
inline constexpr double kRhoMargin = 1e-10;

Interval feasible_pi(double rho);
// rho range given both group probabilities.
Interval feasible_rho(double pi1, double pi2);

// Result of maximising one group's log-likelihood over pi at fixed rho.
struct PiUpdate {
  double pi = 0.5;
  bool at_boundary = false;    // the maximiser is a clamped endpoint
  bool used_fallback = false;  // the closed form was unavailable
  double residual = 0.0;       // |cubic(pi)| / max|coeff| when pi is a root
};
PiUpdate update_pi(const FrequencyTable& table, std::size_t group, double rho);

enum class Boundary { interior, pi_clamped, rho_clamped };

enum class PiInitRule { pooled, custom };

struct FitOptions {
  double tolerance = 1e-6;
  int max_iterations = 500;
  double rho_init = 0.0;
  PiInitRule pi_init_rule = PiInitRule::pooled;
  double pi_init = 0.5;  // used with PiInitRule::custom
  // Extra stationarity guard: a fit is only declared converged once the
  // free score components are below this (or pinned at a clamp).
  double score_tolerance = 1e-8;

  void validate() const;
};

struct FitResult {
  GammaParams params;
  double loglik = 0.0;
  int iterations = 0;
  bool converged = false;
  Boundary boundary = Boundary::interior;
  double final_step_norm = 0.0;
  // False when the table has no bilateral subjects, so rho never enters the
  // likelihood; params.rho then holds the starting value.
  bool rho_identified = true;
  // The iteration stalled on the admissibility boundary and the estimate
  // comes from maximizing the profile likelihood in rho.
  bool used_profile = false;
};

// Unconstrained MLE of (delta, pi1, rho): alternate the closed-form pi
// updates with a Newton step in rho until the rho increment (and the pi
// increments) fall below tolerance.
FitResult fit_unconstrained(const FrequencyTable& table, const FitOptions& opts = {});

// MLE of (pi1, rho) with delta fixed at delta0, by Fisher scoring on the
// lower-right 2x2 block of the information.
FitResult fit_constrained(const FrequencyTable& table, double delta0, const FitOptions& opts = {});

// (1,1) element of the inverse information via the Schur complement of the
// (pi1, rho) block. Throws SingularInformationError when the block or the
// complement is not positive.
double schur_I11(const InfoMatrix& info);

}  // namespace rdrho
