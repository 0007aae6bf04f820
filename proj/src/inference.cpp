#include "rdrho/inference.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "rdrho/errors.hpp"
#include "rdrho/model.hpp"

namespace rdrho {

namespace {

// Q_LR below zero by less than this is treated as roundoff.
constexpr double kLrRoundoff = 1e-10;

// The information in (pi1, pi2, rho) is block structured: each group adds a
// 2x2 block in (pi_g, rho). Working per group keeps the inverse symmetric in
// the two groups and avoids the cancellation of the 3x3 Schur complement
// near the admissibility boundary.
struct BlockInfo {
  std::array<GroupInfo, 2> g;
  double schur = 0.0;  // rho information left after projecting out pi1 and pi2
  bool rho_identified = true;
};

BlockInfo block_info(const FrequencyTable& t, const FitResult& fit) {
  const BetaParams b = to_beta(fit.params);
  if (!is_admissible(b)) throw DomainError("information requires an interior point");
  BlockInfo bi;
  bi.rho_identified = fit.rho_identified;
  for (std::size_t k = 0; k < 2; ++k) {
    bi.g[k] = group_info(t.bilateral_total(k), t.unilateral_total(k), k == 0 ? b.pi1 : b.pi2, b.rho);
    if (!(bi.g[k].pi_pi > 0.0) || !std::isfinite(bi.g[k].pi_pi)) {
      throw SingularInformationError("group information is singular; Wald and score tests unavailable");
    }
    bi.schur += group_info_det(t.bilateral_total(k), t.unilateral_total(k), k == 0 ? b.pi1 : b.pi2, b.rho) /
                bi.g[k].pi_pi;
  }
  if (bi.rho_identified && (!(bi.schur > 0.0) || !std::isfinite(bi.schur))) {
    throw SingularInformationError("information matrix is singular; Wald and score tests unavailable");
  }
  return bi;
}

// I^{11}, the asymptotic variance of delta-hat.
double inverse_11(const BlockInfo& bi) {
  const double a1 = bi.g[0].pi_pi;
  const double a2 = bi.g[1].pi_pi;
  double v = 1.0 / a1 + 1.0 / a2;
  if (bi.rho_identified) {
    const double d = bi.g[0].pi_rho / a1 - bi.g[1].pi_rho / a2;
    v += d * d / bi.schur;
  }
  return v;
}

double wald_statistic(const FrequencyTable& t, const FitResult& fit, double delta0) {
  const double v = inverse_11(block_info(t, fit));
  const double diff = fit.params.delta - delta0;
  return diff * diff / v;
}

struct ScoreForms {
  double reduced = 0.0;
  double full = 0.0;
};

// full: U' I^{-1} U, invariant under relabelling the groups.
// reduced: I^{11} (dl/d delta)^2, equal to full when the nuisance scores vanish.
ScoreForms score_statistic(const FrequencyTable& t, const FitResult& fit) {
  const BlockInfo bi = block_info(t, fit);
  const BetaParams b = to_beta(fit.params);
  const GroupScore s1 = group_score(t, 0, b.pi1, b.rho);
  const GroupScore s2 = group_score(t, 1, b.pi2, b.rho);
  const double a1 = bi.g[0].pi_pi;
  const double a2 = bi.g[1].pi_pi;
  ScoreForms s;
  s.full = s1.d_pi * s1.d_pi / a1 + s2.d_pi * s2.d_pi / a2;
  if (bi.rho_identified) {
    const double r = s1.d_rho + s2.d_rho - bi.g[0].pi_rho * s1.d_pi / a1 - bi.g[1].pi_rho * s2.d_pi / a2;
    s.full += r * r / bi.schur;
  }
  s.reduced = inverse_11(bi) * s2.d_pi * s2.d_pi;
  return s;
}

void require_converged(const FitResult& fit, const char* which) {
  if (!fit.converged) {
    throw NonConvergenceError(std::string(which) + " fit did not converge after " +
                              std::to_string(fit.iterations) + " iterations (last step " +
                              std::to_string(fit.final_step_norm) + ")");
  }
}

// Refit from the constrained solution when it beats the unconstrained one by
// more than roundoff, keeping whichever unconstrained optimum is higher.
FitResult best_unconstrained(const FrequencyTable& t, const FitResult& unconstrained,
                             const FitResult& constrained, const FitOptions& opts) {
  if (!(constrained.loglik > unconstrained.loglik + kLrRoundoff)) return unconstrained;
  FitOptions retry = opts;
  retry.rho_init = std::clamp(constrained.params.rho, -1.0 + 1e-6, 1.0 - 1e-6);
  FitResult again = fit_unconstrained(t, retry);
  return again.loglik > unconstrained.loglik ? again : unconstrained;
}

}  // namespace

const char* test_name(TestKind kind) {
  switch (kind) {
    case TestKind::lr: return "lr";
    case TestKind::wald: return "wald";
    case TestKind::score: return "score";
  }
  return "?";
}

TestKind parse_test_kind(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "lr") return TestKind::lr;
  if (lower == "wald") return TestKind::wald;
  if (lower == "score") return TestKind::score;
  throw DomainError("unknown test '" + name + "' (expected lr, wald or score)");
}

double chisq1_pvalue(double q) {
  if (!(q >= 0.0)) throw DomainError("chi-square statistic must be non-negative");
  return std::erfc(std::sqrt(0.5 * q));
}

double chisq1_critical(double alpha) {
  if (std::isnan(alpha)) throw DomainError("alpha is NaN");
  if (alpha <= 0.0) return std::numeric_limits<double>::infinity();
  if (alpha >= 1.0) return -std::numeric_limits<double>::infinity();
  const double z = boost::math::erfc_inv(alpha);
  return 2.0 * z * z;
}

bool rejects(double q, double alpha) { return q > chisq1_critical(alpha); }

std::vector<std::string> warning_names(std::uint32_t w) {
  std::vector<std::string> out;
  if (w & kWarnBoundary) out.emplace_back("boundary");
  if (w & kWarnWaldUnavailable) out.emplace_back("wald_unavailable");
  if (w & kWarnScoreUnavailable) out.emplace_back("score_unavailable");
  if (w & kWarnNonconvergence) out.emplace_back("nonconvergence");
  if (w & kWarnLrClamped) out.emplace_back("lr_clamped");
  if (w & kWarnRhoNotIdentified) out.emplace_back("rho_not_identified");
  if (w & kWarnScoreFormMismatch) out.emplace_back("score_form_mismatch");
  return out;
}

bool TestReport::reject(TestKind k, double alpha) const {
  const TestStatistic& s = (*this)[k];
  if (!s.available) throw DomainError(std::string(test_name(k)) + " statistic is unavailable");
  return rejects(s.q, alpha);
}

double lr_test(const FrequencyTable& t, double delta0, const FitOptions& opts) {
  const FitResult con = fit_constrained(t, delta0, opts);
  require_converged(con, "constrained");
  FitResult unc = fit_unconstrained(t, opts);
  require_converged(unc, "unconstrained");
  unc = best_unconstrained(t, unc, con, opts);
  return std::max(0.0, 2.0 * (unc.loglik - con.loglik));
}

double wald_test(const FrequencyTable& t, double delta0, const FitOptions& opts) {
  const FitResult unc = fit_unconstrained(t, opts);
  require_converged(unc, "unconstrained");
  return wald_statistic(t, unc, delta0);
}

double score_test(const FrequencyTable& t, double delta0, const FitOptions& opts) {
  const FitResult con = fit_constrained(t, delta0, opts);
  require_converged(con, "constrained");
  return score_statistic(t, con).full;
}

TestReport run_all_tests(const FrequencyTable& t, double delta0, const FitOptions& opts) {
  TestReport r;
  r.delta0 = delta0;
  r.unconstrained = fit_unconstrained(t, opts);

  bool constrained_ok = true;
  try {
    r.constrained = fit_constrained(t, delta0, opts);
  } catch (const SingularInformationError&) {
    constrained_ok = false;
    r.warnings |= kWarnNonconvergence | kWarnScoreUnavailable;
  }
  constrained_ok = constrained_ok && r.constrained.converged;
  const bool unconstrained_ok = r.unconstrained.converged;
  if (!constrained_ok || !unconstrained_ok) r.warnings |= kWarnNonconvergence;
  if (!r.unconstrained.rho_identified) r.warnings |= kWarnRhoNotIdentified;

  if (constrained_ok && unconstrained_ok) {
    r.unconstrained = best_unconstrained(t, r.unconstrained, r.constrained, opts);
  }
  if (r.unconstrained.boundary != Boundary::interior ||
      (constrained_ok && r.constrained.boundary != Boundary::interior)) {
    r.warnings |= kWarnBoundary;
  }

  if (constrained_ok && unconstrained_ok) {
    double q = 2.0 * (r.unconstrained.loglik - r.constrained.loglik);
    if (q < 0.0) {
      if (q < -kLrRoundoff) r.warnings |= kWarnNonconvergence;
      r.warnings |= kWarnLrClamped;
      q = 0.0;
    }
    r[TestKind::lr] = {q, chisq1_pvalue(q), true};
  }

  if (unconstrained_ok) {
    try {
      const double q = wald_statistic(t, r.unconstrained, delta0);
      r[TestKind::wald] = {q, chisq1_pvalue(q), true};
    } catch (const SingularInformationError&) {
      r.warnings |= kWarnWaldUnavailable;
    } catch (const DomainError&) {
      r.warnings |= kWarnWaldUnavailable;
    }
  } else {
    r.warnings |= kWarnWaldUnavailable;
  }

  if (constrained_ok) {
    try {
      const ScoreForms s = score_statistic(t, r.constrained);
      r[TestKind::score] = {s.full, chisq1_pvalue(s.full), true};
      r.q_score_reduced = s.reduced;
      if (std::abs(s.full - s.reduced) > 1e-8 * std::max(1.0, s.full)) {
        r.warnings |= kWarnScoreFormMismatch;
      }
    } catch (const SingularInformationError&) {
      r.warnings |= kWarnScoreUnavailable;
    } catch (const DomainError&) {
      r.warnings |= kWarnScoreUnavailable;
    }
  } else {
    r.warnings |= kWarnScoreUnavailable;
  }
  return r;
}

}  // namespace rdrho
