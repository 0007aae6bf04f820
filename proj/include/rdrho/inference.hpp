#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "rdrho/mle.hpp"
#include "rdrho/table.hpp"

namespace rdrho {

enum class TestKind { lr = 0, wald = 1, score = 2 };
inline constexpr std::array<TestKind, 3> kAllTests{TestKind::lr, TestKind::wald, TestKind::score};
const char* test_name(TestKind kind);
// Accepts "lr", "wald", "score" (case-insensitive); throws DomainError.
TestKind parse_test_kind(const std::string& name);

// Upper tail of chi-square(1) at q, erfc(sqrt(q/2)). Throws DomainError for
// q < 0 or NaN.
double chisq1_pvalue(double q);

// (1 - alpha) quantile of chi-square(1). alpha <= 0 gives +inf (never
// reject), alpha >= 1 gives -inf (always reject).
double chisq1_critical(double alpha);

// Rejection rule Q > chi2_{1-alpha,1}.
bool rejects(double q, double alpha);

enum Warning : std::uint32_t {
  kWarnNone = 0,
  kWarnBoundary = 1u << 0,         // a fit ended on a clamp
  kWarnWaldUnavailable = 1u << 1,  // information singular at the unconstrained MLE
  kWarnScoreUnavailable = 1u << 2, // information singular at the constrained MLE
  kWarnNonconvergence = 1u << 3,   // a fit did not converge
  kWarnLrClamped = 1u << 4,        // negative Q_LR from roundoff set to 0
  kWarnRhoNotIdentified = 1u << 5, // no bilateral subjects
  kWarnScoreFormMismatch = 1u << 6,// reduced and full score forms disagree
};
std::vector<std::string> warning_names(std::uint32_t warnings);

struct TestStatistic {
  double q = 0.0;
  double p = 1.0;
  bool available = false;
};

struct TestReport {
  double delta0 = 0.0;
  std::array<TestStatistic, 3> tests{};  // indexed by TestKind
  FitResult unconstrained;
  FitResult constrained;
  // tests[score].q is the quadratic form U' I^-1 U at the constrained MLE.
  // This is the reduced form I^11 (dl/d delta)^2, which agrees with it when
  // the nuisance score components vanish (an interior constrained MLE).
  double q_score_reduced = 0.0;
  std::uint32_t warnings = kWarnNone;

  const TestStatistic& operator[](TestKind k) const { return tests[static_cast<int>(k)]; }
  TestStatistic& operator[](TestKind k) { return tests[static_cast<int>(k)]; }

  bool complete() const { return tests[0].available && tests[1].available && tests[2].available; }
  // Throws DomainError if the test is unavailable.
  bool reject(TestKind k, double alpha) const;
};

// Each throws NonConvergenceError if a fit it needs did not converge, and
// SingularInformationError when the information cannot be inverted.
double lr_test(const FrequencyTable& table, double delta0, const FitOptions& opts = {});
double wald_test(const FrequencyTable& table, double delta0, const FitOptions& opts = {});
double score_test(const FrequencyTable& table, double delta0, const FitOptions& opts = {});

// One constrained and one unconstrained fit shared by all three statistics.
// Nonconvergence and singular information mark the affected tests
// unavailable (with warnings) rather than throwing; DomainError propagates.
TestReport run_all_tests(const FrequencyTable& table, double delta0, const FitOptions& opts = {});

}  // namespace rdrho
