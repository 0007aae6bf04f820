#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rdrho/errors.hpp"
#include "rdrho/inference.hpp"
#include "rdrho/montecarlo.hpp"

using namespace rdrho;

namespace {

FrequencyTable ome() {
  FrequencyTable t;
  t.bilateral = {{{9, 7, 23}, {7, 5, 13}}};
  t.unilateral = {{{20, 34}, {19, 36}}};
  return t;
}

FrequencyTable orthok() {
  FrequencyTable t;
  t.bilateral = {{{20, 7, 10}, {13, 2, 2}}};
  t.unilateral = {{{3, 3}, {0, 0}}};
  return t;
}

}  // namespace

TEST(ChiSquare, PValues) {
  EXPECT_DOUBLE_EQ(chisq1_pvalue(0.0), 1.0);
  EXPECT_NEAR(chisq1_pvalue(3.841458820694124), 0.05, 1e-12);
  EXPECT_NEAR(chisq1_pvalue(6.634896601021214), 0.01, 1e-12);
  EXPECT_NEAR(chisq1_pvalue(1.0), 0.31731050786291415, 1e-14);
  EXPECT_THROW(chisq1_pvalue(-1.0), DomainError);
  EXPECT_THROW(chisq1_pvalue(std::nan("")), DomainError);
}

TEST(ChiSquare, CriticalValueAndRejection) {
  EXPECT_NEAR(chisq1_critical(0.05), 3.841458820694124, 1e-10);
  EXPECT_TRUE(rejects(3.85, 0.05));
  EXPECT_FALSE(rejects(3.84, 0.05));
  EXPECT_TRUE(rejects(0.0, 1.0));
  EXPECT_FALSE(rejects(1e9, 0.0));
}

TEST(TestNames, RoundTrip) {
  for (TestKind k : kAllTests) EXPECT_EQ(parse_test_kind(test_name(k)), k);
  EXPECT_EQ(parse_test_kind("SCORE"), TestKind::score);
  EXPECT_THROW(parse_test_kind("t"), DomainError);
}

TEST(RunAllTests, OmeGolden) {
  const TestReport r = run_all_tests(ome(), 0.0);
  ASSERT_TRUE(r.complete());
  for (TestKind k : kAllTests) {
    EXPECT_NEAR(r[k].q, 0.0293, 1e-4) << test_name(k);
    EXPECT_NEAR(r[k].p, 0.8641, 5e-4) << test_name(k);
  }
}

TEST(RunAllTests, OrthokGolden) {
  const TestReport r = run_all_tests(orthok(), 0.0);
  ASSERT_TRUE(r.complete());
  EXPECT_NEAR(r[TestKind::lr].q, 3.1689, 1e-3);
  EXPECT_NEAR(r[TestKind::wald].q, 3.7843, 1e-3);
  EXPECT_NEAR(r[TestKind::score].q, 2.9671, 1e-3);
  EXPECT_NEAR(r[TestKind::lr].p, 0.0751, 5e-4);
  EXPECT_NEAR(r[TestKind::wald].p, 0.0517, 5e-4);
  EXPECT_NEAR(r[TestKind::score].p, 0.0850, 5e-4);
  EXPECT_TRUE(r.reject(TestKind::wald, 0.06));
  EXPECT_FALSE(r.reject(TestKind::wald, 0.05));
}

TEST(RunAllTests, SingleTestEntryPointsAgree) {
  const TestReport r = run_all_tests(orthok(), 0.1);
  EXPECT_DOUBLE_EQ(lr_test(orthok(), 0.1), r[TestKind::lr].q);
  EXPECT_DOUBLE_EQ(wald_test(orthok(), 0.1), r[TestKind::wald].q);
  EXPECT_DOUBLE_EQ(score_test(orthok(), 0.1), r[TestKind::score].q);
}

TEST(RunAllTests, ReducedAndFullScoreFormsAgree) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  int compared = 0;
  for (int i = 0; i < 300; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 40);
    const TestReport r = run_all_tests(t, d(rng));
    if (!r[TestKind::score].available || r.constrained.boundary != Boundary::interior) continue;
    const double q = r[TestKind::score].q;
    EXPECT_NEAR(r.q_score_reduced, q, 1e-6 * std::max(1.0, q));
    ++compared;
  }
  EXPECT_GT(compared, 100);
}

TEST(RunAllTests, StatisticsAtUnconstrainedDeltaVanish) {
  const FrequencyTable t = ome();
  const FitResult u = fit_unconstrained(t);
  const TestReport r = run_all_tests(t, u.params.delta);
  for (TestKind k : kAllTests) EXPECT_NEAR(r[k].q, 0.0, 1e-8) << test_name(k);
}

TEST(RunAllTests, GroupSwapInvariance) {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  int interior = 0;
  for (int i = 0; i < 400; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 40);
    const double delta0 = d(rng);
    const TestReport a = run_all_tests(t, delta0);
    const TestReport b = run_all_tests(t.swapped(), -delta0);
    // A boundary fit sits 1e-10 inside the admissible region, where a cell
    // probability is known to about six digits; the information and hence
    // Q_W and Q_S inherit that precision.
    const bool on_boundary = (a.warnings | b.warnings) & kWarnBoundary;
    interior += !on_boundary;
    for (TestKind k : kAllTests) {
      ASSERT_EQ(a[k].available, b[k].available) << test_name(k) << " table " << i;
      if (!a[k].available) continue;
      const double tol = k == TestKind::lr ? 1e-10 : (on_boundary ? 1e-5 : 1e-8);
      EXPECT_NEAR(a[k].q, b[k].q, tol * std::max(1.0, a[k].q)) << test_name(k) << " table " << i;
    }
  }
  EXPECT_GT(interior, 300);
}

TEST(RunAllTests, LrNonNegative) {
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> d(-0.9, 0.9);
  for (int i = 0; i < 1000; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 20);
    const TestReport r = run_all_tests(t, d(rng));
    if (r[TestKind::lr].available) EXPECT_GE(r[TestKind::lr].q, 0.0);
  }
}

TEST(RunAllTests, LargeSampleAgreement) {
  SimConfig c;
  c.pi1 = 0.4;
  c.rho = 0.3;
  c.delta_true = 0.03;
  c.m1 = c.m2 = c.n1 = c.n2 = 5000;
  c.seed = 17;
  const FrequencyTable t = sample_dataset(c, 0);
  const TestReport r = run_all_tests(t, 0.0);
  ASSERT_TRUE(r.complete());
  const double lr = r[TestKind::lr].q;
  EXPECT_GT(lr, 1.0);
  EXPECT_NEAR(r[TestKind::wald].q, lr, 0.05 * lr);
  EXPECT_NEAR(r[TestKind::score].q, lr, 0.05 * lr);
}

TEST(RunAllTests, UnilateralOnlyFlagsRho) {
  FrequencyTable t;
  t.unilateral = {{{6, 4}, {3, 7}}};
  const TestReport r = run_all_tests(t, 0.0);
  EXPECT_TRUE(r.warnings & kWarnRhoNotIdentified);
  EXPECT_TRUE(r[TestKind::lr].available);
}

TEST(RunAllTests, NonconvergenceGivesPartialReport) {
  FitOptions o;
  o.max_iterations = 1;
  const TestReport r = run_all_tests(ome(), 0.0, o);
  EXPECT_FALSE(r.complete());
  EXPECT_TRUE(r.warnings & kWarnNonconvergence);
  EXPECT_THROW(lr_test(ome(), 0.0, o), NonConvergenceError);
  EXPECT_THROW(r.reject(TestKind::lr, 0.05), DomainError);
}

TEST(Warnings, Names) {
  const auto names = warning_names(kWarnBoundary | kWarnLrClamped);
  ASSERT_EQ(names.size(), 2u);
  EXPECT_TRUE(warning_names(kWarnNone).empty());
}
