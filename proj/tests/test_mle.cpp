#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rdrho/errors.hpp"
#include "rdrho/mle.hpp"

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

TEST(Cubic, ClosedFormMiddleRoot) {
  EXPECT_NEAR(cubic_root({90, -135, 45, 0}), 0.5, 1e-12);
  const auto roots = real_cubic_roots({90, -135, 45, 0});
  ASSERT_EQ(roots.size(), 3u);
  EXPECT_NEAR(roots[0], 0.0, 1e-12);
  EXPECT_NEAR(roots[1], 0.5, 1e-12);
  EXPECT_NEAR(roots[2], 1.0, 1e-12);
}

TEST(Cubic, ScaleInvariance) {
  const CubicCoeffs c{90, -135, 45, 0};
  for (double k : {1e-6, 0.01, 7.0, 1e6}) {
    EXPECT_NEAR(cubic_root({k * c.a, k * c.b, k * c.c, k * c.d}), 0.5, 1e-10);
  }
}

TEST(Cubic, FallbackSignalled) {
  EXPECT_THROW(cubic_root({-1, 0, 1, 0}), CubicFallbackRequired);
  EXPECT_THROW(cubic_root({1, 0, 1, 0}), CubicFallbackRequired);
}

TEST(Cubic, DegenerateLeadingCoefficient) {
  const auto q = real_cubic_roots({0, 1, -3, 2});
  ASSERT_EQ(q.size(), 2u);
  EXPECT_NEAR(q[0], 1.0, 1e-12);
  EXPECT_NEAR(q[1], 2.0, 1e-12);
}

TEST(Cubic, ResidualsAndLocalMaximum) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> rho_u(-0.05, 0.95);
  int roots = 0;
  for (int i = 0; i < 2000; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 50);
    const double rho = rho_u(rng);
    for (std::size_t g = 0; g < 2; ++g) {
      if (t.subjects(g) == 0) continue;
      const PiUpdate u = update_pi(t, g, rho);
      const Interval iv = feasible_pi(rho);
      EXPECT_TRUE(iv.contains(u.pi));
      if (!u.at_boundary) {
        const CubicCoeffs c = cubic_coeffs(t, g, rho);
        EXPECT_LT(std::abs(c(u.pi)) / c.max_abs(), 1e-8);
        ++roots;
      }
      // The update maximises the group likelihood in pi over a fine grid.
      const oracle::GroupCounts gc = oracle::group(t, int(g));
      const double best = oracle::group_loglik(gc, u.pi, rho);
      for (int k = 1; k < 400; ++k) {
        const double p = iv.lo + (iv.hi - iv.lo) * k / 400.0;
        EXPECT_GE(best, oracle::group_loglik(gc, p, rho) - 1e-9);
      }
    }
  }
  EXPECT_GT(roots, 1000);
}

TEST(FitUnconstrained, OmeGolden) {
  const auto t0 = std::chrono::steady_clock::now();
  const FitResult r = fit_unconstrained(ome());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.params.delta, -0.0119, 5e-4);
  EXPECT_NEAR(r.params.pi1, 0.6536, 5e-4);
  EXPECT_NEAR(r.params.rho, 0.5856, 5e-4);
  EXPECT_LT(secs, 1.0);
}

TEST(FitUnconstrained, OrthokGolden) {
  const FitResult r = fit_unconstrained(orthok());
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.params.delta, -0.2039, 5e-4);
  EXPECT_NEAR(r.params.pi1, 0.3803, 5e-4);
  EXPECT_NEAR(r.params.rho, 0.5948, 5e-4);
}

TEST(FitConstrained, Goldens) {
  const FitResult a = fit_constrained(ome(), 0.0);
  ASSERT_TRUE(a.converged);
  EXPECT_EQ(a.params.delta, 0.0);
  EXPECT_NEAR(a.params.pi1, 0.6482, 5e-4);
  EXPECT_NEAR(a.params.rho, 0.5862, 5e-4);
  const FitResult b = fit_constrained(orthok(), 0.0);
  ASSERT_TRUE(b.converged);
  EXPECT_NEAR(b.params.pi1, 0.3215, 5e-4);
  EXPECT_NEAR(b.params.rho, 0.6117, 5e-4);
}

TEST(FitUnconstrained, StationaryAtInteriorOptimum) {
  const FrequencyTable t = ome();
  const FitResult r = fit_unconstrained(t);
  const auto g = oracle::fd_gradient(t, r.params.delta, r.params.pi1, r.params.rho);
  for (double x : g) EXPECT_NEAR(x, 0.0, 1e-5);
}

TEST(FitConstrained, ProfileOptimality) {
  const FrequencyTable t = ome();
  const FitResult r = fit_constrained(t, 0.05);
  ASSERT_TRUE(r.converged);
  const double best = oracle::loglik(t, 0.05, r.params.pi1, r.params.rho);
  for (int i = 1; i < 200; ++i) {
    for (int j = 1; j < 200; ++j) {
      const double pi1 = i / 200.0;
      const double rho = -1.0 + 2.0 * j / 200.0;
      if (!oracle::admissible(pi1, rho) || !oracle::admissible(pi1 + 0.05, rho)) continue;
      EXPECT_GE(best, oracle::loglik(t, 0.05, pi1, rho) - 1e-9);
    }
  }
}

TEST(FitUnconstrained, GridOracleOnTinyTables) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 10);
    const FitResult r = fit_unconstrained(t);
    ASSERT_TRUE(r.converged) << "table " << i;
    const double fitted = oracle::loglik(t, r.params.delta, r.params.pi1, r.params.rho);
    EXPECT_DOUBLE_EQ(fitted, r.loglik);
    EXPECT_GE(fitted, oracle::grid_max(t) - 1e-6) << "table " << i;
  }
}

TEST(FitUnconstrained, GroupSwap) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 200; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 40);
    const FitResult a = fit_unconstrained(t);
    const FitResult b = fit_unconstrained(t.swapped());
    ASSERT_TRUE(a.converged && b.converged);
    EXPECT_NEAR(b.params.delta, -a.params.delta, 1e-8);
    EXPECT_NEAR(b.params.pi1, a.params.pi2(), 1e-8);
    if (a.rho_identified) EXPECT_NEAR(b.params.rho, a.params.rho, 1e-8);
    EXPECT_NEAR(a.loglik, b.loglik, 1e-8 * std::max(1.0, std::abs(a.loglik)));
  }
}

TEST(FitUnconstrained, UnilateralOnlyGivesSampleProportions) {
  FrequencyTable t;
  t.unilateral = {{{6, 4}, {3, 7}}};
  const FitResult r = fit_unconstrained(t);
  ASSERT_TRUE(r.converged);
  EXPECT_FALSE(r.rho_identified);
  EXPECT_NEAR(r.params.pi1, 0.4, 1e-12);
  EXPECT_NEAR(r.params.delta, 0.3, 1e-12);
}

TEST(FitConstrained, AtUnconstrainedDeltaMatchesUnconstrainedFit) {
  const FrequencyTable t = orthok();
  const FitResult u = fit_unconstrained(t);
  const FitResult c = fit_constrained(t, u.params.delta);
  ASSERT_TRUE(c.converged);
  EXPECT_NEAR(c.params.pi1, u.params.pi1, 1e-6);
  EXPECT_NEAR(c.params.rho, u.params.rho, 1e-6);
  EXPECT_NEAR(c.loglik, u.loglik, 1e-9);
}

TEST(FitConstrained, NeverExceedsUnconstrained) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  for (int i = 0; i < 300; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 30);
    const FitResult u = fit_unconstrained(t);
    const FitResult c = fit_constrained(t, d(rng));
    if (!c.converged) continue;
    EXPECT_LE(c.loglik, u.loglik + 1e-9);
  }
}

TEST(FitConstrained, InputValidation) {
  EXPECT_THROW(fit_constrained(ome(), 1.0), DomainError);
  EXPECT_THROW(fit_constrained(ome(), std::nan("")), DomainError);
  FrequencyTable empty_group;
  empty_group.bilateral[0] = {1, 2, 3};
  EXPECT_THROW(fit_unconstrained(empty_group), DomainError);
  FrequencyTable negative = ome();
  negative.unilateral[0][0] = -1;
  EXPECT_THROW(fit_unconstrained(negative), DomainError);
  FitOptions bad;
  bad.tolerance = 0;
  EXPECT_THROW(fit_unconstrained(ome(), bad), DomainError);
}

TEST(FitUnconstrained, IterationCapReportsNonconvergence) {
  FitOptions o;
  o.max_iterations = 1;
  const FitResult r = fit_unconstrained(ome(), o);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
}

TEST(SchurComplement, MatchesDirectInverse) {
  std::mt19937_64 rng(61);
  for (int i = 0; i < 500; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 50);
    if (!t.has_bilateral()) continue;
    const auto gv = oracle::random_gamma(rng);
    const InfoMatrix info = fisher_info(t, {gv[0], gv[1], gv[2]});
    const oracle::Mat3 inv = oracle::inverse(info.a);
    EXPECT_NEAR(schur_I11(info), inv[0][0], 1e-10 * std::abs(inv[0][0]));
  }
}

TEST(SchurComplement, SingularBlock) {
  InfoMatrix z;
  EXPECT_THROW(schur_I11(z), SingularInformationError);
}
