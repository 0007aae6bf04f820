// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rdrho/inference.hpp"
#include "rdrho/mle.hpp"
#include "rdrho/montecarlo.hpp"

using namespace rdrho;

namespace {

int g_failed = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  g_failed += !ok;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool near(double x, double target, double tol) { return std::abs(x - target) <= tol; }

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

struct Golden {
  double con_pi1, con_rho;
  double unc_delta, unc_pi1, unc_rho;
  std::array<double, 3> q, p;
  double q_tol;
};

void check_golden(const std::string& name, const FrequencyTable& t, const Golden& g) {
  const auto t0 = std::chrono::steady_clock::now();
  const TestReport r = run_all_tests(t, 0.0);
  const double secs = seconds_since(t0);
  bool ok = r.complete() && secs < 1.0;
  ok = ok && near(r.constrained.params.pi1, g.con_pi1, 5e-4) && near(r.constrained.params.rho, g.con_rho, 5e-4);
  ok = ok && near(r.unconstrained.params.delta, g.unc_delta, 5e-4) &&
       near(r.unconstrained.params.pi1, g.unc_pi1, 5e-4) && near(r.unconstrained.params.rho, g.unc_rho, 5e-4);
  for (int k = 0; k < 3; ++k) ok = ok && near(r.tests[k].q, g.q[k], g.q_tol) && near(r.tests[k].p, g.p[k], 5e-4);
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "constrained (%.4f, %.4f), unconstrained (%.4f, %.4f, %.4f), Q = %.4f/%.4f/%.4f, "
                "p = %.4f/%.4f/%.4f, %.2g s",
                r.constrained.params.pi1, r.constrained.params.rho, r.unconstrained.params.delta,
                r.unconstrained.params.pi1, r.unconstrained.params.rho, r.tests[0].q, r.tests[1].q, r.tests[2].q,
                r.tests[0].p, r.tests[1].p, r.tests[2].p, secs);
  report(ok, name, buf);
}

SimConfig design(double pi1, double rho, double delta, double delta_null, Count size, Count reps) {
  SimConfig c;
  c.pi1 = pi1;
  c.rho = rho;
  c.delta_true = delta;
  c.delta_null = delta_null;
  c.m1 = c.m2 = c.n1 = c.n2 = size;
  c.replicates = reps;
  c.seed = 20240601;
  return c;
}

std::string rates(const SimSummary& s) {
  return fmt("%.2f", 100 * s.tests[0].rate) + "/" + fmt("%.2f", 100 * s.tests[1].rate) + "/" +
         fmt("%.2f", 100 * s.tests[2].rate) + "%";
}

void check_tie() {
  const auto t0 = std::chrono::steady_clock::now();
  const SimSummary s = estimate_tie(design(0.1, 0.0, 0.1, 0.1, 50, 100'000));
  const double secs = seconds_since(t0);
  const double ref[3] = {4.42, 4.63, 4.23};
  bool ok = secs < 600.0;
  for (int k = 0; k < 3; ++k) {
    const double pct = 100 * s.tests[k].rate;
    ok = ok && near(pct, ref[k], 0.35) && pct >= 4.0 && pct <= 6.0;
  }
  report(ok, "TIE reproduction (rho=0, pi1=0.1, delta0=0.1, m=n=50, N=100000)",
         "LR/Wald/score " + rates(s) + " vs reference 4.42/4.63/4.23% (+-0.35), " + fmt("%.0f s", secs));
}

void check_power() {
  const SimSummary base = estimate_power(design(0.1, 0.0, 0.1, 0.0, 50, 100'000));
  const double ref[3] = {65.23, 65.52, 64.51};
  bool ok = true;
  for (int k = 0; k < 3; ++k) ok = ok && near(100 * base.tests[k].rate, ref[k], 0.6);
  report(ok, "power reproduction (rho=0, pi1=0.1, delta1=0.1, m=n=50, N=100000)",
         "LR/Wald/score " + rates(base) + " vs reference 65.23/65.52/64.51% (+-0.6)");

  const SimSummary larger = estimate_power(design(0.1, 0.0, 0.1, 0.0, 100, 100'000));
  const SimSummary correlated = estimate_power(design(0.1, 0.9, 0.1, 0.0, 50, 100'000));
  bool mono = true;
  for (int k = 0; k < 3; ++k) {
    mono = mono && larger.tests[k].rate > base.tests[k].rate && correlated.tests[k].rate < base.tests[k].rate;
  }
  report(mono, "power monotonicity",
         "m=n=100: " + rates(larger) + ", rho=0.9: " + rates(correlated) + ", baseline " + rates(base));
}

void check_sample_size() {
  SampleSizeQuery a;
  a.rho = 0.0;
  a.pi1 = 0.1;
  a.delta1 = 0.2;
  a.test = TestKind::score;
  SampleSizeQuery b;
  b.rho = 0.8;
  b.pi1 = 0.4;
  b.delta1 = 0.1;
  b.test = TestKind::lr;
  const SampleSizeResult ra = min_sample_size(a);
  const SampleSizeResult rb = min_sample_size(b);
  const bool ok = std::abs(ra.size - 23) <= 1 && std::abs(rb.size - 183) <= 3;
  report(ok, "sample-size spot checks (80% power)",
         "score (rho=0, pi1=0.1, delta1=0.2): " + std::to_string(ra.size) +
             " vs 23+-1; LR (rho=0.8, pi1=0.4, delta1=0.1): " + std::to_string(rb.size) + " vs 183+-3");
}

// Each property returns the number of violations.
int prop_gradient() {
  std::mt19937_64 rng(101);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 60);
    const auto g = oracle::random_gamma(rng);
    const Score3 s = score_gamma(t, {g[0], g[1], g[2]});
    const auto fd = oracle::fd_gradient(t, g[0], g[1], g[2]);
    const double scale = std::max({1.0, std::abs(fd[0]), std::abs(fd[1]), std::abs(fd[2])});
    for (int k = 0; k < 3; ++k) bad += !(std::abs(s[k] - fd[k]) / scale < 1e-5);
  }
  return bad;
}

int prop_fisher() {
  std::mt19937_64 rng(102);
  int bad = 0;
  for (int i = 0; i < 300; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 60);
    const auto gv = oracle::random_gamma(rng);
    const GammaParams g{gv[0], gv[1], gv[2]};
    const InfoMatrix info = fisher_info(t, g);
    // Expected negative Hessian: finite differences of score_gamma on
    // one-count tables, weighted by expected cell counts.
    oracle::Mat3 o{};
    const double h = 1e-6;
    for (int grp = 0; grp < 2; ++grp) {
      const double pi = grp == 0 ? g.pi1 : g.pi2();
      const oracle::Cells c = oracle::cells(pi, g.rho);
      const double mb = double(t.bilateral_total(grp));
      const double mu = double(t.unilateral_total(grp));
      const double w[5] = {mb * c.p0, mb * c.p1, mb * c.p2, mu * (1 - pi), mu * pi};
      for (int cell = 0; cell < 5; ++cell) {
        if (w[cell] == 0) continue;
        FrequencyTable one;
        if (cell < 3) one.bilateral[grp][cell] = 1;
        else one.unilateral[grp][cell - 3] = 1;
        for (int j = 0; j < 3; ++j) {
          GammaParams up = g;
          GammaParams dn = g;
          (j == 0 ? up.delta : j == 1 ? up.pi1 : up.rho) += h;
          (j == 0 ? dn.delta : j == 1 ? dn.pi1 : dn.rho) -= h;
          const Score3 su = score_gamma(one, up);
          const Score3 sd = score_gamma(one, dn);
          for (int k = 0; k < 3; ++k) o[k][j] -= w[cell] * (su[k] - sd[k]) / (2 * h);
        }
      }
    }
    double scale = 0;
    for (const auto& row : o)
      for (double x : row) scale = std::max(scale, std::abs(x));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) bad += !(std::abs(info(r, c) - o[r][c]) / scale < 1e-4);
  }
  return bad;
}

int prop_cubic() {
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> rho_u(-0.05, 0.95);
  int bad = 0;
  for (int i = 0; i < 2000; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 50);
    const double rho = rho_u(rng);
    for (std::size_t g = 0; g < 2; ++g) {
      if (t.subjects(g) == 0) continue;
      const PiUpdate u = update_pi(t, g, rho);
      if (u.at_boundary) continue;
      const CubicCoeffs c = cubic_coeffs(t, g, rho);
      bad += !(std::abs(c(u.pi)) / c.max_abs() < 1e-8);
    }
  }
  return bad;
}

int prop_grid() {
  std::mt19937_64 rng(104);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 10);
    const FitResult r = fit_unconstrained(t);
    const double fitted = oracle::loglik(t, r.params.delta, r.params.pi1, r.params.rho);
    bad += !(r.converged && fitted >= oracle::grid_max(t) - 1e-6);
  }
  return bad;
}

int prop_swap() {
  std::mt19937_64 rng(105);
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  int bad = 0;
  for (int i = 0; i < 400; ++i) {
    const FrequencyTable t = oracle::random_table(rng, 40);
    const double delta0 = d(rng);
    const TestReport a = run_all_tests(t, delta0);
    const TestReport b = run_all_tests(t.swapped(), -delta0);
    const bool on_boundary = (a.warnings | b.warnings) & kWarnBoundary;
    const double ll = a.unconstrained.loglik;
    bad += !(std::abs(ll - b.unconstrained.loglik) <= 1e-8 * std::max(1.0, std::abs(ll)));
    for (int k = 0; k < 3; ++k) {
      if (a.tests[k].available != b.tests[k].available) {
        ++bad;
        continue;
      }
      if (!a.tests[k].available) continue;
      const double tol = k == 0 ? 1e-10 : (on_boundary ? 1e-5 : 1e-8);
      bad += !(std::abs(a.tests[k].q - b.tests[k].q) <= tol * std::max(1.0, a.tests[k].q));
    }
  }
  return bad;
}

int prop_exact_vs_mc(std::string& detail) {
  SimConfig c = design(0.3, 0.2, 0.1, 0.1, 5, 200'000);
  const ExactSize e = exact_tie_small(c);
  const SimSummary s = estimate_tie(c);
  int bad = 0;
  for (int k = 0; k < 3; ++k) {
    const double se = std::sqrt(e.size[k] * (1 - e.size[k]) / double(s.tests[k].valid));
    bad += !(std::abs(s.tests[k].rate - e.size[k]) <= 3 * se);
    detail += fmt(" %.4f", e.size[k]) + fmt("~%.4f", s.tests[k].rate);
  }
  bad += !(std::abs(e.total_probability - 1.0) < 1e-12);
  return bad;
}

int prop_lr_nonnegative() {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> d(-0.9, 0.9);
  int bad = 0;
  for (int i = 0; i < 2000; ++i) {
    const TestReport r = run_all_tests(oracle::random_table(rng, 20), d(rng));
    if (r.tests[0].available) bad += !(r.tests[0].q >= 0.0);
  }
  return bad;
}

void check_properties() {
  std::string exact_detail;
  const int g = prop_gradient();
  const int f = prop_fisher();
  const int c = prop_cubic();
  const int o = prop_grid();
  const int s = prop_swap();
  const int e = prop_exact_vs_mc(exact_detail);
  const int l = prop_lr_nonnegative();
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "violations: gradient %d, information %d, cubic residual %d, grid optimality %d, group swap %d, "
                "exact vs MC %d (exact~MC:%s), Q_LR >= 0 %d",
                g, f, c, o, s, e, exact_detail.c_str(), l);
  report(g + f + c + o + s + e + l == 0, "property suite", buf);
}

void check_sweep() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sweep = random_config_sweep(2000, {}, 10'000, 0.05, 7);
  const TieDistribution w = tie_distribution(sweep, TestKind::wald);
  const TieDistribution sc = tie_distribution(sweep, TestKind::score);
  auto median_dev = [&](TestKind k) {
    std::vector<SweepEntry> dev = sweep;
    for (SweepEntry& e : dev) {
      TestTally& x = e.summary.tests[static_cast<int>(k)];
      x.rate = std::abs(x.rate - 0.05);
    }
    return tie_distribution(dev, k).median;
  };
  const double dw = median_dev(TestKind::wald);
  const double ds = median_dev(TestKind::score);
  const bool ok = sc.iqr() < w.iqr() && ds <= dw;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "IQR score %.4f vs Wald %.4f; median |TIE-5%%| score %.4f vs Wald %.4f; medians %.4f/%.4f; %.0f s",
                sc.iqr(), w.iqr(), ds, dw, sc.median, w.median, seconds_since(t0));
  report(ok, "TIE sweep (2000 configurations x 10000 replicates)", buf);
}

}  // namespace

int main() {
  check_golden("OME golden", ome(),
               {0.6482, 0.5862, -0.0119, 0.6536, 0.5856, {0.0293, 0.0293, 0.0293}, {0.8641, 0.8641, 0.8641}, 1e-4});
  check_golden("Ortho-k golden", orthok(),
               {0.3215, 0.6117, -0.2039, 0.3803, 0.5948, {3.1689, 3.7843, 2.9671}, {0.0751, 0.0517, 0.0850}, 1e-3});
  check_properties();
  check_tie();
  check_power();
  check_sample_size();
  check_sweep();
  std::printf("%d criteria failed\n", g_failed);
  return g_failed;
}
