#include "rdrho/mle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "rdrho/errors.hpp"

namespace rdrho {

namespace {

// Relative slack when comparing log-likelihoods of successive iterates.
double ll_slack(double ll) { return 1e-13 * std::max(1.0, std::abs(ll)); }

constexpr int kMaxHalvings = 30;

// Scoring iterations over which the log-likelihood must improve before the
// fit hands over to the profile search.
constexpr int kProgressWindow = 20;

double pooled_proportion(const FrequencyTable& t) {
  const double cured = static_cast<double>(t.bilateral_row(1) + 2 * t.bilateral_row(2) + t.unilateral_row(1));
  const double organs = static_cast<double>(2 * t.bilateral_grand_total() + t.unilateral_grand_total());
  return organs > 0.0 ? cured / organs : 0.5;
}

// pi1 range admissible for both groups at (delta0, rho); empty when lo > hi.
Interval constrained_pi_range(const Interval& pi_iv, double delta0, double rho) {
  const Interval fp = feasible_pi(rho);
  return {std::max({pi_iv.lo, fp.lo, fp.lo - delta0}), std::min({pi_iv.hi, fp.hi, fp.hi - delta0})};
}

constexpr int kBrentBits = std::numeric_limits<double>::digits / 2 + 4;

// Maximizes loglik over (pi1, rho) with delta fixed by profiling: for fixed
// rho every cell log-probability is a sum of logs of affine functions of pi1,
// so the inner problem is concave and a 1-D search finds its maximum.
struct ProfilePoint {
  double pi1;
  double rho;
  double ll;
};

// The pi1 bounds of constrained_pi_range as functions of rho, with their
// derivatives in rho.
enum class Edge { none, fixed, fp_lo, fp_hi };

struct EdgeValue {
  double pi1;
  double slope;
};

EdgeValue edge_value(Edge e, double shift, double rho) {
  const double r = rho - kRhoMargin;
  switch (e) {
    case Edge::fp_lo: return {-r / (1.0 - r) - shift, -1.0 / ((1.0 - r) * (1.0 - r))};
    case Edge::fp_hi: return {1.0 / (1.0 - r) - shift, 1.0 / ((1.0 - r) * (1.0 - r))};
    default: return {shift, 0.0};
  }
}

// Which bound pi1 sits on at rho, as (edge, shift) with pi1 = edge(rho) - shift.
std::pair<Edge, double> active_edge(const Interval& pi_iv, double delta0, double rho, double pi1) {
  const Interval iv = constrained_pi_range(pi_iv, delta0, rho);
  if (pi1 != iv.lo && pi1 != iv.hi) return {Edge::none, 0.0};
  if (pi1 == pi_iv.lo || pi1 == pi_iv.hi) return {Edge::fixed, pi1};
  const Interval fp = feasible_pi(rho);
  if (rho - kRhoMargin >= 0.0) return {Edge::fixed, pi1};
  if (pi1 == fp.lo) return {Edge::fp_lo, 0.0};
  if (pi1 == fp.lo - delta0) return {Edge::fp_lo, delta0};
  if (pi1 == fp.hi) return {Edge::fp_hi, 0.0};
  if (pi1 == fp.hi - delta0) return {Edge::fp_hi, delta0};
  return {Edge::none, 0.0};
}

// A profile maximum with pi1 on a bound lies on a curve pi1 = e(rho) along
// which loglik is smooth. Its maximum there is a root of the tangential
// derivative, which a bracketing solver finds to full precision where a
// minimiser stops near sqrt(epsilon).
ProfilePoint polish_on_edge(const FrequencyTable& t, double delta0, const Interval& pi_iv, const ProfilePoint& p,
                            double rho_lo, double rho_hi) {
  const auto [edge, shift] = active_edge(pi_iv, delta0, p.rho, p.pi1);
  if (edge == Edge::none || edge == Edge::fixed) return p;
  auto on_curve = [&](double rho) {
    const EdgeValue e = edge_value(edge, shift, rho);
    return GammaParams{delta0, e.pi1, rho};
  };
  auto tangential = [&](double rho) {
    const GammaParams g = on_curve(rho);
    const EdgeValue e = edge_value(edge, shift, rho);
    const GroupScore s1 = group_score(t, 0, g.pi1, rho);
    const GroupScore s2 = group_score(t, 1, g.pi2(), rho);
    return (s1.d_pi + s2.d_pi) * e.slope + s1.d_rho + s2.d_rho;
  };
  auto valid = [&](double rho) {
    if (!(rho > rho_lo && rho < rho_hi)) return false;
    const GammaParams g = on_curve(rho);
    const Interval iv = constrained_pi_range(pi_iv, delta0, rho);
    return iv.lo <= iv.hi && g.pi1 >= iv.lo && g.pi1 <= iv.hi && is_admissible(g);
  };
  const double w = 1e-6 * std::max(1.0, std::abs(p.rho));
  const double a = p.rho - w;
  const double b = p.rho + w;
  if (!valid(a) || !valid(b)) return p;
  double fa = 0.0;
  double fb = 0.0;
  try {
    fa = tangential(a);
    fb = tangential(b);
  } catch (const DomainError&) {
    return p;
  }
  if (!(fa > 0.0 && fb < 0.0)) return p;
  std::uintmax_t iters = 100;
  const auto root = boost::math::tools::toms748_solve(tangential, a, b, fa, fb,
                                                      boost::math::tools::eps_tolerance<double>(), iters);
  const double rho = 0.5 * (root.first + root.second);
  const GammaParams g = on_curve(rho);
  const double ll = loglik_gamma(t, g);
  if (!(ll >= p.ll - ll_slack(p.ll))) return p;
  return {g.pi1, rho, ll};
}

// Newton steps on the (pi1, rho) score from a point near an interior
// maximum; the Hessian is a central difference of the analytic score.
ProfilePoint polish_interior(const FrequencyTable& t, double delta0, const ProfilePoint& p) {
  auto score = [&](double pi1, double rho) {
    const GroupScore s1 = group_score(t, 0, pi1, rho);
    const GroupScore s2 = group_score(t, 1, pi1 + delta0, rho);
    return std::array<double, 2>{s1.d_pi + s2.d_pi, s1.d_rho + s2.d_rho};
  };
  ProfilePoint cur = p;
  for (int it = 0; it < 8; ++it) {
    const std::array<double, 2> u = score(cur.pi1, cur.rho);
    constexpr double h = 1e-6;
    if (!is_admissible(GammaParams{delta0, cur.pi1 - h, cur.rho - h}) ||
        !is_admissible(GammaParams{delta0, cur.pi1 + h, cur.rho + h}) ||
        !is_admissible(GammaParams{delta0, cur.pi1 - h, cur.rho + h}) ||
        !is_admissible(GammaParams{delta0, cur.pi1 + h, cur.rho - h})) {
      break;
    }
    const std::array<double, 2> up = score(cur.pi1 + h, cur.rho);
    const std::array<double, 2> dp = score(cur.pi1 - h, cur.rho);
    const std::array<double, 2> ur = score(cur.pi1, cur.rho + h);
    const std::array<double, 2> dr = score(cur.pi1, cur.rho - h);
    const double hpp = (up[0] - dp[0]) / (2.0 * h);
    const double hrr = (ur[1] - dr[1]) / (2.0 * h);
    const double hpr = 0.25 * ((up[1] - dp[1]) + (ur[0] - dr[0])) / h;
    const double det = hpp * hrr - hpr * hpr;
    if (!(hpp < 0.0 && det > 0.0)) break;
    const double step_pi = -(hrr * u[0] - hpr * u[1]) / det;
    const double step_rho = -(hpp * u[1] - hpr * u[0]) / det;
    const GammaParams g{delta0, cur.pi1 + step_pi, cur.rho + step_rho};
    if (!is_admissible(g)) break;
    const double ll = loglik_gamma(t, g);
    if (!(ll >= cur.ll - ll_slack(cur.ll))) break;
    cur = {g.pi1, g.rho, ll};
    if (std::hypot(step_pi, step_rho) < 1e-14) break;
  }
  return cur;
}

ProfilePoint profile_constrained(const FrequencyTable& t, double delta0, const Interval& pi_iv) {
  auto inner = [&](double rho) {
    const Interval iv = constrained_pi_range(pi_iv, delta0, rho);
    if (iv.lo > iv.hi) return ProfilePoint{0.5 * (iv.lo + iv.hi), rho, -std::numeric_limits<double>::infinity()};
    if (iv.lo == iv.hi) return ProfilePoint{iv.lo, rho, loglik_gamma(t, {delta0, iv.lo, rho})};
    const auto r = boost::math::tools::brent_find_minima(
        [&](double pi1) { return -loglik_gamma(t, {delta0, pi1, rho}); }, iv.lo, iv.hi, kBrentBits);
    ProfilePoint best{r.first, rho, -r.second};
    for (double edge : {iv.lo, iv.hi}) {
      const double ll = loglik_gamma(t, {delta0, edge, rho});
      if (ll > best.ll) best = {edge, rho, ll};
    }
    return best;
  };

  // Smallest rho with a non-empty pi1 range; the range only grows with rho.
  double lo = -1.0;
  double hi = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    const Interval iv = constrained_pi_range(pi_iv, delta0, mid);
    (iv.lo <= iv.hi ? hi : lo) = mid;
  }
  const double rho_lo = hi;
  const double rho_hi = 1.0 - kRhoMargin;

  const auto r = boost::math::tools::brent_find_minima([&](double rho) { return -inner(rho).ll; }, rho_lo, rho_hi,
                                                       kBrentBits);
  ProfilePoint best = inner(r.first);
  for (double edge : {rho_lo, rho_hi}) {
    const ProfilePoint p = inner(edge);
    if (p.ll > best.ll) best = p;
  }
  if (active_edge(pi_iv, delta0, best.rho, best.pi1).first != Edge::none) {
    return polish_on_edge(t, delta0, pi_iv, best, rho_lo, rho_hi);
  }
  return polish_interior(t, delta0, best);
}

// Maximizes loglik over (pi1, pi2, rho) by profiling rho: at fixed rho each
// group's maximum over pi is the exact per-group update. A coarse scan guards
// against a multimodal profile before the 1-D refinement.
struct UnconstrainedPoint {
  PiUpdate u1;
  PiUpdate u2;
  double rho;
  double ll;
};

UnconstrainedPoint profile_unconstrained(const FrequencyTable& t) {
  auto at = [&](double rho) {
    const PiUpdate a = update_pi(t, 0, rho);
    const PiUpdate b = update_pi(t, 1, rho);
    return UnconstrainedPoint{a, b, rho, loglik_beta(t, {a.pi, b.pi, rho})};
  };
  constexpr int kScan = 64;
  const double lo = -1.0 + kRhoMargin;
  const double hi = 1.0 - kRhoMargin;
  const double width = (hi - lo) / kScan;
  UnconstrainedPoint best = at(lo);
  int best_i = 0;
  for (int i = 1; i <= kScan; ++i) {
    const UnconstrainedPoint p = at(i == kScan ? hi : lo + width * i);
    if (p.ll > best.ll) {
      best = p;
      best_i = i;
    }
  }
  const double a = std::max(lo, lo + width * (best_i - 1));
  const double b = std::min(hi, lo + width * (best_i + 1));
  const auto r = boost::math::tools::brent_find_minima([&](double rho) { return -at(rho).ll; }, a, b, kBrentBits);
  const UnconstrainedPoint refined = at(r.first);
  return refined.ll > best.ll ? refined : best;
}

}  // namespace

void FitOptions::validate() const {
  if (!(tolerance > 0.0)) throw DomainError("fit tolerance must be positive");
  if (max_iterations < 1) throw DomainError("max_iterations must be at least 1");
  if (!(score_tolerance > 0.0)) throw DomainError("score tolerance must be positive");
  if (!(rho_init < 1.0 && rho_init > -1.0)) throw DomainError("rho_init must lie in (-1, 1)");
  if (pi_init_rule == PiInitRule::custom && !(pi_init > 0.0 && pi_init < 1.0)) {
    throw DomainError("custom pi_init must lie in (0, 1)");
  }
}

Interval feasible_pi(double rho) {
  // L(pi) <= rho - margin  <=>  -r/(1-r) <= pi <= 1/(1-r)  with r = rho - margin < 0
  const double r = rho - kRhoMargin;
  Interval iv{kPiMargin, 1.0 - kPiMargin};
  if (r < 0.0) {
    iv.lo = std::max(iv.lo, -r / (1.0 - r));
    iv.hi = std::min(iv.hi, 1.0 / (1.0 - r));
  }
  if (iv.lo > iv.hi) iv.lo = iv.hi = 0.5 * (iv.lo + iv.hi);
  return iv;
}

Interval feasible_rho(double pi1, double pi2) {
  return {rho_lower_bound(pi1, pi2) + kRhoMargin, 1.0 - kRhoMargin};
}

PiUpdate update_pi(const FrequencyTable& t, std::size_t g, double rho) {
  const Interval iv = feasible_pi(rho);
  const CubicCoeffs cc = cubic_coeffs(t, g, rho);

  PiUpdate best;
  double best_ll = -std::numeric_limits<double>::infinity();
  bool have = false;
  auto consider = [&](double pi, bool boundary) {
    if (!(pi >= iv.lo && pi <= iv.hi)) return;
    const double ll = group_loglik(t, g, pi, rho);
    if (!have || ll > best_ll) {
      have = true;
      best_ll = ll;
      best.pi = pi;
      best.at_boundary = boundary;
    }
  };

  try {
    consider(cubic_root(cc), false);
  } catch (const CubicFallbackRequired&) {
    best.used_fallback = true;
  }
  for (double r : real_cubic_roots(cc)) consider(r, false);
  consider(iv.lo, true);
  consider(iv.hi, true);

  const double scale = cc.max_abs();
  best.residual = (!best.at_boundary && scale > 0.0) ? std::abs(cc(best.pi)) / scale : 0.0;
  return best;
}

FitResult fit_unconstrained(const FrequencyTable& t, const FitOptions& opts) {
  opts.validate();
  t.require_fittable();

  FitResult res;
  res.rho_identified = t.has_bilateral();
  // Without bilateral subjects the likelihood is flat in rho; 0 leaves the
  // pi intervals unrestricted.
  double rho = res.rho_identified ? opts.rho_init : 0.0;
  PiUpdate u1 = update_pi(t, 0, rho);
  PiUpdate u2 = update_pi(t, 1, rho);
  double ll = loglik_beta(t, {u1.pi, u2.pi, rho});
  bool rho_clamped = false;
  bool stalled = false;

  if (!res.rho_identified) {
    res.converged = true;
    res.iterations = 1;
  }

  for (int it = 1; res.rho_identified && it <= opts.max_iterations; ++it) {
    res.iterations = it;
    const Interval rr = feasible_rho(u1.pi, u2.pi);
    const BetaParams here{u1.pi, u2.pi, rho};
    const double grad = dloglik_drho(t, here);
    const double hess = d2loglik_drho2(t, here);
    const double step = hess < 0.0 ? -grad / hess : grad;

    double rho_new = rho;
    bool moved = false;
    double scale = 1.0;
    for (int h = 0; h <= kMaxHalvings; ++h, scale *= 0.5) {
      const double cand = rr.clamp(rho + scale * step);
      const double ll_cand = loglik_beta(t, {u1.pi, u2.pi, cand});
      if (ll_cand >= ll - ll_slack(ll)) {
        rho_new = cand;
        moved = true;
        break;
      }
    }

    const PiUpdate n1 = update_pi(t, 0, rho_new);
    const PiUpdate n2 = update_pi(t, 1, rho_new);
    const double d_rho = std::abs(rho_new - rho);
    const double d_pi = std::max(std::abs(n1.pi - u1.pi), std::abs(n2.pi - u2.pi));
    rho = rho_new;
    u1 = n1;
    u2 = n2;
    ll = loglik_beta(t, {u1.pi, u2.pi, rho});
    res.final_step_norm = d_rho;

    const Interval rr_now = feasible_rho(u1.pi, u2.pi);
    const double g_now = dloglik_drho(t, {u1.pi, u2.pi, rho});
    rho_clamped = (rho <= rr_now.lo && g_now < 0.0) || (rho >= rr_now.hi && g_now > 0.0);
    if (d_rho < opts.tolerance && d_pi < 100.0 * opts.tolerance &&
        (rho_clamped || std::abs(g_now) < opts.score_tolerance)) {
      res.converged = true;
      break;
    }
    if (!moved) {
      stalled = true;
      break;
    }
  }

  // On the admissibility boundary the pi updates and the rho step clamp each
  // other and the alternation can stop short of the maximum along the edge.
  if (res.rho_identified && (stalled || (res.converged && (rho_clamped || u1.at_boundary || u2.at_boundary)))) {
    const UnconstrainedPoint p = profile_unconstrained(t);
    if (p.ll >= ll - ll_slack(ll)) {
      if (p.ll > ll) {
        u1 = p.u1;
        u2 = p.u2;
        rho = p.rho;
        ll = p.ll;
      }
      res.converged = true;
      res.used_profile = true;
      const Interval rr = feasible_rho(u1.pi, u2.pi);
      constexpr double kNear = 1e-7;
      rho_clamped = rho - rr.lo < kNear || rr.hi - rho < kNear;
    }
  }

  res.params = to_gamma({u1.pi, u2.pi, rho});
  res.loglik = ll;
  if (u1.at_boundary || u2.at_boundary) {
    res.boundary = Boundary::pi_clamped;
  } else if (rho_clamped) {
    res.boundary = Boundary::rho_clamped;
  }
  return res;
}

FitResult fit_constrained(const FrequencyTable& t, double delta0, const FitOptions& opts) {
  opts.validate();
  t.require_fittable();
  if (!(delta0 > -1.0 && delta0 < 1.0)) {
    throw DomainError("delta0=" + std::to_string(delta0) + " outside (-1, 1)");
  }
  const Interval pi_iv{std::max(kPiMargin, -delta0 + kPiMargin), std::min(1.0 - kPiMargin, 1.0 - delta0 - kPiMargin)};
  if (!(pi_iv.lo < pi_iv.hi)) {
    throw DomainError("no feasible pi1 for delta0=" + std::to_string(delta0));
  }

  FitResult res;
  res.rho_identified = t.has_bilateral();
  const double start = opts.pi_init_rule == PiInitRule::custom ? opts.pi_init : pooled_proportion(t);
  double pi1 = pi_iv.clamp(start);
  double rho = res.rho_identified ? feasible_rho(pi1, pi1 + delta0).clamp(opts.rho_init) : 0.0;
  double ll = loglik_gamma(t, {delta0, pi1, rho});
  bool pi_clamped = false;
  bool rho_clamped = false;
  bool stalled = false;
  double ll_window = ll;
  bool no_progress = false;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    res.iterations = it;
    const double pi2 = pi1 + delta0;
    const GroupScore s1 = group_score(t, 0, pi1, rho);
    const GroupScore s2 = group_score(t, 1, pi2, rho);
    const double u_pi = s1.d_pi + s2.d_pi;
    const double u_rho = s1.d_rho + s2.d_rho;
    const GroupInfo j1 = group_info(t.bilateral_total(0), t.unilateral_total(0), pi1, rho);
    const GroupInfo j2 = group_info(t.bilateral_total(1), t.unilateral_total(1), pi2, rho);
    const double i22 = j1.pi_pi + j2.pi_pi;
    const double i23 = j1.pi_rho + j2.pi_rho;
    const double i33 = j1.rho_rho + j2.rho_rho;

    double step_pi = 0.0;
    double step_rho = 0.0;
    if (res.rho_identified) {
      const double det = i22 * i33 - i23 * i23;
      if (!(i22 > 0.0 && det > 0.0) || !std::isfinite(det)) {
        throw SingularInformationError("(pi1, rho) information block is singular at pi1=" +
                                       std::to_string(pi1) + ", rho=" + std::to_string(rho));
      }
      step_pi = (i33 * u_pi - i23 * u_rho) / det;
      step_rho = (i22 * u_rho - i23 * u_pi) / det;
    } else {
      if (!(i22 > 0.0) || !std::isfinite(i22)) {
        throw SingularInformationError("pi1 information is singular at pi1=" + std::to_string(pi1));
      }
      step_pi = u_pi / i22;
    }

    double pi_new = pi1;
    double rho_new = rho;
    bool moved = false;
    bool projected = false;
    double scale = 1.0;
    for (int h = 0; h <= kMaxHalvings; ++h, scale *= 0.5) {
      const double cand_pi = pi_iv.clamp(pi1 + scale * step_pi);
      const double cand_rho =
          res.rho_identified ? feasible_rho(cand_pi, cand_pi + delta0).clamp(rho + scale * step_rho) : rho;
      const double ll_cand = loglik_gamma(t, {delta0, cand_pi, cand_rho});
      if (ll_cand >= ll - ll_slack(ll)) {
        pi_new = cand_pi;
        rho_new = cand_rho;
        moved = true;
        projected = cand_pi != pi1 + scale * step_pi || (res.rho_identified && cand_rho != rho + scale * step_rho);
        break;
      }
    }

    const double norm = std::hypot(pi_new - pi1, rho_new - rho);
    pi1 = pi_new;
    rho = rho_new;
    ll = loglik_gamma(t, {delta0, pi1, rho});
    res.final_step_norm = norm;

    const GroupScore n1 = group_score(t, 0, pi1, rho);
    const GroupScore n2 = group_score(t, 1, pi1 + delta0, rho);
    const double g_pi = n1.d_pi + n2.d_pi;
    const double g_rho = n1.d_rho + n2.d_rho;
    const Interval rr = feasible_rho(pi1, pi1 + delta0);
    pi_clamped = (pi1 <= pi_iv.lo && g_pi < 0.0) || (pi1 >= pi_iv.hi && g_pi > 0.0);
    rho_clamped = res.rho_identified && ((rho <= rr.lo && g_rho < 0.0) || (rho >= rr.hi && g_rho > 0.0));
    const bool pi_ok = pi_clamped || std::abs(g_pi) < opts.score_tolerance;
    const bool rho_ok = !res.rho_identified || rho_clamped || std::abs(g_rho) < opts.score_tolerance;
    if (norm < opts.tolerance && pi_ok && rho_ok) {
      res.converged = true;
      break;
    }
    if (it % kProgressWindow == 0) {
      no_progress = ll - ll_window < 1e-10 * std::max(1.0, std::abs(ll));
      ll_window = ll;
    }
    if (!moved || (projected && norm < opts.tolerance) || no_progress) {
      stalled = true;
      break;
    }
  }

  // Scoring can stall where the rho bound, which moves with pi1, is active
  // (the projected step vanishes although the pi1 score does not), and it
  // can crawl or cycle where the expected information is a poor model of the
  // curvature.
  // Profile the likelihood instead and keep whichever point is higher.
  if ((stalled || !res.converged) && res.rho_identified) {
    const ProfilePoint p = profile_constrained(t, delta0, pi_iv);
    if (p.ll >= ll - ll_slack(ll)) {
      if (p.ll > ll) {
        pi1 = p.pi1;
        rho = p.rho;
        ll = p.ll;
      }
      res.converged = true;
      res.used_profile = true;
      const Interval rr = feasible_rho(pi1, pi1 + delta0);
      const Interval pr = constrained_pi_range(pi_iv, delta0, rho);
      constexpr double kNear = 1e-7;
      rho_clamped = rho - rr.lo < kNear || rr.hi - rho < kNear;
      pi_clamped = !rho_clamped && (pi1 - pr.lo < kNear || pr.hi - pi1 < kNear);
    }
  }

  res.params = {delta0, pi1, rho};
  res.loglik = ll;
  if (pi_clamped) {
    res.boundary = Boundary::pi_clamped;
  } else if (rho_clamped) {
    res.boundary = Boundary::rho_clamped;
  }
  return res;
}

double schur_I11(const InfoMatrix& info) {
  const double i22 = info(1, 1);
  const double i23 = info(1, 2);
  const double i33 = info(2, 2);
  const double det = i22 * i33 - i23 * i23;
  if (!(i22 > 0.0 && det > 0.0) || !std::isfinite(det)) {
    throw SingularInformationError("(pi1, rho) information block is singular; Wald and score tests unavailable");
  }
  const double b = info(0, 1);
  const double c = info(0, 2);
  // (b, c) B^{-1} (b, c)'
  const double quad = (i33 * b * b - 2.0 * i23 * b * c + i22 * c * c) / det;
  const double complement = info(0, 0) - quad;
  if (!(complement > 0.0) || !std::isfinite(complement)) {
    throw SingularInformationError("information matrix is singular; Wald and score tests unavailable");
  }
  return 1.0 / complement;
}

}  // namespace rdrho
