#include "rdrho/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <utility>

#include "rdrho/errors.hpp"
#include "rdrho/model.hpp"
#include "rdrho/rng.hpp"

namespace rdrho {

namespace {

unsigned resolve_workers(Workers w) {
  if (w > 0) return w;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Splits [0, n) into contiguous chunks, one accumulator per worker, and
// combines the accumulators in chunk order.
template <class Acc, class Body, class Combine>
Acc parallel_reduce(Count n, Workers workers, Body body, Combine combine) {
  const Count chunks = std::min<Count>(std::max<Count>(n, 1), resolve_workers(workers));
  std::vector<Acc> partial(static_cast<std::size_t>(chunks));
  auto run = [&](Count c) {
    const Count begin = n * c / chunks;
    const Count end = n * (c + 1) / chunks;
    for (Count i = begin; i < end; ++i) body(i, partial[static_cast<std::size_t>(c)]);
  };
  if (chunks == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(static_cast<std::size_t>(chunks));
    for (Count c = 0; c < chunks; ++c) threads.emplace_back(run, c);
  }
  Acc total{};
  for (const Acc& p : partial) combine(total, p);
  return total;
}

struct Counts {
  std::array<Count, 3> rejections{};
  std::array<Count, 3> valid{};
  std::array<Count, 3> nonconverged{};
};

void add(Counts& into, const Counts& c) {
  for (std::size_t k = 0; k < 3; ++k) {
    into.rejections[k] += c.rejections[k];
    into.valid[k] += c.valid[k];
    into.nonconverged[k] += c.nonconverged[k];
  }
}

void tally(const FrequencyTable& table, double delta0, double critical, Counts& acc) {
  TestReport report;
  try {
    report = run_all_tests(table, delta0);
  } catch (const std::exception&) {
    for (std::size_t k = 0; k < 3; ++k) ++acc.nonconverged[k];
    return;
  }
  for (std::size_t k = 0; k < 3; ++k) {
    const TestStatistic& s = report.tests[k];
    if (!s.available) {
      ++acc.nonconverged[k];
      continue;
    }
    ++acc.valid[k];
    if (s.q > critical) ++acc.rejections[k];
  }
}

SimSummary summarize(const Counts& c) {
  SimSummary s;
  for (std::size_t k = 0; k < 3; ++k) {
    TestTally& t = s.tests[k];
    t.rejections = c.rejections[k];
    t.valid = c.valid[k];
    t.nonconverged = c.nonconverged[k];
    if (t.valid > 0) {
      t.rate = static_cast<double>(t.rejections) / static_cast<double>(t.valid);
      t.std_error = std::sqrt(t.rate * (1.0 - t.rate) / static_cast<double>(t.valid));
    }
  }
  return s;
}

SimSummary simulate(const SimConfig& config, Workers workers) {
  config.validate();
  const double critical = chisq1_critical(config.alpha);
  const Counts counts = parallel_reduce<Counts>(
      config.replicates, workers,
      [&](Count i, Counts& acc) {
        tally(sample_dataset(config, static_cast<std::uint64_t>(i)), config.delta_null, critical, acc);
      },
      add);
  return summarize(counts);
}

Count binomial(SplitMix64& rng, Count trials, double p) {
  if (trials <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<Count> dist(trials, p);
  return dist(rng);
}

// Uniform on the open interval (lo, hi).
double uniform_open(SplitMix64& rng, double lo, double hi) {
  double u = 0.0;
  do {
    u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  } while (u == 0.0);
  return lo + (hi - lo) * u;
}

Count uniform_int(SplitMix64& rng, Count lo, Count hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::min(hi, lo + static_cast<Count>(u * static_cast<double>(hi - lo + 1)));
}

double log_choose_weight(Count total, Count k) {
  return std::lgamma(static_cast<double>(total) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0);
}

double xlogp(Count k, double p) {
  if (k == 0) return 0.0;
  return static_cast<double>(k) * std::log(p);
}

struct GroupOutcome {
  std::array<Count, 3> bilateral;
  std::array<Count, 2> unilateral;
  double probability;
};

std::vector<GroupOutcome> enumerate_group(Count m, Count n, double pi, double rho) {
  const CellProbs c = cell_probs(pi, rho);
  std::vector<GroupOutcome> out;
  for (Count m2 = 0; m2 <= m; ++m2) {
    for (Count m1 = 0; m1 + m2 <= m; ++m1) {
      const Count m0 = m - m1 - m2;
      const double lp_bi = log_choose_weight(m, m0) - std::lgamma(static_cast<double>(m1) + 1.0) -
                           std::lgamma(static_cast<double>(m2) + 1.0) + xlogp(m0, c.p0) + xlogp(m1, c.p1) +
                           xlogp(m2, c.p2);
      for (Count n1 = 0; n1 <= n; ++n1) {
        const Count n0 = n - n1;
        const double lp_uni = log_choose_weight(n, n0) - std::lgamma(static_cast<double>(n1) + 1.0) +
                              xlogp(n0, 1.0 - pi) + xlogp(n1, pi);
        const double lp = lp_bi + lp_uni;
        // A positive count on a zero cell has probability 0.
        const double prob = std::isfinite(lp) ? std::exp(lp) : 0.0;
        out.push_back({{m0, m1, m2}, {n0, n1}, prob});
      }
    }
  }
  return out;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

void SimConfig::validate() const {
  if (!is_admissible(pi1, rho) || !is_admissible(pi1 + delta_true, rho)) {
    throw DomainError("inadmissible configuration: (pi1=" + fmt(pi1) + ", pi2=" + fmt(pi1 + delta_true) +
                      ", rho=" + fmt(rho) + ") does not keep every cell probability positive");
  }
  if (m1 < 0 || m2 < 0 || n1 < 0 || n2 < 0) throw DomainError("group sizes must be non-negative");
  if (m1 + n1 == 0 || m2 + n2 == 0) throw DomainError("each group needs at least one subject");
  if (replicates < 1) throw DomainError("replicates must be at least 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
  if (!(delta_null > -1.0 && delta_null < 1.0)) throw DomainError("delta_null must lie in (-1, 1)");
}

const char* tie_class_name(TieClass c) {
  switch (c) {
    case TieClass::robust: return "robust";
    case TieClass::liberal: return "liberal";
    case TieClass::conservative: return "conservative";
  }
  return "?";
}

TieClass classify_tie(double rate, double alpha) {
  const double ratio = rate / alpha;
  if (ratio > 1.2) return TieClass::liberal;
  if (ratio < 0.8) return TieClass::conservative;
  return TieClass::robust;
}

FrequencyTable sample_dataset(const SimConfig& config, std::uint64_t replicate_index) {
  SplitMix64 rng(stream_key(config.seed, Stream::replicate, replicate_index));
  FrequencyTable t;
  const std::array<Count, 2> m{config.m1, config.m2};
  const std::array<Count, 2> n{config.n1, config.n2};
  for (std::size_t g = 0; g < 2; ++g) {
    const double pi = g == 0 ? config.pi1 : config.pi1 + config.delta_true;
    const CellProbs c = cell_probs(pi, config.rho);
    const Count m2 = binomial(rng, m[g], c.p2);
    const Count rest = m[g] - m2;
    const Count m1 = binomial(rng, rest, c.p2 < 1.0 ? c.p1 / (1.0 - c.p2) : 0.0);
    t.bilateral[g] = {rest - m1, m1, m2};
    const Count n1 = binomial(rng, n[g], pi);
    t.unilateral[g] = {n[g] - n1, n1};
  }
  return t;
}

SimSummary estimate_tie(const SimConfig& config, Workers workers) {
  if (std::abs(config.delta_true - config.delta_null) > 1e-12) {
    throw DomainError("type I error runs need delta_true == delta_null");
  }
  SimSummary s = simulate(config, workers);
  s.classified = true;
  for (std::size_t k = 0; k < 3; ++k) s.classification[k] = classify_tie(s.tests[k].rate, config.alpha);
  return s;
}

SimSummary estimate_power(const SimConfig& config, Workers workers) {
  if (config.delta_null != 0.0) throw DomainError("power runs test H0: delta = 0 (delta_null must be 0)");
  return simulate(config, workers);
}

std::vector<SweepEntry> random_config_sweep(Count count, const SweepRanges& ranges, Count replicates,
                                            double alpha, std::uint64_t seed, Workers workers) {
  if (count < 0) throw DomainError("sweep count must be non-negative");
  if (ranges.size_lo < 1 || ranges.size_hi < ranges.size_lo) throw DomainError("invalid size range");
  std::vector<SweepEntry> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Count i = 0; i < count; ++i) {
    const std::uint64_t key = stream_key(seed, Stream::sweep_config, static_cast<std::uint64_t>(i));
    SplitMix64 rng(key);
    SimConfig c;
    for (int attempt = 0;; ++attempt) {
      if (attempt > 1'000'000) throw DomainError("sweep ranges admit no admissible configuration");
      c.delta_true = uniform_open(rng, ranges.delta_lo, ranges.delta_hi);
      c.rho = uniform_open(rng, ranges.rho_lo, ranges.rho_hi);
      c.pi1 = uniform_open(rng, ranges.pi1_lo, ranges.pi1_hi);
      if (is_admissible(c.pi1, c.rho) && is_admissible(c.pi1 + c.delta_true, c.rho)) break;
    }
    c.delta_null = c.delta_true;
    c.m1 = c.m2 = uniform_int(rng, ranges.size_lo, ranges.size_hi);
    c.n1 = c.n2 = uniform_int(rng, ranges.size_lo, ranges.size_hi);
    c.replicates = replicates;
    c.alpha = alpha;
    c.seed = rng();
    out.push_back({c, estimate_tie(c, workers)});
  }
  return out;
}

TieDistribution tie_distribution(const std::vector<SweepEntry>& sweep, TestKind kind) {
  std::vector<double> rates;
  for (const SweepEntry& e : sweep) {
    const TestTally& t = e.summary[kind];
    if (t.valid > 0) rates.push_back(t.rate);
  }
  TieDistribution d;
  if (rates.empty()) return d;
  std::sort(rates.begin(), rates.end());
  // Linear interpolation between order statistics.
  auto quantile = [&](double p) {
    const double h = p * static_cast<double>(rates.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, rates.size() - 1);
    return rates[lo] + (h - static_cast<double>(lo)) * (rates[hi] - rates[lo]);
  };
  d.q1 = quantile(0.25);
  d.median = quantile(0.5);
  d.q3 = quantile(0.75);
  return d;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& sweep) {
  out << "index,pi1,delta0,rho,m,n,replicates,alpha,seed,"
         "tie_lr,tie_wald,tie_score,se_lr,se_wald,se_score,"
         "nonconv_lr,nonconv_wald,nonconv_score,class_lr,class_wald,class_score\n";
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const SimConfig& c = sweep[i].config;
    const SimSummary& s = sweep[i].summary;
    out << i << ',' << fmt(c.pi1) << ',' << fmt(c.delta_null) << ',' << fmt(c.rho) << ',' << c.m1 << ','
        << c.n1 << ',' << c.replicates << ',' << fmt(c.alpha) << ',' << c.seed;
    for (const auto& t : s.tests) out << ',' << fmt(t.rate);
    for (const auto& t : s.tests) out << ',' << fmt(t.std_error);
    for (const auto& t : s.tests) out << ',' << t.nonconverged;
    for (const auto cls : s.classification) out << ',' << tie_class_name(cls);
    out << '\n';
  }
}

SampleSizeResult min_sample_size(const SampleSizeQuery& q, Workers workers) {
  if (!(q.target_power > 0.0 && q.target_power < 1.0)) throw DomainError("target power must lie in (0, 1)");
  if (!is_admissible(q.pi1, q.rho) || !is_admissible(q.pi1 + q.delta1, q.rho)) {
    throw DomainError("inadmissible (pi1, pi1 + delta1, rho)");
  }
  if (q.replicates < 1) throw DomainError("replicates must be at least 1");
  if (q.max_size < 1) throw DomainError("max_size must be at least 1");

  std::map<std::pair<Count, Count>, double> cache;
  auto power = [&](Count size, Count replicates) {
    const auto key = std::make_pair(size, replicates);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    SimConfig c;
    c.pi1 = q.pi1;
    c.rho = q.rho;
    c.delta_true = q.delta1;
    c.delta_null = 0.0;
    c.m1 = c.m2 = c.n1 = c.n2 = size;
    c.replicates = replicates;
    c.alpha = q.alpha;
    c.seed = q.seed;
    const double p = estimate_power(c, workers)[q.test].rate;
    cache.emplace(key, p);
    return p;
  };
  auto unattainable = [&]() {
    return UnattainableError("target power " + fmt(q.target_power) + " not reached with m = n <= " +
                             std::to_string(q.max_size));
  };

  const Count r = q.replicates;
  Count lo = 0;  // largest size known to fall short (0: none)
  Count hi = 1;
  while (power(hi, r) < q.target_power) {
    if (hi >= q.max_size) throw unattainable();
    lo = hi;
    hi = std::min(q.max_size, hi * 2);
  }
  while (hi - lo > 1) {
    const Count mid = lo + (hi - lo) / 2;
    if (power(mid, r) >= q.target_power) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  const Count r4 = 4 * r;
  Count size = hi;
  double p = power(size, r4);
  if (p < q.target_power) {
    while (p < q.target_power) {
      if (size >= q.max_size) throw unattainable();
      ++size;
      p = power(size, r4);
    }
  } else {
    while (size > 1) {
      const double below = power(size - 1, r4);
      if (below < q.target_power) break;
      --size;
      p = below;
    }
  }
  return {size, p, r, r4};
}

ExactSize exact_tie_small(const SimConfig& config, Workers workers) {
  config.validate();
  auto group_tables = [](Count m, Count n) {
    return static_cast<double>((m + 1) * (m + 2) / 2) * static_cast<double>(n + 1);
  };
  const double total = group_tables(config.m1, config.n1) * group_tables(config.m2, config.n2);
  if (total > static_cast<double>(kMaxExactTables)) {
    throw DomainError("exact enumeration needs " + fmt(total) + " tables (limit " +
                      std::to_string(kMaxExactTables) + ")");
  }
  const auto g1 = enumerate_group(config.m1, config.n1, config.pi1, config.rho);
  const auto g2 = enumerate_group(config.m2, config.n2, config.pi1 + config.delta_true, config.rho);
  const double critical = chisq1_critical(config.alpha);

  struct Row {
    std::array<double, 3> reject{};
    std::array<double, 3> valid{};
    double prob = 0.0;
  };
  // One row per first-group outcome, summed in index order afterwards so the
  // floating-point total does not depend on the worker count.
  std::vector<Row> rows(g1.size());
  parallel_reduce<int>(
      static_cast<Count>(g1.size()), workers,
      [&](Count i, int&) {
        const GroupOutcome& a = g1[static_cast<std::size_t>(i)];
        Row& row = rows[static_cast<std::size_t>(i)];
        for (const GroupOutcome& b : g2) {
          const double prob = a.probability * b.probability;
          row.prob += prob;
          if (prob == 0.0) continue;
          FrequencyTable t;
          t.bilateral = {a.bilateral, b.bilateral};
          t.unilateral = {a.unilateral, b.unilateral};
          TestReport rep;
          try {
            rep = run_all_tests(t, config.delta_null);
          } catch (const std::exception&) {
            continue;
          }
          for (std::size_t k = 0; k < 3; ++k) {
            if (!rep.tests[k].available) continue;
            row.valid[k] += prob;
            if (rep.tests[k].q > critical) row.reject[k] += prob;
          }
        }
      },
      [](int&, const int&) {});

  ExactSize out;
  out.tables = static_cast<Count>(g1.size() * g2.size());
  for (const Row& row : rows) {
    out.total_probability += row.prob;
    for (std::size_t k = 0; k < 3; ++k) {
      out.rejection_mass[k] += row.reject[k];
      out.valid_mass[k] += row.valid[k];
    }
  }
  for (std::size_t k = 0; k < 3; ++k) {
    out.size[k] = out.valid_mass[k] > 0.0 ? out.rejection_mass[k] / out.valid_mass[k] : 0.0;
  }
  return out;
}

}  // namespace rdrho
