#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rdrho/inference.hpp"
#include "rdrho/mle.hpp"
#include "rdrho/table.hpp"

namespace rdrho {

// One simulation scenario. Group sizes are per group: m1/m2 bilateral
// subjects, n1/n2 unilateral subjects.
struct SimConfig {
  double pi1 = 0.1;
  double rho = 0.0;
  double delta_true = 0.0;  // data-generating risk difference
  double delta_null = 0.0;  // hypothesised delta0
  Count m1 = 50;
  Count m2 = 50;
  Count n1 = 50;
  Count n2 = 50;
  Count replicates = 1000;
  double alpha = 0.05;
  std::uint64_t seed = 1;

  // Throws DomainError unless (pi1, pi1 + delta_true, rho) is admissible,
  // sizes are non-negative, replicates >= 1 and alpha in [0, 1].
  void validate() const;
};

enum class TieClass { robust, liberal, conservative };
const char* tie_class_name(TieClass c);
// robust iff 0.8 <= rate/alpha <= 1.2.
TieClass classify_tie(double rate, double alpha);

struct TestTally {
  Count rejections = 0;
  Count valid = 0;          // replicates where the statistic was available
  Count nonconverged = 0;   // excluded from the denominator
  double rate = 0.0;        // rejections / valid
  double std_error = 0.0;   // sqrt(rate (1 - rate) / valid)
};

struct SimSummary {
  std::array<TestTally, 3> tests{};  // indexed by TestKind
  bool classified = false;           // TIE runs only
  std::array<TieClass, 3> classification{};

  const TestTally& operator[](TestKind k) const { return tests[static_cast<int>(k)]; }
};

// Worker count 0 means std::thread::hardware_concurrency(). Results never
// depend on it.
using Workers = unsigned;

// Draws replicate `replicate_index` of the scenario: a two-stage binomial
// trinomial for the bilateral cells and a binomial for the unilateral ones.
FrequencyTable sample_dataset(const SimConfig& config, std::uint64_t replicate_index);

// Empirical type I error; requires delta_true == delta_null.
SimSummary estimate_tie(const SimConfig& config, Workers workers = 0);

// Empirical power of H0: delta = 0; requires delta_null == 0.
SimSummary estimate_power(const SimConfig& config, Workers workers = 0);

// Ranges for random configurations (open for the real parameters, closed
// for the integer sizes).
struct SweepRanges {
  double delta_lo = -1.0, delta_hi = 1.0;
  double rho_lo = -1.0, rho_hi = 1.0;
  double pi1_lo = 0.0, pi1_hi = 1.0;
  Count size_lo = 50, size_hi = 150;
};

struct SweepEntry {
  SimConfig config;
  SimSummary summary;
};

// `count` admissible configurations drawn uniformly (rejection sampling),
// each with m1 = m2 = m and n1 = n2 = n, run through estimate_tie.
std::vector<SweepEntry> random_config_sweep(Count count, const SweepRanges& ranges, Count replicates,
                                            double alpha, std::uint64_t seed, Workers workers = 0);

// Five-number style summary of per-config TIEs for one test.
struct TieDistribution {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double iqr() const { return q3 - q1; }
};
TieDistribution tie_distribution(const std::vector<SweepEntry>& sweep, TestKind kind);

// One CSV row per configuration, header first.
void write_sweep_csv(std::ostream& out, const std::vector<SweepEntry>& sweep);

struct SampleSizeQuery {
  double rho = 0.0;
  double pi1 = 0.1;
  double delta1 = 0.2;
  double target_power = 0.8;
  double alpha = 0.05;
  TestKind test = TestKind::score;
  Count replicates = 10000;
  std::uint64_t seed = 1;
  Count max_size = 1'000'000;
};

struct SampleSizeResult {
  Count size = 0;              // smallest m = n reaching the target
  double power = 0.0;          // confirmation-run power at `size`
  Count search_replicates = 0;
  Count confirm_replicates = 0;
};

// Smallest m = n with estimated power >= target: doubling bracket, integer
// bisection, then a confirmation pass at 4x the replicate budget. The same
// seed is used at every candidate size (common random numbers). Throws
// UnattainableError if the target is not reached within max_size.
SampleSizeResult min_sample_size(const SampleSizeQuery& query, Workers workers = 0);

struct ExactSize {
  std::array<double, 3> size{};            // P(reject | statistic available)
  std::array<double, 3> rejection_mass{};  // P(reject and available)
  std::array<double, 3> valid_mass{};      // P(available)
  double total_probability = 0.0;
  Count tables = 0;
};

inline constexpr Count kMaxExactTables = 1'000'000;

// Exact rejection probabilities by enumerating every table with the
// configured group sizes. Throws DomainError above kMaxExactTables tables.
ExactSize exact_tie_small(const SimConfig& config, Workers workers = 0);

}  // namespace rdrho
