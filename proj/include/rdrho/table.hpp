#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace rdrho {

using Count = std::int64_t;

// Number of subjects by number of cured (or affected) organs, for two groups.
//
// Group index 0 is the first group and index 1 the second; the risk
// difference is delta = pi(second) - pi(first). Totals are always derived
// from the cells and never stored.
struct FrequencyTable {
  // bilateral[g][r]: subjects of group g observed on both organs, r cured.
  std::array<std::array<Count, 3>, 2> bilateral{};
  // unilateral[g][r]: subjects of group g observed on one organ, r cured.
  std::array<std::array<Count, 2>, 2> unilateral{};

  Count bilateral_total(std::size_t group) const;
  Count unilateral_total(std::size_t group) const;
  Count bilateral_row(std::size_t r) const { return bilateral[0][r] + bilateral[1][r]; }
  Count unilateral_row(std::size_t r) const { return unilateral[0][r] + unilateral[1][r]; }
  Count bilateral_grand_total() const { return bilateral_total(0) + bilateral_total(1); }
  Count unilateral_grand_total() const { return unilateral_total(0) + unilateral_total(1); }
  Count subjects(std::size_t group) const { return bilateral_total(group) + unilateral_total(group); }

  // rho only enters the bilateral cells.
  bool has_bilateral() const { return bilateral_grand_total() > 0; }

  // The table with the two group columns exchanged.
  FrequencyTable swapped() const;

  // Throws DomainError if any count is negative.
  void validate() const;

  // validate() plus: both groups must contribute at least one subject.
  void require_fittable() const;

  friend bool operator==(const FrequencyTable&, const FrequencyTable&) = default;
};

}  // namespace rdrho
