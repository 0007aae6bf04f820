#include "rdrho/table.hpp"

#include <string>

#include "rdrho/errors.hpp"

namespace rdrho {

Count FrequencyTable::bilateral_total(std::size_t group) const {
  const auto& m = bilateral[group];
  return m[0] + m[1] + m[2];
}

Count FrequencyTable::unilateral_total(std::size_t group) const {
  const auto& n = unilateral[group];
  return n[0] + n[1];
}

FrequencyTable FrequencyTable::swapped() const {
  FrequencyTable out;
  out.bilateral = {bilateral[1], bilateral[0]};
  out.unilateral = {unilateral[1], unilateral[0]};
  return out;
}

void FrequencyTable::validate() const {
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t r = 0; r < 3; ++r) {
      if (bilateral[g][r] < 0) {
        throw DomainError("negative bilateral count m" + std::to_string(r) + " in group " +
                          std::to_string(g + 1));
      }
    }
    for (std::size_t r = 0; r < 2; ++r) {
      if (unilateral[g][r] < 0) {
        throw DomainError("negative unilateral count n" + std::to_string(r) + " in group " +
                          std::to_string(g + 1));
      }
    }
  }
}

void FrequencyTable::require_fittable() const {
  validate();
  for (std::size_t g = 0; g < 2; ++g) {
    if (subjects(g) == 0) {
      throw DomainError("group " + std::to_string(g + 1) + " has no subjects");
    }
  }
}

}  // namespace rdrho
