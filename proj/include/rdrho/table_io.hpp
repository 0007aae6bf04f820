#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "rdrho/table.hpp"

namespace rdrho {

// A frequency table as read from a file, with optional group labels.
struct InputTable {
  FrequencyTable table;
  std::array<std::string, 2> labels{"group1", "group2"};
};

// Keyed text format, one line per cell row with the two group columns:
//
//   # comment
//   labels: Cefaclor Amoxicillin
//   m0: 9 7
//   m1: 7 5
//   m2: 23 13
//   n0: 20 19
//   n1: 34 36
//
// m0..n1 are required exactly once; labels is optional.
InputTable parse_table_text(std::string_view text);

// JSON equivalent: {"labels": [..], "m0": [a, b], ..., "n1": [a, b]}.
InputTable parse_table_json(std::string_view text);

// Dispatches on the first non-blank character ('{' means JSON).
InputTable parse_table(std::string_view text);

InputTable load_table(const std::filesystem::path& path);

std::string format_table_text(const InputTable& input);

}  // namespace rdrho
