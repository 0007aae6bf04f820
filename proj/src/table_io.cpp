#include "rdrho/table_io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rdrho/errors.hpp"

namespace rdrho {

namespace {

struct CellKey {
  const char* name;
  bool bilateral;
  std::size_t row;
};

constexpr CellKey kCells[] = {
    {"m0", true, 0}, {"m1", true, 1}, {"m2", true, 2}, {"n0", false, 0}, {"n1", false, 1},
};

const CellKey* find_cell(std::string_view name) {
  for (const CellKey& k : kCells) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

void store(FrequencyTable& t, const CellKey& key, std::size_t group, Count v) {
  if (key.bilateral) {
    t.bilateral[group][key.row] = v;
  } else {
    t.unilateral[group][key.row] = v;
  }
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

Count parse_count(std::string_view token, std::size_t line, const std::string& field) {
  Count v = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec == std::errc::result_out_of_range) throw ParseError("count out of range", line, field);
  if (ec != std::errc() || ptr != end) {
    throw ParseError("expected a non-negative integer, got '" + std::string(token) + "'", line, field);
  }
  if (v < 0) throw ParseError("negative count " + std::string(token), line, field);
  return v;
}

Count json_count(const nlohmann::json& v, const std::string& field) {
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<Count>::max())) {
      throw ParseError("count out of range", 0, field);
    }
    return static_cast<Count>(u);
  }
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0) throw ParseError("negative count " + std::to_string(i), 0, field);
    return i;
  }
  if (v.is_number_float()) {
    throw ParseError("expected a non-negative integer, got " + v.dump(), 0, field);
  }
  throw ParseError(std::string("expected a non-negative integer, got ") + v.type_name(), 0, field);
}

}  // namespace

InputTable parse_table_text(std::string_view text) {
  InputTable out;
  std::map<std::string, std::size_t> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError("expected 'key: value value'", line_no);
    const std::string key(trim(line.substr(0, colon)));
    const auto values = split_ws(trim(line.substr(colon + 1)));

    if (auto it = seen.find(key); it != seen.end()) {
      throw ParseError("duplicate key (first seen on line " + std::to_string(it->second) + ")", line_no, key);
    }
    if (key == "labels") {
      if (values.size() != 2) throw ParseError("expected two group labels", line_no, key);
      out.labels = {std::string(values[0]), std::string(values[1])};
    } else if (const CellKey* cell = find_cell(key)) {
      if (values.size() != 2) {
        throw ParseError("expected two counts (one per group), got " + std::to_string(values.size()), line_no,
                         key);
      }
      for (std::size_t g = 0; g < 2; ++g) store(out.table, *cell, g, parse_count(values[g], line_no, key));
    } else {
      throw ParseError("unknown key", line_no, key);
    }
    seen.emplace(key, line_no);
  }
  if (seen.empty()) throw ParseError("empty table input");
  for (const CellKey& k : kCells) {
    if (!seen.count(k.name)) throw ParseError("missing required key", 0, k.name);
  }
  return out;
}

InputTable parse_table_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("expected a JSON object");
  InputTable out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    const auto& v = it.value();
    if (key == "labels") {
      if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_string()) {
        throw ParseError("expected an array of two strings", 0, key);
      }
      out.labels = {v[0].get<std::string>(), v[1].get<std::string>()};
    } else if (const CellKey* cell = find_cell(key)) {
      if (!v.is_array() || v.size() != 2) throw ParseError("expected an array of two counts", 0, key);
      for (std::size_t g = 0; g < 2; ++g) {
        store(out.table, *cell, g, json_count(v[g], key + "[" + std::to_string(g) + "]"));
      }
    } else {
      throw ParseError("unknown key", 0, key);
    }
  }
  for (const CellKey& k : kCells) {
    if (!doc.contains(k.name)) throw ParseError("missing required key", 0, k.name);
  }
  return out;
}

InputTable parse_table(std::string_view text) {
  const std::string_view t = trim(text);
  if (!t.empty() && t.front() == '{') return parse_table_json(text);
  return parse_table_text(text);
}

InputTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_table(buf.str());
}

std::string format_table_text(const InputTable& input) {
  std::ostringstream out;
  out << "labels: " << input.labels[0] << ' ' << input.labels[1] << '\n';
  for (const CellKey& k : kCells) {
    out << k.name << ':';
    for (std::size_t g = 0; g < 2; ++g) {
      out << ' ' << (k.bilateral ? input.table.bilateral[g][k.row] : input.table.unilateral[g][k.row]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace rdrho
