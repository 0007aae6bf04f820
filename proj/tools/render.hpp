#pragma once

#include <string>

#include "json.hpp"
#include "rdrho/rdrho.h"

namespace rdrho_cli {

using nlohmann::json;

inline constexpr const char* kSchemaVersion = "1";

// Throws std::runtime_error carrying rdrho_last_error() when status != OK.
class ApiError : public std::runtime_error {
 public:
  ApiError(rdrho_status status, const std::string& message) : std::runtime_error(message), status_(status) {}
  rdrho_status status() const noexcept { return status_; }

 private:
  rdrho_status status_;
};

void check(rdrho_status status);

// Stable error code for JSON bodies, e.g. "domain_error".
std::string error_code(rdrho_status status);

const char* boundary_name(int boundary);

json counts_json(const rdrho_counts& counts, const char* label1, const char* label2);

json report_json(const rdrho_report* report, double alpha, const char* label1, const char* label2);
std::string report_text(const rdrho_report* report, double alpha, const char* label1, const char* label2);
// Long format: one "field,value" row per number of report_json.
std::string report_csv(const rdrho_report* report, double alpha);

json sim_config_json(const rdrho_sim_config& config);
json summary_json(const rdrho_sim_config& config, const rdrho_sim_summary& summary);
std::string summary_text(const rdrho_sim_config& config, const rdrho_sim_summary& summary, const char* title);
std::string summary_csv(const rdrho_sim_summary& summary);

json samplesize_json(const rdrho_samplesize_query& query, const rdrho_samplesize_result& result);
std::string samplesize_text(const rdrho_samplesize_query& query, const rdrho_samplesize_result& result);
std::string samplesize_csv(const rdrho_samplesize_query& query, const rdrho_samplesize_result& result);

// Full-precision rendering used in CSV output.
std::string full(double x);
// Fixed 4-decimal rendering used in text output.
std::string fixed4(double x);

}  // namespace rdrho_cli
