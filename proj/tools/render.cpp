#include "render.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace rdrho_cli {

namespace {

constexpr rdrho_test kTests[] = {RDRHO_TEST_LR, RDRHO_TEST_WALD, RDRHO_TEST_SCORE};

json fit_json(const rdrho_fit& f) {
  return {{"delta", f.delta},
          {"pi1", f.pi1},
          {"pi2", f.pi2},
          {"rho", f.rho},
          {"loglik", f.loglik},
          {"iterations", f.iterations},
          {"converged", f.converged != 0},
          {"boundary", boundary_name(f.boundary)},
          {"rho_identified", f.rho_identified != 0},
          {"final_step_norm", f.final_step_norm}};
}

json warnings_json(uint32_t bits) {
  json out = json::array();
  for (uint32_t bit = 1; bit != 0 && bit <= bits; bit <<= 1) {
    if (bits & bit) {
      const char* name = rdrho_warning_name(bit);
      out.push_back(name ? name : "unknown");
    }
  }
  return out;
}

// Flattens nested objects into "a.b" keys; arrays use their index.
void flatten(const json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object() || j.is_array()) {
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      const std::string key = j.is_object() ? it.key() : std::to_string(i);
      flatten(*it, prefix.empty() ? key : prefix + "." + key, out);
    }
    return;
  }
  out << prefix << ',';
  if (j.is_number_float()) {
    out << full(j.get<double>());
  } else if (j.is_string()) {
    out << j.get<std::string>();
  } else if (!j.is_null()) {
    out << j.dump();
  }
  out << '\n';
}

std::string flat_csv(const json& j) {
  std::ostringstream out;
  out << "field,value\n";
  flatten(j, "", out);
  return out.str();
}

const char* display_name(rdrho_test t) {
  switch (t) {
    case RDRHO_TEST_LR: return "Q_LR";
    case RDRHO_TEST_WALD: return "Q_W";
    case RDRHO_TEST_SCORE: return "Q_S";
  }
  return "?";
}

}  // namespace

void check(rdrho_status status) {
  if (status != RDRHO_OK) throw ApiError(status, rdrho_last_error());
}

std::string error_code(rdrho_status status) { return rdrho_status_name(status); }

const char* boundary_name(int boundary) {
  switch (boundary) {
    case RDRHO_BOUNDARY_INTERIOR: return "interior";
    case RDRHO_BOUNDARY_PI_CLAMPED: return "pi_clamped";
    case RDRHO_BOUNDARY_RHO_CLAMPED: return "rho_clamped";
  }
  return "unknown";
}

std::string full(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fixed4(double x) {
  if (!std::isfinite(x)) return full(x);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  // Avoid "-0.0000".
  if (std::string(buf) == "-0.0000") return "0.0000";
  return buf;
}

json counts_json(const rdrho_counts& c, const char* label1, const char* label2) {
  return {{"labels", {label1 ? label1 : "group1", label2 ? label2 : "group2"}},
          {"m0", {c.m[0][0], c.m[0][1]}},
          {"m1", {c.m[1][0], c.m[1][1]}},
          {"m2", {c.m[2][0], c.m[2][1]}},
          {"n0", {c.n[0][0], c.n[0][1]}},
          {"n1", {c.n[1][0], c.n[1][1]}}};
}

json report_json(const rdrho_report* report, double alpha, const char* label1, const char* label2) {
  json tests = json::object();
  for (rdrho_test t : kTests) {
    double q = 0.0;
    double p = 1.0;
    int available = 0;
    check(rdrho_report_statistic(report, t, &q, &p, &available));
    json entry;
    if (available) {
      entry = {{"statistic", q}, {"p_value", p}, {"available", true}, {"reject", rdrho_rejects(q, alpha) != 0}};
    } else {
      entry = {{"statistic", nullptr}, {"p_value", nullptr}, {"available", false}, {"reject", nullptr}};
    }
    tests[rdrho_test_name(t)] = entry;
  }
  rdrho_fit unc{};
  rdrho_fit con{};
  check(rdrho_report_fit(report, 0, &unc));
  check(rdrho_report_fit(report, 1, &con));
  const double reduced_score = rdrho_report_score_reduced(report);
  return {{"schema_version", kSchemaVersion},
          {"labels", {label1 ? label1 : "group1", label2 ? label2 : "group2"}},
          {"delta0", rdrho_report_delta0(report)},
          {"alpha", alpha},
          {"complete", rdrho_report_complete(report) != 0},
          {"tests", tests},
          {"score_reduced_form", std::isfinite(reduced_score) ? json(reduced_score) : json(nullptr)},
          {"unconstrained", fit_json(unc)},
          {"constrained", fit_json(con)},
          {"warnings", warnings_json(rdrho_report_warnings(report))}};
}

std::string report_text(const rdrho_report* report, double alpha, const char* label1, const char* label2) {
  const json j = report_json(report, alpha, label1, label2);
  std::ostringstream out;
  out << "H0: delta = " << fixed4(j["delta0"].get<double>()) << "  (delta = pi2 - pi1, group 1 = "
      << j["labels"][0].get<std::string>() << ", group 2 = " << j["labels"][1].get<std::string>() << ")\n";
  out << "alpha = " << fixed4(alpha) << "\n\n";
  out << "test      statistic   p-value   reject\n";
  for (rdrho_test t : kTests) {
    const json& e = j["tests"][rdrho_test_name(t)];
    char line[96];
    if (e["available"].get<bool>()) {
      std::snprintf(line, sizeof line, "%-8s  %9s  %8s   %s\n", display_name(t),
                    fixed4(e["statistic"].get<double>()).c_str(), fixed4(e["p_value"].get<double>()).c_str(),
                    e["reject"].get<bool>() ? "yes" : "no");
    } else {
      std::snprintf(line, sizeof line, "%-8s  %9s  %8s   %s\n", display_name(t), "n/a", "n/a", "-");
    }
    out << line;
  }
  const json& u = j["unconstrained"];
  const json& c = j["constrained"];
  out << "\nunconstrained MLE: delta = " << fixed4(u["delta"].get<double>())
      << ", pi1 = " << fixed4(u["pi1"].get<double>()) << ", rho = " << fixed4(u["rho"].get<double>())
      << "  (" << u["boundary"].get<std::string>() << (u["converged"].get<bool>() ? "" : ", not converged")
      << ")\n";
  out << "constrained MLE:   pi1 = " << fixed4(c["pi1"].get<double>()) << ", rho = " << fixed4(c["rho"].get<double>())
      << "  (" << c["boundary"].get<std::string>() << (c["converged"].get<bool>() ? "" : ", not converged")
      << ")\n";
  if (!j["warnings"].empty()) {
    out << "warnings:";
    for (const auto& w : j["warnings"]) out << ' ' << w.get<std::string>();
    out << '\n';
  }
  return out.str();
}

std::string report_csv(const rdrho_report* report, double alpha) {
  json j = report_json(report, alpha, nullptr, nullptr);
  j.erase("labels");
  j.erase("schema_version");
  return flat_csv(j);
}

json sim_config_json(const rdrho_sim_config& c) {
  return {{"pi1", c.pi1},          {"rho", c.rho},         {"delta_true", c.delta_true},
          {"delta_null", c.delta_null}, {"m1", c.m1},      {"m2", c.m2},
          {"n1", c.n1},            {"n2", c.n2},           {"replicates", c.replicates},
          {"alpha", c.alpha},      {"seed", c.seed}};
}

json summary_json(const rdrho_sim_config& config, const rdrho_sim_summary& s) {
  json tests = json::object();
  for (rdrho_test t : kTests) {
    const rdrho_test_tally& x = s.tests[t];
    json e = {{"rate", x.rate},
              {"std_error", x.std_error},
              {"rejections", x.rejections},
              {"valid", x.valid},
              {"nonconverged", x.nonconverged}};
    if (s.classified) e["classification"] = rdrho_tie_class_name(s.classification[t]);
    tests[rdrho_test_name(t)] = e;
  }
  return {{"schema_version", kSchemaVersion}, {"config", sim_config_json(config)}, {"tests", tests}};
}

std::string summary_text(const rdrho_sim_config& c, const rdrho_sim_summary& s, const char* title) {
  std::ostringstream out;
  out << title << ": pi1 = " << fixed4(c.pi1) << ", rho = " << fixed4(c.rho) << ", delta = " << fixed4(c.delta_true)
      << " (H0 delta = " << fixed4(c.delta_null) << "), m = " << c.m1 << "/" << c.m2 << ", n = " << c.n1 << "/"
      << c.n2 << "\nalpha = " << fixed4(c.alpha) << ", replicates = " << c.replicates << ", seed = " << c.seed
      << "\n\n";
  out << "test      rate (%)   s.e. (%)   nonconverged" << (s.classified ? "   class" : "") << '\n';
  for (rdrho_test t : kTests) {
    const rdrho_test_tally& x = s.tests[t];
    char line[128];
    std::snprintf(line, sizeof line, "%-8s  %8s   %8s   %12lld", display_name(t), fixed4(100.0 * x.rate).c_str(),
                  fixed4(100.0 * x.std_error).c_str(), static_cast<long long>(x.nonconverged));
    out << line;
    if (s.classified) out << "   " << rdrho_tie_class_name(s.classification[t]);
    out << '\n';
  }
  return out.str();
}

std::string summary_csv(const rdrho_sim_summary& s) {
  std::ostringstream out;
  out << "test,rate,std_error,rejections,valid,nonconverged" << (s.classified ? ",classification" : "") << '\n';
  for (rdrho_test t : kTests) {
    const rdrho_test_tally& x = s.tests[t];
    out << rdrho_test_name(t) << ',' << full(x.rate) << ',' << full(x.std_error) << ',' << x.rejections << ','
        << x.valid << ',' << x.nonconverged;
    if (s.classified) out << ',' << rdrho_tie_class_name(s.classification[t]);
    out << '\n';
  }
  return out.str();
}

json samplesize_json(const rdrho_samplesize_query& q, const rdrho_samplesize_result& r) {
  return {{"schema_version", kSchemaVersion},
          {"query",
           {{"pi1", q.pi1},
            {"rho", q.rho},
            {"delta1", q.delta1},
            {"power", q.target_power},
            {"alpha", q.alpha},
            {"test", rdrho_test_name(static_cast<rdrho_test>(q.test))},
            {"replicates", q.replicates},
            {"seed", q.seed},
            {"max_size", q.max_size}}},
          {"size", r.size},
          {"power", r.power},
          {"search_replicates", r.search_replicates},
          {"confirm_replicates", r.confirm_replicates}};
}

std::string samplesize_text(const rdrho_samplesize_query& q, const rdrho_samplesize_result& r) {
  std::ostringstream out;
  out << "test = " << rdrho_test_name(static_cast<rdrho_test>(q.test)) << ", pi1 = " << fixed4(q.pi1)
      << ", rho = " << fixed4(q.rho) << ", delta1 = " << fixed4(q.delta1) << ", target power = "
      << fixed4(q.target_power) << ", alpha = " << fixed4(q.alpha) << '\n';
  out << "minimal m = n: " << r.size << '\n';
  out << "power at m = n = " << r.size << ": " << fixed4(r.power) << " (" << r.confirm_replicates
      << " replicates)\n";
  return out.str();
}

std::string samplesize_csv(const rdrho_samplesize_query& q, const rdrho_samplesize_result& r) {
  json j = samplesize_json(q, r);
  j.erase("schema_version");
  return flat_csv(j);
}

}  // namespace rdrho_cli
