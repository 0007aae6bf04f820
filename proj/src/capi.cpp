#include "rdrho/rdrho.h"

#include <exception>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "rdrho/errors.hpp"
#include "rdrho/inference.hpp"
#include "rdrho/mle.hpp"
#include "rdrho/model.hpp"
#include "rdrho/montecarlo.hpp"
#include "rdrho/table_io.hpp"

struct rdrho_table {
  rdrho::InputTable input;
  std::string formatted;
};

struct rdrho_report {
  rdrho::TestReport report;
};

struct rdrho_sweep {
  std::vector<rdrho::SweepEntry> entries;
  std::string csv;
};

namespace {

thread_local std::string g_last_error;

rdrho_status fail(rdrho_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
rdrho_status guarded(F&& body) {
  try {
    body();
    return RDRHO_OK;
  } catch (const rdrho::ParseError& e) {
    return fail(RDRHO_ERR_PARSE, e.what());
  } catch (const rdrho::DomainError& e) {
    return fail(RDRHO_ERR_DOMAIN, e.what());
  } catch (const rdrho::NonConvergenceError& e) {
    return fail(RDRHO_ERR_NONCONVERGENCE, e.what());
  } catch (const rdrho::SingularInformationError& e) {
    return fail(RDRHO_ERR_SINGULAR, e.what());
  } catch (const rdrho::UnattainableError& e) {
    return fail(RDRHO_ERR_UNATTAINABLE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(RDRHO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RDRHO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RDRHO_ERR_INTERNAL, "unknown error");
  }
}

rdrho_status null_argument(const char* name) {
  return fail(RDRHO_ERR_INVALID_ARGUMENT, std::string(name) + " must not be null");
}

bool valid_test(int t) { return t >= 0 && t <= 2; }

rdrho::FrequencyTable to_table(const rdrho_counts& c) {
  rdrho::FrequencyTable t;
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t r = 0; r < 3; ++r) t.bilateral[g][r] = c.m[r][g];
    for (std::size_t r = 0; r < 2; ++r) t.unilateral[g][r] = c.n[r][g];
  }
  return t;
}

rdrho_counts to_counts(const rdrho::FrequencyTable& t) {
  rdrho_counts c{};
  for (std::size_t g = 0; g < 2; ++g) {
    for (std::size_t r = 0; r < 3; ++r) c.m[r][g] = t.bilateral[g][r];
    for (std::size_t r = 0; r < 2; ++r) c.n[r][g] = t.unilateral[g][r];
  }
  return c;
}

rdrho::FitOptions to_options(const rdrho_fit_options* o) {
  rdrho::FitOptions f;
  if (o) {
    f.tolerance = o->tolerance;
    f.max_iterations = o->max_iterations;
    f.rho_init = o->rho_init;
    f.pi_init_rule = o->pi_init_custom ? rdrho::PiInitRule::custom : rdrho::PiInitRule::pooled;
    f.pi_init = o->pi_init;
    f.score_tolerance = o->score_tolerance;
  }
  return f;
}

rdrho_fit to_fit(const rdrho::FitResult& r) {
  rdrho_fit f{};
  f.delta = r.params.delta;
  f.pi1 = r.params.pi1;
  f.pi2 = r.params.pi2();
  f.rho = r.params.rho;
  f.loglik = r.loglik;
  f.iterations = r.iterations;
  f.converged = r.converged ? 1 : 0;
  f.boundary = static_cast<int>(r.boundary);
  f.rho_identified = r.rho_identified ? 1 : 0;
  f.final_step_norm = r.final_step_norm;
  return f;
}

rdrho::SimConfig to_config(const rdrho_sim_config& c) {
  rdrho::SimConfig s;
  s.pi1 = c.pi1;
  s.rho = c.rho;
  s.delta_true = c.delta_true;
  s.delta_null = c.delta_null;
  s.m1 = c.m1;
  s.m2 = c.m2;
  s.n1 = c.n1;
  s.n2 = c.n2;
  s.replicates = c.replicates;
  s.alpha = c.alpha;
  s.seed = c.seed;
  return s;
}

rdrho_sim_config from_config(const rdrho::SimConfig& s) {
  return {s.pi1, s.rho, s.delta_true, s.delta_null, s.m1, s.m2, s.n1, s.n2, s.replicates, s.alpha, s.seed};
}

rdrho_sim_summary from_summary(const rdrho::SimSummary& s) {
  rdrho_sim_summary out{};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& t = s.tests[k];
    out.tests[k] = {t.rejections, t.valid, t.nonconverged, t.rate, t.std_error};
    out.classification[k] = static_cast<int>(s.classification[k]);
  }
  out.classified = s.classified ? 1 : 0;
  return out;
}

}  // namespace

extern "C" {

const char* rdrho_version(void) { return "1.0.0"; }

const char* rdrho_status_name(rdrho_status status) {
  switch (status) {
    case RDRHO_OK: return "ok";
    case RDRHO_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case RDRHO_ERR_PARSE: return "parse_error";
    case RDRHO_ERR_DOMAIN: return "domain_error";
    case RDRHO_ERR_NONCONVERGENCE: return "nonconvergence";
    case RDRHO_ERR_SINGULAR: return "singular_information";
    case RDRHO_ERR_UNATTAINABLE: return "unattainable";
    case RDRHO_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* rdrho_last_error(void) { return g_last_error.c_str(); }

rdrho_status rdrho_table_create(const rdrho_counts* counts, rdrho_table** out) {
  if (!counts) return null_argument("counts");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto t = std::make_unique<rdrho_table>();
    t->input.table = to_table(*counts);
    t->input.table.validate();
    *out = t.release();
  });
}

rdrho_status rdrho_table_parse(const char* text, size_t length, rdrho_table** out) {
  if (!text && length > 0) return null_argument("text");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto t = std::make_unique<rdrho_table>();
    t->input = rdrho::parse_table(std::string_view(text ? text : "", length));
    *out = t.release();
  });
}

rdrho_status rdrho_table_load(const char* path, rdrho_table** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto t = std::make_unique<rdrho_table>();
    t->input = rdrho::load_table(path);
    *out = t.release();
  });
}

void rdrho_table_destroy(rdrho_table* table) { delete table; }

rdrho_status rdrho_table_counts(const rdrho_table* table, rdrho_counts* out) {
  if (!table) return null_argument("table");
  if (!out) return null_argument("out");
  *out = to_counts(table->input.table);
  return RDRHO_OK;
}

const char* rdrho_table_label(const rdrho_table* table, int group) {
  if (!table || group < 0 || group > 1) return nullptr;
  return table->input.labels[static_cast<std::size_t>(group)].c_str();
}

rdrho_status rdrho_table_set_labels(rdrho_table* table, const char* first, const char* second) {
  if (!table) return null_argument("table");
  if (!first || !second) return null_argument("label");
  return guarded([&] { table->input.labels = {first, second}; });
}

const char* rdrho_table_format(rdrho_table* table) {
  if (!table) return nullptr;
  table->formatted = rdrho::format_table_text(table->input);
  return table->formatted.c_str();
}

void rdrho_fit_options_default(rdrho_fit_options* out) {
  if (!out) return;
  const rdrho::FitOptions d;
  *out = {d.tolerance, d.max_iterations, d.rho_init, 0, d.pi_init, d.score_tolerance};
}

rdrho_status rdrho_run_tests(const rdrho_table* table, double delta0, const rdrho_fit_options* opts,
                             rdrho_report** out) {
  if (!table) return null_argument("table");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto r = std::make_unique<rdrho_report>();
    r->report = rdrho::run_all_tests(table->input.table, delta0, to_options(opts));
    *out = r.release();
  });
}

void rdrho_report_destroy(rdrho_report* report) { delete report; }

double rdrho_report_delta0(const rdrho_report* report) { return report ? report->report.delta0 : 0.0; }

int rdrho_report_complete(const rdrho_report* report) { return report && report->report.complete() ? 1 : 0; }

rdrho_status rdrho_report_statistic(const rdrho_report* report, rdrho_test test, double* q, double* p,
                                    int* available) {
  if (!report) return null_argument("report");
  if (!valid_test(test)) return fail(RDRHO_ERR_INVALID_ARGUMENT, "unknown test");
  const auto& s = report->report.tests[static_cast<std::size_t>(test)];
  if (q) *q = s.q;
  if (p) *p = s.p;
  if (available) *available = s.available ? 1 : 0;
  return RDRHO_OK;
}

double rdrho_report_score_reduced(const rdrho_report* report) {
  return report ? report->report.q_score_reduced : 0.0;
}

rdrho_status rdrho_report_fit(const rdrho_report* report, int constrained, rdrho_fit* out) {
  if (!report) return null_argument("report");
  if (!out) return null_argument("out");
  *out = to_fit(constrained ? report->report.constrained : report->report.unconstrained);
  return RDRHO_OK;
}

uint32_t rdrho_report_warnings(const rdrho_report* report) { return report ? report->report.warnings : 0u; }

const char* rdrho_warning_name(uint32_t bit) {
  switch (bit) {
    case RDRHO_WARN_BOUNDARY: return "boundary";
    case RDRHO_WARN_WALD_UNAVAILABLE: return "wald_unavailable";
    case RDRHO_WARN_SCORE_UNAVAILABLE: return "score_unavailable";
    case RDRHO_WARN_NONCONVERGENCE: return "nonconvergence";
    case RDRHO_WARN_LR_CLAMPED: return "lr_clamped";
    case RDRHO_WARN_RHO_NOT_IDENTIFIED: return "rho_not_identified";
    case RDRHO_WARN_SCORE_FORM_MISMATCH: return "score_form_mismatch";
    default: return nullptr;
  }
}

const char* rdrho_test_name(rdrho_test test) {
  if (!valid_test(test)) return nullptr;
  return rdrho::test_name(static_cast<rdrho::TestKind>(test));
}

rdrho_status rdrho_parse_test(const char* name, rdrho_test* out) {
  if (!name) return null_argument("name");
  if (!out) return null_argument("out");
  return guarded([&] { *out = static_cast<rdrho_test>(rdrho::parse_test_kind(name)); });
}

rdrho_status rdrho_chisq1_pvalue(double q, double* out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = rdrho::chisq1_pvalue(q); });
}

int rdrho_rejects(double q, double alpha) { return rdrho::rejects(q, alpha) ? 1 : 0; }

int rdrho_is_admissible(double pi, double rho) { return rdrho::is_admissible(pi, rho) ? 1 : 0; }

double rdrho_rho_lower_bound(double pi) { return rdrho::rho_lower_bound(pi); }

void rdrho_sim_config_default(rdrho_sim_config* out) {
  if (out) *out = from_config(rdrho::SimConfig{});
}

rdrho_status rdrho_estimate_tie(const rdrho_sim_config* config, unsigned workers, rdrho_sim_summary* out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] { *out = from_summary(rdrho::estimate_tie(to_config(*config), workers)); });
}

rdrho_status rdrho_estimate_power(const rdrho_sim_config* config, unsigned workers, rdrho_sim_summary* out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] { *out = from_summary(rdrho::estimate_power(to_config(*config), workers)); });
}

const char* rdrho_tie_class_name(int tie_class) {
  if (tie_class < 0 || tie_class > 2) return nullptr;
  return rdrho::tie_class_name(static_cast<rdrho::TieClass>(tie_class));
}

void rdrho_samplesize_query_default(rdrho_samplesize_query* out) {
  if (!out) return;
  const rdrho::SampleSizeQuery q;
  *out = {q.rho, q.pi1, q.delta1, q.target_power, q.alpha, static_cast<int>(q.test), q.replicates, q.seed,
          q.max_size};
}

rdrho_status rdrho_min_sample_size(const rdrho_samplesize_query* query, unsigned workers,
                                   rdrho_samplesize_result* out) {
  if (!query) return null_argument("query");
  if (!out) return null_argument("out");
  if (!valid_test(query->test)) return fail(RDRHO_ERR_INVALID_ARGUMENT, "unknown test");
  return guarded([&] {
    rdrho::SampleSizeQuery q;
    q.rho = query->rho;
    q.pi1 = query->pi1;
    q.delta1 = query->delta1;
    q.target_power = query->target_power;
    q.alpha = query->alpha;
    q.test = static_cast<rdrho::TestKind>(query->test);
    q.replicates = query->replicates;
    q.seed = query->seed;
    q.max_size = query->max_size;
    const auto r = rdrho::min_sample_size(q, workers);
    *out = {r.size, r.power, r.search_replicates, r.confirm_replicates};
  });
}

rdrho_status rdrho_exact_tie_small(const rdrho_sim_config* config, unsigned workers, rdrho_exact_size* out) {
  if (!config) return null_argument("config");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto e = rdrho::exact_tie_small(to_config(*config), workers);
    for (std::size_t k = 0; k < 3; ++k) {
      out->size[k] = e.size[k];
      out->rejection_mass[k] = e.rejection_mass[k];
      out->valid_mass[k] = e.valid_mass[k];
    }
    out->total_probability = e.total_probability;
    out->tables = e.tables;
  });
}

void rdrho_sweep_ranges_default(rdrho_sweep_ranges* out) {
  if (!out) return;
  const rdrho::SweepRanges r;
  *out = {r.delta_lo, r.delta_hi, r.rho_lo, r.rho_hi, r.pi1_lo, r.pi1_hi, r.size_lo, r.size_hi};
}

rdrho_status rdrho_sweep_run(int64_t count, const rdrho_sweep_ranges* ranges, int64_t replicates, double alpha,
                             uint64_t seed, unsigned workers, rdrho_sweep** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    rdrho::SweepRanges r;
    if (ranges) {
      r = {ranges->delta_lo, ranges->delta_hi, ranges->rho_lo, ranges->rho_hi,
           ranges->pi1_lo,   ranges->pi1_hi,   ranges->size_lo, ranges->size_hi};
    }
    auto s = std::make_unique<rdrho_sweep>();
    s->entries = rdrho::random_config_sweep(count, r, replicates, alpha, seed, workers);
    std::ostringstream csv;
    rdrho::write_sweep_csv(csv, s->entries);
    s->csv = csv.str();
    *out = s.release();
  });
}

void rdrho_sweep_destroy(rdrho_sweep* sweep) { delete sweep; }

size_t rdrho_sweep_size(const rdrho_sweep* sweep) { return sweep ? sweep->entries.size() : 0; }

rdrho_status rdrho_sweep_entry(const rdrho_sweep* sweep, size_t index, rdrho_sim_config* config,
                               rdrho_sim_summary* summary) {
  if (!sweep) return null_argument("sweep");
  if (index >= sweep->entries.size()) return fail(RDRHO_ERR_INVALID_ARGUMENT, "sweep index out of range");
  if (config) *config = from_config(sweep->entries[index].config);
  if (summary) *summary = from_summary(sweep->entries[index].summary);
  return RDRHO_OK;
}

const char* rdrho_sweep_csv(const rdrho_sweep* sweep) { return sweep ? sweep->csv.c_str() : nullptr; }

rdrho_status rdrho_sweep_distribution(const rdrho_sweep* sweep, rdrho_test test, double* q1, double* median,
                                      double* q3) {
  if (!sweep) return null_argument("sweep");
  if (!valid_test(test)) return fail(RDRHO_ERR_INVALID_ARGUMENT, "unknown test");
  const auto d = rdrho::tie_distribution(sweep->entries, static_cast<rdrho::TestKind>(test));
  if (q1) *q1 = d.q1;
  if (median) *median = d.median;
  if (q3) *q3 = d.q3;
  return RDRHO_OK;
}

}  // extern "C"
