#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rdrho/rdrho.h"
#include "render.hpp"
#include "service.hpp"

namespace {

using namespace rdrho_cli;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitCompute = 3;

int exit_code(rdrho_status status) {
  switch (status) {
    case RDRHO_OK: return kExitOk;
    case RDRHO_ERR_NONCONVERGENCE:
    case RDRHO_ERR_SINGULAR:
    case RDRHO_ERR_UNATTAINABLE:
    case RDRHO_ERR_INTERNAL: return kExitCompute;
    default: return kExitInput;
  }
}

int fail(rdrho_status status) {
  std::cerr << "error: " << rdrho_last_error() << '\n';
  return exit_code(status);
}

struct TestArgs {
  std::string input;
  double delta0 = 0.0;
  double alpha = 0.05;
  double tolerance = 1e-6;
  int max_iterations = 500;
  std::string format = "text";
};

struct SimArgs {
  double pi1 = 0.0;
  double rho = 0.0;
  double delta = 0.0;
  int64_t m = 0;
  int64_t n = 0;
  double alpha = 0.05;
  int64_t replicates = 10'000;
  uint64_t seed = 1;
  unsigned workers = 0;
  std::string format = "text";
};

struct SampleSizeArgs {
  double pi1 = 0.0;
  double rho = 0.0;
  double delta1 = 0.0;
  double power = 0.8;
  double alpha = 0.05;
  std::string test = "score";
  int64_t replicates = 10'000;
  uint64_t seed = 1;
  int64_t max_size = 1'000'000;
  unsigned workers = 0;
  std::string format = "text";
};

struct SweepArgs {
  int64_t count = 2'000;
  int64_t replicates = 10'000;
  double alpha = 0.05;
  uint64_t seed = 1;
  unsigned workers = 0;
  std::string out = "-";
  bool full_scale = false;
};

int run_test(const TestArgs& a) {
  rdrho_table* table = nullptr;
  rdrho_status s = a.input == "-" ? RDRHO_OK : rdrho_table_load(a.input.c_str(), &table);
  if (a.input == "-") {
    const std::string text{std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    s = rdrho_table_parse(text.data(), text.size(), &table);
  }
  if (s != RDRHO_OK) return fail(s);
  rdrho_fit_options opts;
  rdrho_fit_options_default(&opts);
  opts.tolerance = a.tolerance;
  opts.max_iterations = a.max_iterations;
  rdrho_report* report = nullptr;
  s = rdrho_run_tests(table, a.delta0, &opts, &report);
  if (s != RDRHO_OK) {
    rdrho_table_destroy(table);
    return fail(s);
  }
  const char* l1 = rdrho_table_label(table, 0);
  const char* l2 = rdrho_table_label(table, 1);
  if (a.format == "json") {
    std::cout << report_json(report, a.alpha, l1, l2).dump(2) << '\n';
  } else if (a.format == "csv") {
    std::cout << report_csv(report, a.alpha);
  } else {
    std::cout << report_text(report, a.alpha, l1, l2);
  }
  const bool complete = rdrho_report_complete(report) != 0;
  rdrho_report_destroy(report);
  rdrho_table_destroy(table);
  if (!complete) {
    std::cerr << "error: not every statistic could be computed (see warnings)\n";
    return kExitCompute;
  }
  return kExitOk;
}

rdrho_sim_config sim_config(const SimArgs& a, double delta_null) {
  rdrho_sim_config c;
  rdrho_sim_config_default(&c);
  c.pi1 = a.pi1;
  c.rho = a.rho;
  c.delta_true = a.delta;
  c.delta_null = delta_null;
  c.m1 = c.m2 = a.m;
  c.n1 = c.n2 = a.n;
  c.alpha = a.alpha;
  c.replicates = a.replicates;
  c.seed = a.seed;
  return c;
}

int print_summary(const SimArgs& a, const rdrho_sim_config& c, const rdrho_sim_summary& s, const char* title) {
  if (a.format == "json") {
    std::cout << summary_json(c, s).dump(2) << '\n';
  } else if (a.format == "csv") {
    std::cout << summary_csv(s);
  } else {
    std::cout << summary_text(c, s, title);
  }
  return kExitOk;
}

int run_power(const SimArgs& a) {
  const rdrho_sim_config c = sim_config(a, 0.0);
  rdrho_sim_summary s{};
  if (const rdrho_status st = rdrho_estimate_power(&c, a.workers, &s); st != RDRHO_OK) return fail(st);
  return print_summary(a, c, s, "power");
}

int run_tie(const SimArgs& a) {
  const rdrho_sim_config c = sim_config(a, a.delta);
  rdrho_sim_summary s{};
  if (const rdrho_status st = rdrho_estimate_tie(&c, a.workers, &s); st != RDRHO_OK) return fail(st);
  return print_summary(a, c, s, "type I error");
}

int run_samplesize(const SampleSizeArgs& a) {
  rdrho_samplesize_query q;
  rdrho_samplesize_query_default(&q);
  q.pi1 = a.pi1;
  q.rho = a.rho;
  q.delta1 = a.delta1;
  q.target_power = a.power;
  q.alpha = a.alpha;
  rdrho_test test{};
  if (const rdrho_status st = rdrho_parse_test(a.test.c_str(), &test); st != RDRHO_OK) return fail(st);
  q.test = test;
  q.replicates = a.replicates;
  q.seed = a.seed;
  q.max_size = a.max_size;
  rdrho_samplesize_result r{};
  if (const rdrho_status st = rdrho_min_sample_size(&q, a.workers, &r); st != RDRHO_OK) return fail(st);
  if (a.format == "json") {
    std::cout << samplesize_json(q, r).dump(2) << '\n';
  } else if (a.format == "csv") {
    std::cout << samplesize_csv(q, r);
  } else {
    std::cout << samplesize_text(q, r);
  }
  return kExitOk;
}

int run_sweep(SweepArgs a) {
  if (a.full_scale) {
    a.count = 10'000;
    a.replicates = 100'000;
  }
  rdrho_sweep* sweep = nullptr;
  if (const rdrho_status st = rdrho_sweep_run(a.count, nullptr, a.replicates, a.alpha, a.seed, a.workers, &sweep);
      st != RDRHO_OK) {
    return fail(st);
  }
  const char* csv = rdrho_sweep_csv(sweep);
  if (a.out == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(a.out, std::ios::binary);
    out << csv;
    if (!out) {
      rdrho_sweep_destroy(sweep);
      std::cerr << "error: cannot write " << a.out << '\n';
      return kExitInput;
    }
  }
  std::cerr << "TIE distribution (%):     q1   median       q3      IQR\n";
  for (rdrho_test t : {RDRHO_TEST_LR, RDRHO_TEST_WALD, RDRHO_TEST_SCORE}) {
    double q1 = 0.0;
    double med = 0.0;
    double q3 = 0.0;
    rdrho_sweep_distribution(sweep, t, &q1, &med, &q3);
    char line[128];
    std::snprintf(line, sizeof line, "  %-6s %16s %8s %8s %8s\n", rdrho_test_name(t), fixed4(100 * q1).c_str(),
                  fixed4(100 * med).c_str(), fixed4(100 * q3).c_str(), fixed4(100 * (q3 - q1)).c_str());
    std::cerr << line;
  }
  rdrho_sweep_destroy(sweep);
  return kExitOk;
}

int run_serve(const ServeOptions& o) {
  Server server(o);
  const int port = server.bind();
  if (port < 0) {
    std::cerr << "error: cannot listen on " << o.host << ':' << o.port << '\n';
    return kExitInput;
  }
  std::cerr << "listening on http://" << o.host << ':' << port << '\n';
  return server.listen() ? kExitOk : kExitCompute;
}

void add_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
}

void add_sim_options(CLI::App* cmd, SimArgs& a, const char* delta_name, const char* delta_help) {
  cmd->add_option("--pi1", a.pi1, "Probability in group 1")->required();
  cmd->add_option("--rho", a.rho, "Intra-subject correlation")->required();
  cmd->add_option(delta_name, a.delta, delta_help)->required();
  cmd->add_option("--m", a.m, "Bilateral subjects per group")->required();
  cmd->add_option("--n", a.n, "Unilateral subjects per group")->required();
  cmd->add_option("--alpha", a.alpha, "Significance level")->capture_default_str();
  cmd->add_option("--replicates", a.replicates, "Monte Carlo replicates")->capture_default_str();
  cmd->add_option("--seed", a.seed, "Random seed")->capture_default_str();
  cmd->add_option("--workers", a.workers, "Worker threads (0 = all cores)")->capture_default_str();
  add_format(cmd, a.format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Risk-difference tests for combined unilateral and bilateral binary data"};
  app.set_version_flag("--version", std::string(rdrho_version()));
  app.require_subcommand(1);

  TestArgs test_args;
  auto* test = app.add_subcommand("test", "LR, Wald and score tests of H0: delta = delta0 for a table");
  test->add_option("input", test_args.input, "Table file (text or JSON; '-' reads stdin)")->required();
  test->add_option("--delta0", test_args.delta0, "Hypothesised risk difference")->capture_default_str();
  test->add_option("--alpha", test_args.alpha, "Significance level")->capture_default_str();
  test->add_option("--tolerance", test_args.tolerance, "Convergence tolerance")->capture_default_str();
  test->add_option("--max-iterations", test_args.max_iterations, "Iteration cap per fit")->capture_default_str();
  add_format(test, test_args.format);

  SimArgs power_args;
  auto* power = app.add_subcommand("power", "Empirical power of H0: delta = 0 against delta = delta1");
  add_sim_options(power, power_args, "--delta1", "Risk difference under the alternative");

  SimArgs tie_args;
  auto* tie = app.add_subcommand("tie", "Empirical type I error of H0: delta = delta0");
  add_sim_options(tie, tie_args, "--delta0", "Risk difference under the null");

  SampleSizeArgs ss_args;
  auto* ss = app.add_subcommand("samplesize", "Smallest m = n reaching a target power");
  ss->add_option("--pi1", ss_args.pi1, "Probability in group 1")->required();
  ss->add_option("--rho", ss_args.rho, "Intra-subject correlation")->required();
  ss->add_option("--delta1", ss_args.delta1, "Risk difference under the alternative")->required();
  ss->add_option("--power", ss_args.power, "Target power")->capture_default_str();
  ss->add_option("--alpha", ss_args.alpha, "Significance level")->capture_default_str();
  ss->add_option("--test", ss_args.test, "lr, wald or score")->capture_default_str();
  ss->add_option("--replicates", ss_args.replicates, "Replicates per candidate size")->capture_default_str();
  ss->add_option("--seed", ss_args.seed, "Random seed")->capture_default_str();
  ss->add_option("--max-size", ss_args.max_size, "Largest m = n searched")->capture_default_str();
  ss->add_option("--workers", ss_args.workers, "Worker threads (0 = all cores)")->capture_default_str();
  add_format(ss, ss_args.format);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("tie-sweep", "Type I errors over random parameter configurations (CSV)");
  sweep->add_option("--count", sweep_args.count, "Number of configurations")->capture_default_str();
  sweep->add_option("--replicates", sweep_args.replicates, "Replicates per configuration")->capture_default_str();
  sweep->add_option("--alpha", sweep_args.alpha, "Significance level")->capture_default_str();
  sweep->add_option("--seed", sweep_args.seed, "Random seed")->capture_default_str();
  sweep->add_option("--workers", sweep_args.workers, "Worker threads (0 = all cores)")->capture_default_str();
  sweep->add_option("--out", sweep_args.out, "CSV path ('-' for stdout)")->capture_default_str();
  sweep->add_flag("--full-scale", sweep_args.full_scale, "10000 configurations x 100000 replicates");

  ServeOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "JSON service for the calculator");
  serve->add_option("--port", serve_opts.port, "TCP port (0 picks a free one)")->capture_default_str();
  serve->add_option("--host", serve_opts.host, "Bind address")->capture_default_str();
  serve->add_option("--static-dir", serve_opts.static_dir, "Directory served at /");
  serve->add_option("--workers", serve_opts.workers, "Simulation threads per request")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*test) return run_test(test_args);
    if (*power) return run_power(power_args);
    if (*tie) return run_tie(tie_args);
    if (*ss) return run_samplesize(ss_args);
    if (*sweep) return run_sweep(sweep_args);
    if (*serve) return run_serve(serve_opts);
  } catch (const ApiError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.status());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCompute;
  }
  return kExitInput;
}
