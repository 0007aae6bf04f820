#include "service.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>

#include "httplib.h"
#include "rdrho/rdrho.h"
#include "render.hpp"

namespace rdrho_cli {

namespace {

constexpr int64_t kMaxReplicates = 1'000'000;
constexpr int64_t kMaxSearchReplicates = 100'000;
constexpr int64_t kMaxGroupSize = 100'000'000;

std::atomic<unsigned> g_workers{0};

// A request field that is missing, of the wrong type, or unknown.
struct BadRequest : std::runtime_error {
  BadRequest(std::string field, const std::string& message)
      : std::runtime_error(message), field(std::move(field)) {}
  std::string field;
};

// A well-formed request whose values the service refuses.
struct Unprocessable : std::runtime_error {
  Unprocessable(std::string code, std::string field, const std::string& message)
      : std::runtime_error(message), code(std::move(code)), field(std::move(field)) {}
  std::string code;
  std::string field;
};

json error_body(const std::string& code, const std::string& message, const std::string& field = {}) {
  json e = {{"code", code}, {"message", message}};
  if (!field.empty()) e["field"] = field;
  return {{"schema_version", kSchemaVersion}, {"error", e}};
}

// Typed access to the members of a request object, rejecting unknown keys.
class Fields {
 public:
  Fields(const std::string& body, std::set<std::string> allowed) {
    try {
      doc_ = json::parse(body);
    } catch (const json::parse_error& e) {
      throw BadRequest("", std::string("invalid JSON: ") + e.what());
    }
    if (!doc_.is_object()) throw BadRequest("", "request body must be a JSON object");
    for (auto it = doc_.begin(); it != doc_.end(); ++it) {
      if (!allowed.count(it.key())) throw BadRequest(it.key(), "unknown field");
    }
  }

  const json* find(const std::string& name) const {
    auto it = doc_.find(name);
    return it == doc_.end() || it->is_null() ? nullptr : &*it;
  }

  double number(const std::string& name, std::optional<double> fallback = std::nullopt) const {
    const json* v = find(name);
    if (!v) {
      if (fallback) return *fallback;
      throw BadRequest(name, "required number is missing");
    }
    if (!v->is_number()) throw BadRequest(name, "expected a number");
    const double x = v->get<double>();
    if (!std::isfinite(x)) throw BadRequest(name, "expected a finite number");
    return x;
  }

  int64_t integer(const std::string& name, std::optional<int64_t> fallback = std::nullopt) const {
    const json* v = find(name);
    if (!v) {
      if (fallback) return *fallback;
      throw BadRequest(name, "required integer is missing");
    }
    if (v->is_number_integer()) {
      if (v->is_number_unsigned() && v->get<uint64_t>() > static_cast<uint64_t>(INT64_MAX)) {
        throw BadRequest(name, "integer out of range");
      }
      return v->get<int64_t>();
    }
    throw BadRequest(name, "expected an integer");
  }

  uint64_t seed(const std::string& name, uint64_t fallback) const {
    const json* v = find(name);
    if (!v) return fallback;
    if (v->is_number_unsigned()) return v->get<uint64_t>();
    throw BadRequest(name, "expected a non-negative integer");
  }

  std::string string(const std::string& name, const std::string& fallback) const {
    const json* v = find(name);
    if (!v) return fallback;
    if (!v->is_string()) throw BadRequest(name, "expected a string");
    return v->get<std::string>();
  }

  const json& doc() const { return doc_; }

 private:
  json doc_;
};

void require_range(const std::string& field, int64_t value, int64_t lo, int64_t hi) {
  if (value < lo || value > hi) {
    throw Unprocessable("limit_exceeded", field,
                        field + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

// Runs a handler body, mapping failures onto HTTP statuses.
template <class F>
HttpResult guarded(F&& body) {
  try {
    return {200, body()};
  } catch (const BadRequest& e) {
    return {400, error_body("invalid_request", e.what(), e.field)};
  } catch (const Unprocessable& e) {
    return {422, error_body(e.code, e.what(), e.field)};
  } catch (const ApiError& e) {
    const int status = e.status() == RDRHO_ERR_PARSE || e.status() == RDRHO_ERR_INVALID_ARGUMENT ? 400 : 422;
    return {status, error_body(error_code(e.status()), e.what())};
  } catch (const std::exception& e) {
    return {500, error_body("internal_error", e.what())};
  }
}

struct TableHandle {
  rdrho_table* p = nullptr;
  ~TableHandle() { rdrho_table_destroy(p); }
};

struct ReportHandle {
  rdrho_report* p = nullptr;
  ~ReportHandle() { rdrho_report_destroy(p); }
};

}  // namespace

HttpResult handle_health() {
  return {200, {{"status", "ok"}, {"version", rdrho_version()}, {"schema_version", kSchemaVersion}}};
}

HttpResult handle_test(const std::string& body) {
  return guarded([&]() -> json {
    const Fields f(body, {"table", "delta0", "alpha"});
    const json* table = f.find("table");
    if (!table) throw BadRequest("table", "required object is missing");
    if (!table->is_object()) throw BadRequest("table", "expected an object");
    const double delta0 = f.number("delta0", 0.0);
    const double alpha = f.number("alpha", 0.05);

    TableHandle t;
    const std::string text = table->dump();
    if (const rdrho_status s = rdrho_table_parse(text.data(), text.size(), &t.p); s != RDRHO_OK) {
      throw BadRequest("table", rdrho_last_error());
    }
    ReportHandle r;
    check(rdrho_run_tests(t.p, delta0, nullptr, &r.p));
    json out = report_json(r.p, alpha, rdrho_table_label(t.p, 0), rdrho_table_label(t.p, 1));
    rdrho_counts counts{};
    check(rdrho_table_counts(t.p, &counts));
    out["table"] = counts_json(counts, rdrho_table_label(t.p, 0), rdrho_table_label(t.p, 1));
    return out;
  });
}

HttpResult handle_power(const std::string& body) {
  return guarded([&]() -> json {
    const Fields f(body, {"pi1", "rho", "delta1", "m", "n", "alpha", "replicates", "seed"});
    rdrho_sim_config c;
    rdrho_sim_config_default(&c);
    c.pi1 = f.number("pi1");
    c.rho = f.number("rho");
    c.delta_true = f.number("delta1");
    c.delta_null = 0.0;
    c.m1 = c.m2 = f.integer("m");
    c.n1 = c.n2 = f.integer("n");
    c.alpha = f.number("alpha", 0.05);
    c.replicates = f.integer("replicates", 10'000);
    c.seed = f.seed("seed", 1);
    require_range("m", c.m1, 0, kMaxGroupSize);
    require_range("n", c.n1, 0, kMaxGroupSize);
    require_range("replicates", c.replicates, 1, kMaxReplicates);
    rdrho_sim_summary s{};
    check(rdrho_estimate_power(&c, g_workers, &s));
    return summary_json(c, s);
  });
}

HttpResult handle_samplesize(const std::string& body) {
  return guarded([&]() -> json {
    const Fields f(body, {"pi1", "rho", "delta1", "power", "alpha", "test", "replicates", "seed", "max_size"});
    rdrho_samplesize_query q;
    rdrho_samplesize_query_default(&q);
    q.pi1 = f.number("pi1");
    q.rho = f.number("rho");
    q.delta1 = f.number("delta1");
    q.target_power = f.number("power", 0.8);
    q.alpha = f.number("alpha", 0.05);
    rdrho_test test{};
    const std::string name = f.string("test", "score");
    if (rdrho_parse_test(name.c_str(), &test) != RDRHO_OK) {
      throw BadRequest("test", "expected one of lr, wald, score");
    }
    q.test = test;
    q.replicates = f.integer("replicates", 2'000);
    q.seed = f.seed("seed", 1);
    q.max_size = f.integer("max_size", 1'000'000);
    require_range("replicates", q.replicates, 1, kMaxSearchReplicates);
    require_range("max_size", q.max_size, 1, 1'000'000);
    rdrho_samplesize_result r{};
    check(rdrho_min_sample_size(&q, g_workers, &r));
    return samplesize_json(q, r);
  });
}

struct Server::Impl {
  ServeOptions options;
  httplib::Server http;
};

Server::Server(const ServeOptions& options) : impl_(std::make_unique<Impl>()) {
  impl_->options = options;
  g_workers = options.workers;
  auto reply = [](httplib::Response& res, const HttpResult& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  auto& http = impl_->http;
  http.Get("/health", [reply](const httplib::Request&, httplib::Response& res) { reply(res, handle_health()); });
  http.Post("/api/test",
            [reply](const httplib::Request& req, httplib::Response& res) { reply(res, handle_test(req.body)); });
  http.Post("/api/power",
            [reply](const httplib::Request& req, httplib::Response& res) { reply(res, handle_power(req.body)); });
  http.Post("/api/samplesize", [reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_samplesize(req.body));
  });
}

Server::~Server() = default;

int Server::bind() {
  const ServeOptions& o = impl_->options;
  if (!o.static_dir.empty() && !impl_->http.set_mount_point("/", o.static_dir)) {
    std::cerr << "static directory not found: " << o.static_dir << '\n';
    return -1;
  }
  if (o.port == 0) return impl_->http.bind_to_any_port(o.host);
  return impl_->http.bind_to_port(o.host, o.port) ? o.port : -1;
}

bool Server::listen() { return impl_->http.listen_after_bind(); }

void Server::stop() { impl_->http.stop(); }

}  // namespace rdrho_cli
