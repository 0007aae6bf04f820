#pragma once

#include <memory>
#include <string>

#include "json.hpp"

namespace rdrho_cli {

struct HttpResult {
  int status = 200;
  nlohmann::json body;
};

// Request handlers behind the HTTP routes. Each takes the raw request body
// and never throws: malformed requests give 400, computation errors 422.
HttpResult handle_health();
HttpResult handle_test(const std::string& body);
HttpResult handle_power(const std::string& body);
HttpResult handle_samplesize(const std::string& body);

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;  // served at / when non-empty
  unsigned workers = 0;    // simulation threads per request
};

class Server {
 public:
  explicit Server(const ServeOptions& options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the socket; port 0 picks a free port. Returns the bound port or -1.
  int bind();
  // Serves requests until stop(); returns false on failure.
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace rdrho_cli
