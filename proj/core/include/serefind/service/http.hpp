#pragma once

#include <memory>
#include <string>
#include <vector>

#include "serefind/error.hpp"
#include "serefind/service/app.hpp"

namespace serefind::service {

/// HTTP status used for each error code.
int http_status(ErrorCode code);

struct Route {
  std::string method;
  std::string path;
  /// False when anonymous callers are allowed.
  bool requires_session = true;
};

/// Every route the server registers.
const std::vector<Route>& route_table();

/// JSON-over-HTTP front end for an App. Also runs the outbox flusher.
class HttpServer {
 public:
  explicit HttpServer(App& app);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the configured address; port 0 picks a free port. Returns the
  /// bound port. Throws kPortUnavailable.
  int bind();
  /// Serves until stop(). Requires bind().
  void run();
  /// bind() + run() on a background thread; returns the bound port.
  int start();
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace serefind::service
