#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "api.hpp"
#include "snapshot.hpp"

namespace httplib {
class Server;
}

namespace taintchain::service {

// Read-only HTTP front end for handle_request. Answers 503 until a snapshot
// is installed.
class HttpServer {
 public:
  explicit HttpServer(std::vector<std::string> cors_origins = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  void set_snapshot(std::shared_ptr<const Snapshot> snapshot);

  // Port 0 picks a free port. Returns the bound port; throws Error on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  std::shared_ptr<const Snapshot> snapshot() const;

  std::unique_ptr<httplib::Server> server_;
  std::vector<std::string> cors_origins_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
};

// Binds, prints the address to `log`, propagates, then serves until killed.
void serve(const ServiceConfig& config, std::ostream& log);

}  // namespace taintchain::service
