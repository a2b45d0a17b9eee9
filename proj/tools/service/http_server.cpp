#include "http_server.hpp"

#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "httplib.h"
#include "taintchain/serialize.hpp"

namespace taintchain::service {

HttpServer::HttpServer(std::vector<std::string> cors_origins)
    : server_(std::make_unique<httplib::Server>()), cors_origins_(std::move(cors_origins)) {
  auto add_cors = [this](const httplib::Request& req, httplib::Response& res) {
    const std::string origin = req.get_header_value("Origin");
    if (!origin.empty() && cors_allows(origin, cors_origins_)) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
  };
  server_->Get(R"(/v1/.*)", [this, add_cors](const httplib::Request& req, httplib::Response& res) {
    QueryParams query;
    for (const auto& [key, value] : req.params) query.emplace(key, value);
    const auto snap = snapshot();
    ApiResponse r = handle_request(snap.get(), req.path, query);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
    add_cors(req, res);
  });
  server_->Options(R"(/v1/.*)", [add_cors](const httplib::Request& req, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    add_cors(req, res);
  });
  server_->set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      res.set_content(serialize_error(res.status == 404 ? "no such endpoint" : "request failed"),
                      std::string(kJson));
    }
  });
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::set_snapshot(std::shared_ptr<const Snapshot> snapshot) {
  std::lock_guard lock(mutex_);
  snapshot_ = std::move(snapshot);
}

std::shared_ptr<const Snapshot> HttpServer::snapshot() const {
  std::lock_guard lock(mutex_);
  return snapshot_;
}

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(fmt::format("cannot bind {}:{}", host, port));
  return bound;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_->is_running()) server_->stop();
}

void HttpServer::wait_until_ready() const { server_->wait_until_ready(); }

void serve(const ServiceConfig& config, std::ostream& log) {
  check_config(config);
  HttpServer server(config.cors_origins);
  const int port = server.bind(config.host, config.port);
  std::thread listener([&] { server.listen(); });
  log << fmt::format("listening on http://{}:{}/v1/ (propagating)", config.host, port) << std::endl;
  try {
    server.set_snapshot(load_snapshot(config));
  } catch (...) {
    server.stop();
    listener.join();
    throw;
  }
  log << "ready" << std::endl;
  listener.join();
}

}  // namespace taintchain::service
