#pragma once

#include <map>
#include <string>
#include <string_view>

#include "snapshot.hpp"

namespace taintchain::service {

inline constexpr std::string_view kJson = "application/json";
inline constexpr std::string_view kSvg = "image/svg+xml";

struct ApiResponse {
  int status = 200;
  std::string content_type{kJson};
  std::string body;
};

using QueryParams = std::map<std::string, std::string>;

// Routes one GET request under /v1/. A null snapshot means propagation is
// still running and yields 503. Never throws.
ApiResponse handle_request(const Snapshot* snapshot, std::string_view path, const QueryParams& query);

// Localhost origins when `allowlist` is empty, otherwise exact matches.
bool cors_allows(std::string_view origin, const std::vector<std::string>& allowlist);

}  // namespace taintchain::service
