#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "taintchain/assignment.hpp"
#include "taintchain/patterns.hpp"
#include "taintchain/svg.hpp"

namespace taintchain::service {

struct ServiceConfig {
  std::string chain_path;
  std::string taints_path;
  std::optional<Amount> subsidy;
  // Policies propagated for the diffusion report.
  std::vector<Policy> policies{Policy::Fifo, Policy::Poison, Policy::Haircut};
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t fan_threshold = kDefaultFanThreshold;
  DetectorThresholds thresholds;
  // Added to, and overriding, colors from the taint-source file.
  ColorMap colors;
  // Allowed CORS origins. Empty allows any localhost origin.
  std::vector<std::string> cors_origins;
};

// Reads a JSON config document. Every field is optional:
//   {"chain": "c.jsonl", "taints": "t.jsonl", "subsidy": 5000000000,
//    "policy": "all" | "fifo" | "poison" | "haircut",
//    "host": "127.0.0.1", "port": 8080, "fan_threshold": 3,
//    "thresholds": {"min_fan": 10, "min_tainted_sats": 1, "min_converging": 5,
//                   "window_blocks": 144, "min_length": 4, "peel_fraction": "3/4"},
//    "colors": {"RED": "#d62728"}, "cors_origins": ["https://example.org"]}
// Relative file paths resolve against the config file's directory.
ServiceConfig load_config(const std::string& path);
ServiceConfig parse_config(const std::string& text, const std::string& base_dir = "");

// The --config path, else $TAINTCHAIN_CONFIG, else nothing.
std::optional<std::string> config_path(const std::string& flag);

// Throws Error when a referenced file is missing or the port is outside
// [1, 65535].
void check_config(const ServiceConfig& config);

std::vector<Policy> parse_policy_selection(const std::string& text);

}  // namespace taintchain::service
