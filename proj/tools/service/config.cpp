#include "config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace taintchain::service {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_dir) / path).string();
}

template <typename T>
void read(const json& obj, const char* key, T& target) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    target = it->get<T>();
  } catch (const json::exception&) {
    throw Error(std::string("config: bad value for '") + key + "'");
  }
}

}  // namespace

std::vector<Policy> parse_policy_selection(const std::string& text) {
  if (text == "all") return {Policy::Fifo, Policy::Poison, Policy::Haircut};
  if (auto p = parse_policy(text)) return {*p};
  throw Error("unknown policy '" + text + "'");
}

ServiceConfig parse_config(const std::string& text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("config: ") + e.what());
  }
  if (!doc.is_object()) throw Error("config: expected a JSON object");

  ServiceConfig config;
  read(doc, "chain", config.chain_path);
  read(doc, "taints", config.taints_path);
  config.chain_path = resolve(config.chain_path, base_dir);
  config.taints_path = resolve(config.taints_path, base_dir);
  if (doc.contains("subsidy")) {
    Amount subsidy = 0;
    read(doc, "subsidy", subsidy);
    config.subsidy = subsidy;
  }
  if (doc.contains("policy")) {
    std::string policy;
    read(doc, "policy", policy);
    config.policies = parse_policy_selection(policy);
  }
  read(doc, "host", config.host);
  read(doc, "port", config.port);
  read(doc, "fan_threshold", config.fan_threshold);
  if (auto it = doc.find("thresholds"); it != doc.end()) {
    if (!it->is_object()) throw Error("config: 'thresholds' must be an object");
    DetectorThresholds& t = config.thresholds;
    read(*it, "min_fan", t.splitting.min_fan);
    read(*it, "min_tainted_sats", t.splitting.min_tainted_sats);
    read(*it, "min_converging", t.collection.min_converging);
    read(*it, "window_blocks", t.collection.window_blocks);
    read(*it, "min_length", t.peeling.min_length);
    if (it->contains("peel_fraction")) {
      std::string fraction;
      read(*it, "peel_fraction", fraction);
      t.peeling.peel_fraction = parse_fraction(fraction);
    }
  }
  read(doc, "colors", config.colors);
  read(doc, "cors_origins", config.cors_origins);
  return config;
}

ServiceConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), fs::path(path).parent_path().string());
}

std::optional<std::string> config_path(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TAINTCHAIN_CONFIG"); env && *env) return std::string(env);
  return std::nullopt;
}

void check_config(const ServiceConfig& config) {
  if (config.chain_path.empty()) throw Error("no chain file configured");
  if (!fs::is_regular_file(config.chain_path)) throw Error("chain file '" + config.chain_path + "' does not exist");
  if (!config.taints_path.empty() && !fs::is_regular_file(config.taints_path)) {
    throw Error("taint-source file '" + config.taints_path + "' does not exist");
  }
  if (config.port < 1 || config.port > 65535) {
    throw Error("port " + std::to_string(config.port) + " is outside [1, 65535]");
  }
}

}  // namespace taintchain::service
