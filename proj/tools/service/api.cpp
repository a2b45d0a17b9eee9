#include "api.hpp"

#include <charconv>
#include <optional>
#include <regex>

#include "taintchain/serialize.hpp"
#include "taintchain/svg.hpp"
#include "taintchain/trace.hpp"

namespace taintchain::service {

namespace {

// A query the client got wrong; the message goes back with the status.
struct Reject {
  int status;
  std::string message;
};

ApiResponse error(int status, std::string_view message) { return {status, std::string(kJson), serialize_error(message)}; }

ApiResponse ok(std::string body) { return {200, std::string(kJson), std::move(body)}; }

template <typename Int>
std::optional<Int> param(const QueryParams& query, const std::string& key) {
  auto it = query.find(key);
  if (it == query.end()) return std::nullopt;
  Int value{};
  const char* first = it->second.data();
  const char* last = first + it->second.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) throw Reject{400, "malformed parameter '" + key + "'"};
  return value;
}

template <typename Int>
Int required(const QueryParams& query, const std::string& key) {
  auto value = param<Int>(query, key);
  if (!value) throw Reject{400, "missing parameter '" + key + "'"};
  return *value;
}

Txid parse_txid(std::string_view text) {
  auto txid = Txid::parse(text);
  if (!txid) throw Reject{400, "malformed txid"};
  return *txid;
}

const Transaction& known_tx(const Snapshot& s, const Txid& txid) {
  auto loc = s.chain.find(txid);
  if (!loc) throw Reject{404, "unknown txid"};
  return s.chain.transaction(loc->ordinal);
}

ApiResponse expand_route(const Snapshot& s, const Txid& txid, const QueryParams& query) {
  known_tx(s, txid);
  if (!s.graph.vertex(txid)) throw Reject{404, "txid not in taint graph"};
  Direction direction = Direction::Forward;
  if (auto it = query.find("direction"); it != query.end()) {
    if (it->second == "forward") {
      direction = Direction::Forward;
    } else if (it->second == "backward") {
      direction = Direction::Backward;
    } else {
      throw Reject{400, "direction must be forward or backward"};
    }
  }
  std::optional<LabelId> label;
  if (auto it = query.find("label"); it != query.end() && it->second != "all") {
    label = s.labels.find(it->second);
    if (!label || *label == kClean) throw Reject{404, "unknown label"};
  }
  const Amount min_sats = param<Amount>(query, "min_sats").value_or(0);
  if (min_sats < 0) throw Reject{400, "min_sats must be non-negative"};
  return ok(serialize(expand(s.graph, txid, direction, label, min_sats), s.labels));
}

ApiResponse trace_route(const Snapshot& s, const QueryParams& query) {
  auto it = query.find("txid");
  if (it == query.end()) throw Reject{400, "missing parameter 'txid'"};
  const Txid txid = parse_txid(it->second);
  const Transaction& tx = known_tx(s, txid);
  const auto vout = required<std::uint32_t>(query, "vout");
  if (vout >= tx.outputs.size()) throw Reject{400, "vout out of range"};
  const Amount value = tx.outputs[vout].value;
  const Amount start = param<Amount>(query, "start").value_or(0);
  const Amount end = param<Amount>(query, "end").value_or(value);
  if (start < 0 || end > value || start >= end) throw Reject{400, "interval outside the output"};
  return ok(serialize(trace_back(s.chain, s.index, s.labels, OutPoint{txid, vout}, start, end)));
}

ApiResponse svg_route(const Snapshot& s, const QueryParams& query) {
  if (s.chain.empty()) throw Reject{400, "empty chain"};
  const auto tip = s.chain.blocks().size() - 1;
  const auto from = param<std::uint64_t>(query, "from").value_or(0);
  const auto to = param<std::uint64_t>(query, "to").value_or(tip);
  if (from > to || to > tip) throw Reject{400, "block range outside the chain"};
  return {200, std::string(kSvg), export_svg_columnar(s.chain, s.fifo, from, to, s.colors)};
}

ApiResponse route(const Snapshot& s, std::string_view path, const QueryParams& query) {
  static const std::regex tx_path("^/v1/tx/([^/]+)(/expand)?$");
  if (path == "/v1/chain/summary") return ok(serialize_chain_summary(s.chain, s.graph, s.fan_threshold));
  if (path == "/v1/labels") return ok(serialize_labels(s.labels, s.colors));
  if (path == "/v1/trace") return trace_route(s, query);
  if (path == "/v1/patterns") return ok(serialize(std::span<const PatternMatch>(s.patterns)));
  if (path == "/v1/diffusion") return ok(serialize(s.diffusion));
  if (path == "/v1/svg") return svg_route(s, query);
  std::match_results<std::string_view::const_iterator> m;
  if (std::regex_match(path.begin(), path.end(), m, tx_path)) {
    const Txid txid = parse_txid(path.substr(static_cast<std::size_t>(m.position(1)), static_cast<std::size_t>(m.length(1))));
    if (m[2].matched) return expand_route(s, txid, query);
    known_tx(s, txid);
    return ok(serialize_tx_detail(s.chain, s.fifo, s.graph, txid, s.fan_threshold));
  }
  return error(404, "no such endpoint");
}

}  // namespace

ApiResponse handle_request(const Snapshot* snapshot, std::string_view path, const QueryParams& query) {
  if (!snapshot) return error(503, "propagation in progress");
  try {
    return route(*snapshot, path, query);
  } catch (const Reject& r) {
    return error(r.status, r.message);
  } catch (const QueryError& e) {
    return error(400, e.what());
  } catch (const std::exception& e) {
    return error(500, e.what());
  }
}

bool cors_allows(std::string_view origin, const std::vector<std::string>& allowlist) {
  if (!allowlist.empty()) {
    for (const auto& allowed : allowlist) {
      if (origin == allowed) return true;
    }
    return false;
  }
  static const std::regex localhost(R"(^https?://(localhost|127\.0\.0\.1|\[::1\])(:\d{1,5})?$)");
  return std::regex_match(origin.begin(), origin.end(), localhost);
}

}  // namespace taintchain::service
