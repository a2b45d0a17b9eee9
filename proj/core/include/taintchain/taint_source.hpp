#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "taintchain/chain.hpp"

namespace taintchain {

inline constexpr std::size_t kMaxLabelLength = 32;

// A reported theft or crime event. An empty `vout` covers every output.
struct TaintSource {
  Txid txid;
  std::optional<std::uint32_t> vout;
  std::string label;
  std::optional<std::string> color;

  bool operator==(const TaintSource&) const = default;
};

// Throws SourceError when the label is empty, too long, or reserved.
void check_label(std::string_view label);

// Reads the taint-source JSONL format. Unknown txids are accepted here and
// only fail at propagation. Throws ParseError on malformed lines and on
// entries that repeat or overlap an earlier (txid, vout).
std::vector<TaintSource> load_taint_sources(std::istream& in);
std::vector<TaintSource> load_taint_sources_file(const std::string& path);

void write_taint_sources(std::ostream& out, std::span<const TaintSource> sources);

}  // namespace taintchain
