#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "taintchain/chain.hpp"
#include "taintchain/labels.hpp"
#include "taintchain/taint_source.hpp"

namespace taintchain {

// Taint sources resolved against a chain: which outputs have their
// provenance replaced by a theft event, and with which label.
class SourceIndex {
 public:
  SourceIndex() = default;
  // Interns labels into `labels`. Throws SourceError for an unknown txid, a
  // vout past the end, or two labels landing on one output.
  SourceIndex(const Chain& chain, std::span<const TaintSource> sources, LabelTable& labels);

  std::optional<LabelId> override_for(std::size_t ordinal, std::uint32_t vout) const;
  bool has_overrides(std::size_t ordinal) const { return overrides_.count(ordinal) != 0; }
  // Per-output overrides of a transaction; empty when it has none.
  std::span<const std::optional<LabelId>> overrides(std::size_t ordinal) const;

 private:
  std::unordered_map<std::size_t, std::vector<std::optional<LabelId>>> overrides_;
};

}  // namespace taintchain
