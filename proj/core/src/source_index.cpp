#include "taintchain/source_index.hpp"

#include "taintchain/error.hpp"

namespace taintchain {

SourceIndex::SourceIndex(const Chain& chain, std::span<const TaintSource> sources,
                         LabelTable& labels) {
  for (const auto& src : sources) {
    check_label(src.label);
    auto loc = chain.find(src.txid);
    if (!loc) throw SourceError("taint source txid not found in chain: " + src.txid.hex());
    const auto n_outputs = chain.transaction(loc->ordinal).outputs.size();
    if (src.vout && *src.vout >= n_outputs) {
      throw SourceError("taint source vout " + std::to_string(*src.vout) + " out of range for " +
                        src.txid.hex());
    }
    const LabelId label = labels.intern(src.label);
    auto& slots = overrides_[loc->ordinal];
    slots.resize(n_outputs);
    const auto apply = [&](std::uint32_t vout) {
      if (slots[vout] && *slots[vout] != label) {
        throw SourceError("conflicting taint sources on " + src.txid.hex() + ":" +
                          std::to_string(vout));
      }
      slots[vout] = label;
    };
    if (src.vout) {
      apply(*src.vout);
    } else {
      for (std::uint32_t v = 0; v < n_outputs; ++v) apply(v);
    }
  }
}

std::optional<LabelId> SourceIndex::override_for(std::size_t ordinal, std::uint32_t vout) const {
  auto it = overrides_.find(ordinal);
  if (it == overrides_.end() || vout >= it->second.size()) return std::nullopt;
  return it->second[vout];
}

std::span<const std::optional<LabelId>> SourceIndex::overrides(std::size_t ordinal) const {
  auto it = overrides_.find(ordinal);
  if (it == overrides_.end()) return {};
  return it->second;
}

}  // namespace taintchain
