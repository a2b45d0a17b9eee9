#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "taintchain/chain.hpp"
#include "taintchain/labels.hpp"
#include "taintchain/segment_list.hpp"
#include "taintchain/source_index.hpp"
#include "taintchain/taint_source.hpp"

namespace taintchain {

// Satoshis minted as block subsidy.
struct CoinbaseOrigin {
  std::uint64_t height = 0;

  bool operator==(const CoinbaseOrigin&) const = default;
};

// Satoshis whose provenance was replaced by a reported theft at `source_txid`.
struct TaintEvent {
  std::string label;
  Txid source_txid;

  bool operator==(const TaintEvent&) const = default;
};

using Terminal = std::variant<CoinbaseOrigin, TaintEvent>;

enum class NodeKind {
  Output,  // satoshis [start, end) of output `outpoint`
  Fee,     // satoshis [start, end) of the fee paid by `outpoint.txid`
};

struct ProvenanceNode {
  NodeKind kind = NodeKind::Output;
  OutPoint outpoint;
  Amount start = 0;
  Amount end = 0;
  std::vector<ProvenanceNode> children;  // in satoshi order
  std::optional<Terminal> terminal;      // set exactly on leaves

  Amount length() const { return end - start; }
};

// Walks the FIFO queue arithmetic backwards from [start, end) of `outpoint`.
// Stops at subsidy ranges and at outputs overridden by a taint source.
// Throws QueryError for an unknown outpoint or an out-of-bounds interval.
ProvenanceNode trace_back(const Chain& chain, const SourceIndex& sources, const LabelTable& labels,
                          const OutPoint& outpoint, Amount start, Amount end);
ProvenanceNode trace_back(const Chain& chain, std::span<const TaintSource> sources,
                          const OutPoint& outpoint, Amount start, Amount end);

// Leaves left to right.
std::vector<const ProvenanceNode*> leaves(const ProvenanceNode& root);

// The leaves read as a SegmentList: subsidy is CLEAN, a taint event is its
// label. For any interval this equals the forward FIFO restriction.
SegmentList leaf_segments(const ProvenanceNode& root, LabelTable& labels);

}  // namespace taintchain
