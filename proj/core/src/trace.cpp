#include "taintchain/trace.hpp"

#include <algorithm>

#include "taintchain/error.hpp"

namespace taintchain {

namespace {

class Tracer {
 public:
  Tracer(const Chain& chain, const SourceIndex& sources, const LabelTable& labels)
      : chain_(chain), sources_(sources), labels_(labels) {}

  ProvenanceNode output_node(std::size_t ordinal, std::uint32_t vout, Amount start, Amount end) {
    const Transaction& tx = chain_.transaction(ordinal);
    ProvenanceNode node{NodeKind::Output, OutPoint{tx.txid, vout}, start, end, {}, std::nullopt};
    if (auto label = sources_.override_for(ordinal, vout)) {
      node.terminal = TaintEvent{labels_.name(*label), tx.txid};
      return node;
    }
    const Amount offset = tx.output_offset(vout);
    if (tx.is_coinbase) {
      expand_coinbase(node, ordinal, offset);
    } else {
      node.children = expand_inputs(ordinal, offset + start, offset + end);
    }
    return node;
  }

 private:
  ProvenanceNode fee_node(std::size_t ordinal, Amount start, Amount end) {
    const Transaction& tx = chain_.transaction(ordinal);
    ProvenanceNode node{NodeKind::Fee, OutPoint{tx.txid, 0}, start, end, {}, std::nullopt};
    const Amount offset = tx.output_total();
    node.children = expand_inputs(ordinal, offset + start, offset + end);
    return node;
  }

  // Queue positions [lo, hi) of a regular transaction, split across inputs.
  std::vector<ProvenanceNode> expand_inputs(std::size_t ordinal, Amount lo, Amount hi) {
    const Transaction& tx = chain_.transaction(ordinal);
    std::vector<ProvenanceNode> children;
    Amount cursor = 0;
    for (const OutPoint& op : tx.inputs) {
      auto loc = chain_.find(op.txid);
      const TxOutput* out = chain_.output(op);
      if (!loc || out == nullptr || loc->ordinal >= ordinal) {
        throw Error("cannot trace through unresolved input " + op.txid.hex() + ":" +
                    std::to_string(op.vout));
      }
      const Amount a = std::max(lo, cursor);
      const Amount b = std::min(hi, cursor + out->value);
      if (a < b) children.push_back(output_node(loc->ordinal, op.vout, a - cursor, b - cursor));
      cursor += out->value;
      if (cursor >= hi) break;
    }
    if (cursor < hi) {
      throw Error("inputs of " + tx.txid.hex() + " do not cover queue position " + std::to_string(hi));
    }
    return children;
  }

  // Coinbase queue: subsidy first, then each fee of the block in order.
  void expand_coinbase(ProvenanceNode& node, std::size_t ordinal, Amount offset) {
    const Amount lo = offset + node.start;
    const Amount hi = offset + node.end;
    const Amount subsidy = chain_.params().subsidy;
    const auto height = chain_.block_of(ordinal).height;
    if (hi <= subsidy) {
      node.terminal = CoinbaseOrigin{height};
      return;
    }
    if (lo < subsidy) {
      node.children.push_back(ProvenanceNode{NodeKind::Output, node.outpoint, node.start,
                                             subsidy - offset, {}, CoinbaseOrigin{height}});
    }
    Amount cursor = subsidy;
    const auto& loc = chain_.location(ordinal);
    const std::size_t n = chain_.blocks()[loc.block].transactions.size();
    for (std::size_t i = 1; i < n && cursor < hi; ++i) {
      const std::size_t payer = ordinal + i;
      const Amount fee = fee_of(payer);
      const Amount a = std::max(lo, cursor);
      const Amount b = std::min(hi, cursor + fee);
      if (a < b) node.children.push_back(fee_node(payer, a - cursor, b - cursor));
      cursor += fee;
    }
    if (cursor < hi) throw Error("coinbase pays more than subsidy and fees");
  }

  Amount fee_of(std::size_t ordinal) const {
    const Transaction& tx = chain_.transaction(ordinal);
    Amount in = 0;
    for (const OutPoint& op : tx.inputs) {
      const TxOutput* out = chain_.output(op);
      if (out == nullptr) throw Error("unresolved input in " + tx.txid.hex());
      in += out->value;
    }
    return in - tx.output_total();
  }

  const Chain& chain_;
  const SourceIndex& sources_;
  const LabelTable& labels_;
};

void collect_leaves(const ProvenanceNode& node, std::vector<const ProvenanceNode*>& out) {
  if (node.terminal) {
    out.push_back(&node);
    return;
  }
  for (const auto& child : node.children) collect_leaves(child, out);
}

}  // namespace

ProvenanceNode trace_back(const Chain& chain, const SourceIndex& sources, const LabelTable& labels,
                          const OutPoint& outpoint, Amount start, Amount end) {
  auto loc = chain.find(outpoint.txid);
  const TxOutput* out = chain.output(outpoint);
  if (!loc || out == nullptr) {
    throw QueryError("unknown output " + outpoint.txid.hex() + ":" + std::to_string(outpoint.vout));
  }
  if (start < 0 || start >= end || end > out->value) {
    throw QueryError("interval [" + std::to_string(start) + "," + std::to_string(end) +
                     ") out of bounds for output of " + std::to_string(out->value) + " satoshis");
  }
  return Tracer(chain, sources, labels).output_node(loc->ordinal, outpoint.vout, start, end);
}

ProvenanceNode trace_back(const Chain& chain, std::span<const TaintSource> sources,
                          const OutPoint& outpoint, Amount start, Amount end) {
  LabelTable labels = labels_from_sources(sources);
  SourceIndex index(chain, sources, labels);
  return trace_back(chain, index, labels, outpoint, start, end);
}

std::vector<const ProvenanceNode*> leaves(const ProvenanceNode& root) {
  std::vector<const ProvenanceNode*> out;
  collect_leaves(root, out);
  return out;
}

SegmentList leaf_segments(const ProvenanceNode& root, LabelTable& labels) {
  SegmentList list;
  for (const ProvenanceNode* leaf : leaves(root)) {
    const LabelId label = std::holds_alternative<CoinbaseOrigin>(*leaf->terminal)
                              ? kClean
                              : labels.intern(std::get<TaintEvent>(*leaf->terminal).label);
    list.append(leaf->length(), label);
  }
  return list;
}

}  // namespace taintchain
