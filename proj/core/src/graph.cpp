#include "taintchain/graph.hpp"

#include <algorithm>

namespace taintchain {

Amount TaintEdge::mass(std::optional<LabelId> label) const {
  if (label) {
    auto it = tainted.find(*label);
    return it == tainted.end() ? 0 : it->second;
  }
  Amount total = 0;
  for (const auto& [l, m] : tainted) total += m;
  return total;
}

std::optional<std::size_t> TaintGraph::index_of(const Txid& txid) const {
  auto it = index_.find(txid);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const TaintVertex* TaintGraph::vertex(const Txid& txid) const {
  auto i = index_of(txid);
  return i ? &vertices_[*i] : nullptr;
}

TaintGraph build_graph(const Chain& chain, const FifoAssignment& fifo, std::size_t fan_threshold) {
  if (fifo.chain_fingerprint() != chain.fingerprint()) {
    throw Error("assignment was computed on a different chain");
  }
  TaintGraph g;
  g.labels_ = fifo.labels();

  struct PendingEdge {
    std::size_t from_ordinal;
    TaintEdge edge;
  };
  std::vector<PendingEdge> pending;
  std::vector<std::size_t> vertex_of_ordinal(chain.transaction_count(), SIZE_MAX);

  for (std::size_t o = 0; o < chain.transaction_count(); ++o) {
    const Transaction& tx = chain.transaction(o);
    TaintVertex v;
    Amount input_total = 0;
    std::vector<PendingEdge> hops;
    for (std::uint32_t i = 0; i < tx.inputs.size(); ++i) {
      const OutPoint& op = tx.inputs[i];
      auto loc = chain.find(op.txid);
      if (!loc) continue;
      const SegmentList& segs = fifo.output(loc->ordinal, op.vout);
      input_total += segs.total();
      auto masses = segs.masses();
      for (const auto& [label, m] : masses) v.input_mass[label] += m;
      if (!masses.empty()) {
        hops.push_back({loc->ordinal, TaintEdge{op, tx.txid, i, segs.total(), std::move(masses), {}}});
      }
    }
    for (const SegmentList& segs : fifo.outputs(o)) {
      for (const auto& [label, m] : segs.masses()) v.output_mass[label] += m;
    }
    if (v.input_mass.empty() && v.output_mass.empty()) continue;

    v.txid = tx.txid;
    v.height = chain.block_of(o).height;
    v.block_hash = chain.block_of(o).hash;
    v.tx_class = classify_transaction(tx, fan_threshold);
    vertex_of_ordinal[o] = g.vertices_.size();
    g.index_.emplace(tx.txid, g.vertices_.size());
    g.vertices_.push_back(std::move(v));
    for (auto& hop : hops) {
      hop.edge.proportion = Fraction(hop.edge.value, input_total);
      hop.edge.proportion.canonicalize();
      pending.push_back(std::move(hop));
    }
  }

  g.out_.resize(g.vertices_.size());
  g.in_.resize(g.vertices_.size());
  for (auto& p : pending) {
    const std::size_t e = g.edges_.size();
    g.out_[vertex_of_ordinal[p.from_ordinal]].push_back(e);
    g.in_[g.index_.at(p.edge.to)].push_back(e);
    g.edges_.push_back(std::move(p.edge));
  }
  for (auto& out : g.out_) {
    std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
      return g.edges_[a].from.vout < g.edges_[b].from.vout;
    });
  }
  return g;
}

ExpandResult expand(const TaintGraph& graph, const Txid& txid, Direction direction,
                    std::optional<LabelId> label, Amount min_sats) {
  auto index = graph.index_of(txid);
  if (!index) throw QueryError("unknown txid " + txid.hex());
  const auto edge_ids = direction == Direction::Forward ? graph.out_edges(*index) : graph.in_edges(*index);
  ExpandResult result;
  for (std::size_t e : edge_ids) {
    const TaintEdge& edge = graph.edges()[e];
    const Amount mass = edge.mass(label);
    if (mass > 0 && mass >= min_sats) {
      const Txid& other = direction == Direction::Forward ? edge.to : edge.from.txid;
      result.neighbors.push_back({edge, *graph.vertex(other)});
    } else {
      ++result.collapsed;
      result.collapsed_sats += mass;
    }
  }
  return result;
}

}  // namespace taintchain
