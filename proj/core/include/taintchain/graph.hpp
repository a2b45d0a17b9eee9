#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "taintchain/assignment.hpp"
#include "taintchain/chain.hpp"
#include "taintchain/rational.hpp"

namespace taintchain {

using LabelMass = std::map<LabelId, Amount>;

// A transaction with at least one tainted input or output satoshi.
struct TaintVertex {
  Txid txid;
  std::uint64_t height = 0;
  std::string block_hash;
  TxClass tx_class = TxClass::OneToOne;
  LabelMass output_mass;  // per label, summed over outputs
  LabelMass input_mass;   // per label, summed over inputs
};

// A hop: output `from` consumed as input `input_index` of `to`.
struct TaintEdge {
  OutPoint from;
  Txid to;
  std::uint32_t input_index = 0;
  Amount value = 0;
  LabelMass tainted;
  Fraction proportion;  // value / total input value of `to`

  // Tainted satoshis, restricted to one label when given.
  Amount mass(std::optional<LabelId> label = std::nullopt) const;
};

enum class Direction { Forward, Backward };

// Clean satoshis are left out: only tainted transactions and hops carrying
// at least one tainted satoshi appear. Immutable after build_graph.
class TaintGraph {
 public:
  const std::vector<TaintVertex>& vertices() const { return vertices_; }
  const std::vector<TaintEdge>& edges() const { return edges_; }
  const LabelTable& labels() const { return labels_; }

  std::optional<std::size_t> index_of(const Txid& txid) const;
  const TaintVertex* vertex(const Txid& txid) const;

  // Edge indices: outgoing by (from vout, spender order), incoming by input index.
  std::span<const std::size_t> out_edges(std::size_t vertex) const { return out_[vertex]; }
  std::span<const std::size_t> in_edges(std::size_t vertex) const { return in_[vertex]; }

 private:
  friend TaintGraph build_graph(const Chain&, const FifoAssignment&, std::size_t);

  LabelTable labels_;
  std::vector<TaintVertex> vertices_;
  std::vector<TaintEdge> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::unordered_map<Txid, std::size_t> index_;
};

TaintGraph build_graph(const Chain& chain, const FifoAssignment& fifo,
                       std::size_t fan_threshold = kDefaultFanThreshold);

struct Neighbor {
  TaintEdge edge;
  TaintVertex vertex;
};

struct ExpandResult {
  std::vector<Neighbor> neighbors;
  // Edges left out, either below `min_sats` or carrying none of the filter
  // label. neighbors.size() + collapsed is always the vertex degree.
  std::size_t collapsed = 0;
  Amount collapsed_sats = 0;
};

// Neighbours across edges whose tainted mass (restricted to `label` when
// set) is positive and at least `min_sats`. Throws QueryError for a txid
// that is not a vertex.
ExpandResult expand(const TaintGraph& graph, const Txid& txid, Direction direction,
                    std::optional<LabelId> label = std::nullopt, Amount min_sats = 0);

}  // namespace taintchain
