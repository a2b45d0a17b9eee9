#pragma once

#include <optional>
#include <span>
#include <vector>

#include "taintchain/assignment.hpp"
#include "taintchain/chain.hpp"
#include "taintchain/segment_list.hpp"
#include "taintchain/source_index.hpp"
#include "taintchain/taint_source.hpp"

namespace taintchain {

struct FifoSlice {
  std::vector<SegmentList> outputs;
  SegmentList fee;
};

// Concatenates the inputs in input order and hands each output, in index
// order, exactly its value from the front of the queue. The tail is the fee.
// An override replaces that output's satoshis with a single labelled run.
// Throws Error when the inputs do not cover the outputs.
FifoSlice fifo_slice(const Transaction& tx, std::span<const SegmentList> inputs,
                     std::span<const std::optional<LabelId>> overrides = {});

// Whole-chain forward propagation, in height order. Fees join the block's
// coinbase after the subsidy, in block transaction order. Requires a valid
// chain; throws SourceError for sources that do not resolve.
FifoAssignment fifo_propagate(const Chain& chain, std::span<const TaintSource> sources);
FifoAssignment fifo_propagate(const Chain& chain, const SourceIndex& sources, LabelTable labels);

// Every output carries the union of the input labels (plus its own source
// label). Fees with at least one satoshi pass the union to the coinbase.
PoisonAssignment poison_propagate(const Chain& chain, std::span<const TaintSource> sources);
PoisonAssignment poison_propagate(const Chain& chain, const SourceIndex& sources, LabelTable labels);

// Every output and the fee carry, per label, tainted input mass over total
// input value. A source sets its output to {label: 1}.
HaircutAssignment haircut_propagate(const Chain& chain, std::span<const TaintSource> sources);
HaircutAssignment haircut_propagate(const Chain& chain, const SourceIndex& sources, LabelTable labels);

TaintAssignment propagate(const Chain& chain, std::span<const TaintSource> sources, Policy policy);

// Recomputes every fee taint from the output taints already stored, using
// the same per-policy rule as propagation. Used after loading an export,
// which carries outputs only.
void rebuild_fees(const Chain& chain, FifoAssignment& assignment);
void rebuild_fees(const Chain& chain, PoisonAssignment& assignment);
void rebuild_fees(const Chain& chain, HaircutAssignment& assignment);

}  // namespace taintchain
