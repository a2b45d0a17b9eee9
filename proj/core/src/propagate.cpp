#include "taintchain/propagate.hpp"

#include "taintchain/error.hpp"

namespace taintchain {

namespace {

struct InputRef {
  std::size_t ordinal;
  std::uint32_t vout;
  Amount value;
};

// Inputs must name an output created strictly earlier in chain order.
std::vector<InputRef> resolve_inputs(const Chain& chain, std::size_t ordinal) {
  const Transaction& tx = chain.transaction(ordinal);
  std::vector<InputRef> refs;
  refs.reserve(tx.inputs.size());
  for (const OutPoint& op : tx.inputs) {
    auto loc = chain.find(op.txid);
    const TxOutput* out = chain.output(op);
    if (!loc || out == nullptr || loc->ordinal >= ordinal) {
      throw Error("transaction " + tx.txid.hex() + " spends unresolved output " + op.txid.hex() +
                  ":" + std::to_string(op.vout));
    }
    refs.push_back({loc->ordinal, op.vout, out->value});
  }
  return refs;
}

Amount total_value(const std::vector<InputRef>& refs) {
  Amount sum = 0;
  for (const auto& r : refs) sum += r.value;
  return sum;
}

std::optional<LabelId> override_at(std::span<const std::optional<LabelId>> overrides,
                                   std::size_t vout) {
  return vout < overrides.size() ? overrides[vout] : std::nullopt;
}

FifoSlice slice_queue(const Transaction& tx, SegmentQueue& queue,
                      std::span<const std::optional<LabelId>> overrides) {
  FifoSlice result;
  result.outputs.reserve(tx.outputs.size());
  for (std::size_t v = 0; v < tx.outputs.size(); ++v) {
    SegmentList taken = queue.take(tx.outputs[v].value);
    if (auto label = override_at(overrides, v)) taken = SegmentList::uniform(taken.total(), *label);
    result.outputs.push_back(std::move(taken));
  }
  result.fee = queue.drain();
  return result;
}

// Block iteration shared by the three policies. `spend(ordinal)` handles a
// regular transaction, `mint(coinbase_ordinal, first, last)` the block's
// coinbase once the fees of ordinals [first, last) are known.
template <typename Spend, typename Mint>
void walk_chain(const Chain& chain, Spend&& spend, Mint&& mint) {
  std::size_t ordinal = 0;
  for (const Block& block : chain.blocks()) {
    const std::size_t first = ordinal;
    const std::size_t end = first + block.transactions.size();
    const bool has_coinbase = !block.transactions.empty() && block.transactions.front().is_coinbase;
    for (std::size_t o = has_coinbase ? first + 1 : first; o < end; ++o) {
      if (chain.transaction(o).is_coinbase) {
        throw Error("coinbase " + chain.transaction(o).txid.hex() + " is not first in its block");
      }
      spend(o);
    }
    if (has_coinbase) mint(first, first + 1, end);
    ordinal = end;
  }
}

}  // namespace

FifoSlice fifo_slice(const Transaction& tx, std::span<const SegmentList> inputs,
                     std::span<const std::optional<LabelId>> overrides) {
  SegmentQueue queue;
  for (const auto& in : inputs) queue.push(in);
  return slice_queue(tx, queue, overrides);
}

FifoAssignment fifo_propagate(const Chain& chain, std::span<const TaintSource> sources) {
  LabelTable labels = labels_from_sources(sources);
  SourceIndex index(chain, sources, labels);
  return fifo_propagate(chain, index, std::move(labels));
}

FifoAssignment fifo_propagate(const Chain& chain, const SourceIndex& sources, LabelTable labels) {
  FifoAssignment result(chain, std::move(labels));
  const auto store = [&](std::size_t ordinal, FifoSlice&& slice) {
    for (std::uint32_t v = 0; v < slice.outputs.size(); ++v) {
      result.output(ordinal, v) = std::move(slice.outputs[v]);
    }
    result.fee(ordinal) = std::move(slice.fee);
  };
  walk_chain(
      chain,
      [&](std::size_t ordinal) {
        SegmentQueue queue;
        for (const auto& in : resolve_inputs(chain, ordinal)) {
          queue.push(result.output(in.ordinal, in.vout));
        }
        store(ordinal, slice_queue(chain.transaction(ordinal), queue, sources.overrides(ordinal)));
      },
      [&](std::size_t coinbase, std::size_t first, std::size_t last) {
        SegmentQueue queue;
        queue.push(chain.params().subsidy, kClean);
        for (std::size_t o = first; o < last; ++o) queue.push(result.fee(o));
        store(coinbase,
              slice_queue(chain.transaction(coinbase), queue, sources.overrides(coinbase)));
      });
  return result;
}

PoisonAssignment poison_propagate(const Chain& chain, std::span<const TaintSource> sources) {
  LabelTable labels = labels_from_sources(sources);
  SourceIndex index(chain, sources, labels);
  return poison_propagate(chain, index, std::move(labels));
}

PoisonAssignment poison_propagate(const Chain& chain, const SourceIndex& sources,
                                  LabelTable labels) {
  PoisonAssignment result(chain, std::move(labels));
  const auto emit = [&](std::size_t ordinal, const PoisonTaint& merged, bool fee_nonzero) {
    const auto overrides = sources.overrides(ordinal);
    const Transaction& tx = chain.transaction(ordinal);
    for (std::uint32_t v = 0; v < tx.outputs.size(); ++v) {
      PoisonTaint taint = merged;
      if (auto label = override_at(overrides, v)) taint.insert(*label);
      result.output(ordinal, v) = std::move(taint);
    }
    result.fee(ordinal) = fee_nonzero ? merged : PoisonTaint{};
  };
  walk_chain(
      chain,
      [&](std::size_t ordinal) {
        PoisonTaint merged;
        const auto inputs = resolve_inputs(chain, ordinal);
        for (const auto& in : inputs) merged.merge(result.output(in.ordinal, in.vout));
        emit(ordinal, merged, total_value(inputs) > chain.transaction(ordinal).output_total());
      },
      [&](std::size_t coinbase, std::size_t first, std::size_t last) {
        PoisonTaint merged;
        for (std::size_t o = first; o < last; ++o) merged.merge(result.fee(o));
        emit(coinbase, merged, false);
      });
  return result;
}

HaircutAssignment haircut_propagate(const Chain& chain, std::span<const TaintSource> sources) {
  LabelTable labels = labels_from_sources(sources);
  SourceIndex index(chain, sources, labels);
  return haircut_propagate(chain, index, std::move(labels));
}

HaircutAssignment haircut_propagate(const Chain& chain, const SourceIndex& sources,
                                    LabelTable labels) {
  HaircutAssignment result(chain, std::move(labels));
  // `mass` holds tainted satoshis per label (exact), `total` the satoshis
  // entering the transaction.
  const auto emit = [&](std::size_t ordinal, const std::map<LabelId, Fraction>& mass,
                        Amount total, bool fee_nonzero) {
    HaircutTaint shared;
    if (total > 0) {
      for (const auto& [label, m] : mass) {
        if (m > 0) shared.emplace(label, Fraction(m / total));
      }
    }
    const auto overrides = sources.overrides(ordinal);
    const Transaction& tx = chain.transaction(ordinal);
    for (std::uint32_t v = 0; v < tx.outputs.size(); ++v) {
      if (auto label = override_at(overrides, v)) {
        result.output(ordinal, v) = HaircutTaint{{*label, Fraction(1)}};
      } else {
        result.output(ordinal, v) = shared;
      }
    }
    result.fee(ordinal) = fee_nonzero ? std::move(shared) : HaircutTaint{};
  };
  walk_chain(
      chain,
      [&](std::size_t ordinal) {
        std::map<LabelId, Fraction> mass;
        const auto inputs = resolve_inputs(chain, ordinal);
        for (const auto& in : inputs) {
          for (const auto& [label, f] : result.output(in.ordinal, in.vout)) {
            mass[label] += f * in.value;
          }
        }
        const Amount total = total_value(inputs);
        emit(ordinal, mass, total, total > chain.transaction(ordinal).output_total());
      },
      [&](std::size_t coinbase, std::size_t first, std::size_t last) {
        std::map<LabelId, Fraction> mass;
        Amount total = chain.params().subsidy;
        for (std::size_t o = first; o < last; ++o) {
          const Amount fee = total_value(resolve_inputs(chain, o)) - chain.transaction(o).output_total();
          total += fee;
          for (const auto& [label, f] : result.fee(o)) mass[label] += f * fee;
        }
        emit(coinbase, mass, total, false);
      });
  return result;
}

void rebuild_fees(const Chain& chain, FifoAssignment& assignment) {
  walk_chain(
      chain,
      [&](std::size_t ordinal) {
        SegmentQueue queue;
        for (const auto& in : resolve_inputs(chain, ordinal)) {
          queue.push(assignment.output(in.ordinal, in.vout));
        }
        queue.take(chain.transaction(ordinal).output_total());
        assignment.fee(ordinal) = queue.drain();
      },
      [&](std::size_t coinbase, std::size_t first, std::size_t last) {
        SegmentQueue queue;
        queue.push(chain.params().subsidy, kClean);
        for (std::size_t o = first; o < last; ++o) queue.push(assignment.fee(o));
        queue.take(chain.transaction(coinbase).output_total());
        assignment.fee(coinbase) = queue.drain();
      });
}

void rebuild_fees(const Chain& chain, PoisonAssignment& assignment) {
  walk_chain(
      chain,
      [&](std::size_t ordinal) {
        PoisonTaint merged;
        const auto inputs = resolve_inputs(chain, ordinal);
        for (const auto& in : inputs) merged.merge(assignment.output(in.ordinal, in.vout));
        const bool fee_nonzero = total_value(inputs) > chain.transaction(ordinal).output_total();
        assignment.fee(ordinal) = fee_nonzero ? std::move(merged) : PoisonTaint{};
      },
      [&](std::size_t coinbase, std::size_t, std::size_t) { assignment.fee(coinbase) = {}; });
}

void rebuild_fees(const Chain& chain, HaircutAssignment& assignment) {
  walk_chain(
      chain,
      [&](std::size_t ordinal) {
        std::map<LabelId, Fraction> mass;
        const auto inputs = resolve_inputs(chain, ordinal);
        for (const auto& in : inputs) {
          for (const auto& [label, f] : assignment.output(in.ordinal, in.vout)) {
            mass[label] += f * in.value;
          }
        }
        const Amount total = total_value(inputs);
        HaircutTaint fee;
        if (total > chain.transaction(ordinal).output_total()) {
          for (const auto& [label, m] : mass) {
            if (m > 0) fee.emplace(label, Fraction(m / total));
          }
        }
        assignment.fee(ordinal) = std::move(fee);
      },
      [&](std::size_t coinbase, std::size_t, std::size_t) { assignment.fee(coinbase) = {}; });
}

TaintAssignment propagate(const Chain& chain, std::span<const TaintSource> sources, Policy policy) {
  switch (policy) {
    case Policy::Fifo: return fifo_propagate(chain, sources);
    case Policy::Poison: return poison_propagate(chain, sources);
    case Policy::Haircut: return haircut_propagate(chain, sources);
  }
  throw Error("unknown policy");
}

}  // namespace taintchain
