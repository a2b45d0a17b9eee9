#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "taintchain/chain.hpp"
#include "taintchain/error.hpp"
#include "taintchain/labels.hpp"
#include "taintchain/rational.hpp"
#include "taintchain/segment_list.hpp"

namespace taintchain {

enum class Policy { Fifo, Poison, Haircut };

std::string_view to_string(Policy policy);
std::optional<Policy> parse_policy(std::string_view text);

using PoisonTaint = LabelSet;
// Label -> fraction of the output's value, each in (0, 1]. Absent means clean.
using HaircutTaint = std::map<LabelId, Fraction>;

template <typename Taint>
struct PolicyOf;
template <>
struct PolicyOf<SegmentList> {
  static constexpr Policy value = Policy::Fifo;
};
template <>
struct PolicyOf<PoisonTaint> {
  static constexpr Policy value = Policy::Poison;
};
template <>
struct PolicyOf<HaircutTaint> {
  static constexpr Policy value = Policy::Haircut;
};

inline bool is_tainted(const SegmentList& t) { return t.tainted(); }
inline bool is_tainted(const PoisonTaint& t) { return !t.empty(); }
inline bool is_tainted(const HaircutTaint& t) { return !t.empty(); }

// Per-output taint for every transaction of one chain, plus the taint of
// each transaction's fee. Indexed by transaction ordinal.
template <typename Taint>
class Assignment {
 public:
  using taint_type = Taint;
  static constexpr Policy policy = PolicyOf<Taint>::value;

  Assignment() = default;
  Assignment(const Chain& chain, LabelTable labels)
      : labels_(std::move(labels)), fingerprint_(chain.fingerprint()) {
    outputs_.resize(chain.transaction_count());
    fees_.resize(chain.transaction_count());
    for (std::size_t i = 0; i < outputs_.size(); ++i) {
      outputs_[i].resize(chain.transaction(i).outputs.size());
    }
  }

  const LabelTable& labels() const { return labels_; }
  std::uint64_t chain_fingerprint() const { return fingerprint_; }
  std::size_t transaction_count() const { return outputs_.size(); }

  std::span<const Taint> outputs(std::size_t ordinal) const { return outputs_.at(ordinal); }
  const Taint& output(std::size_t ordinal, std::uint32_t vout) const {
    return outputs_.at(ordinal).at(vout);
  }
  Taint& output(std::size_t ordinal, std::uint32_t vout) { return outputs_.at(ordinal).at(vout); }

  const Taint& fee(std::size_t ordinal) const { return fees_.at(ordinal); }
  Taint& fee(std::size_t ordinal) { return fees_.at(ordinal); }

  const Taint& at(const Chain& chain, const OutPoint& op) const {
    auto loc = chain.find(op.txid);
    if (!loc || op.vout >= outputs_.at(loc->ordinal).size()) {
      throw QueryError("unknown output " + op.txid.hex() + ":" + std::to_string(op.vout));
    }
    return output(loc->ordinal, op.vout);
  }

  bool operator==(const Assignment&) const = default;

 private:
  LabelTable labels_;
  std::uint64_t fingerprint_ = 0;
  std::vector<std::vector<Taint>> outputs_;
  std::vector<Taint> fees_;
};

using FifoAssignment = Assignment<SegmentList>;
using PoisonAssignment = Assignment<PoisonTaint>;
using HaircutAssignment = Assignment<HaircutTaint>;

using TaintAssignment = std::variant<FifoAssignment, PoisonAssignment, HaircutAssignment>;

Policy policy_of(const TaintAssignment& assignment);

}  // namespace taintchain
