#include "taintchain/patterns.hpp"

#include <algorithm>
#include <unordered_map>

namespace taintchain {

std::string_view to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::Splitting: return "Splitting";
    case PatternKind::Collection: return "Collection";
    case PatternKind::PeelingChain: return "PeelingChain";
  }
  return "unknown";
}

namespace {

using LabelMass = std::map<LabelId, Amount>;

void check_same_chain(const Chain& chain, const FifoAssignment& fifo) {
  if (fifo.chain_fingerprint() != chain.fingerprint()) {
    throw Error("assignment was computed on a different chain");
  }
}

// Largest mass wins; ties go to the lower label id.
LabelId dominant(const LabelMass& mass) {
  LabelId best = kClean;
  Amount best_mass = 0;
  for (const auto& [label, m] : mass) {
    if (m > best_mass) {
      best = label;
      best_mass = m;
    }
  }
  return best;
}

Amount sum(const LabelMass& mass) {
  Amount total = 0;
  for (const auto& [label, m] : mass) total += m;
  return total;
}

Fraction ratio(Amount num, Amount den) {
  Fraction f(num, den);
  f.canonicalize();
  return f;
}

struct InputTaint {
  LabelMass mass;
  Amount value = 0;
};

InputTaint input_taint(const Chain& chain, const FifoAssignment& fifo, std::size_t ordinal) {
  InputTaint out;
  for (const OutPoint& op : chain.transaction(ordinal).inputs) {
    auto loc = chain.find(op.txid);
    if (!loc) continue;
    const SegmentList& segs = fifo.output(loc->ordinal, op.vout);
    out.value += segs.total();
    for (const auto& [label, m] : segs.masses()) out.mass[label] += m;
  }
  return out;
}

}  // namespace

std::vector<PatternMatch> detect_splitting(const Chain& chain, const FifoAssignment& fifo,
                                           const SplittingParams& params) {
  check_same_chain(chain, fifo);
  std::vector<PatternMatch> matches;
  for (std::size_t o = 0; o < chain.transaction_count(); ++o) {
    const Transaction& tx = chain.transaction(o);
    if (tx.is_coinbase || tx.outputs.size() < params.min_fan) continue;
    const InputTaint in = input_taint(chain, fifo, o);
    const Amount tainted = sum(in.mass);
    if (tainted == 0 || tainted < params.min_tainted_sats) continue;
    const auto outs = fifo.outputs(o);
    const auto receiving = static_cast<std::size_t>(
        std::count_if(outs.begin(), outs.end(), [](const SegmentList& s) { return s.tainted(); }));
    if (receiving < params.min_fan) continue;
    matches.push_back({PatternKind::Splitting, {tx.txid}, fifo.labels().name(dominant(in.mass)),
                       ratio(tainted, in.value), std::nullopt});
  }
  return matches;
}

std::vector<PatternMatch> detect_collection(const Chain& chain, const FifoAssignment& fifo,
                                            const CollectionParams& params) {
  check_same_chain(chain, fifo);
  struct Receipt {
    std::uint64_t height;
    std::size_t ordinal;
    Amount value;
    LabelMass mass;
  };
  std::unordered_map<std::string, std::vector<Receipt>> by_address;
  std::vector<std::string> address_order;
  for (std::size_t o = 0; o < chain.transaction_count(); ++o) {
    const Transaction& tx = chain.transaction(o);
    for (std::uint32_t v = 0; v < tx.outputs.size(); ++v) {
      const SegmentList& segs = fifo.output(o, v);
      if (!segs.tainted()) continue;
      auto [it, inserted] = by_address.try_emplace(tx.outputs[v].address);
      if (inserted) address_order.push_back(tx.outputs[v].address);
      it->second.push_back({chain.block_of(o).height, o, tx.outputs[v].value, segs.masses()});
    }
  }

  std::vector<PatternMatch> matches;
  for (const auto& address : address_order) {
    const auto& receipts = by_address[address];
    std::unordered_map<std::size_t, std::size_t> in_window;  // ordinal -> receipts
    std::size_t best = 0;
    std::size_t best_lo = 0;
    std::size_t best_hi = 0;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < receipts.size(); ++hi) {
      ++in_window[receipts[hi].ordinal];
      while (receipts[hi].height - receipts[lo].height > params.window_blocks) {
        if (--in_window[receipts[lo].ordinal] == 0) in_window.erase(receipts[lo].ordinal);
        ++lo;
      }
      if (in_window.size() > best) {
        best = in_window.size();
        best_lo = lo;
        best_hi = hi;
      }
    }
    if (best < params.min_converging || best == 0) continue;

    PatternMatch m;
    m.kind = PatternKind::Collection;
    m.address = address;
    LabelMass mass;
    Amount value = 0;
    for (std::size_t i = best_lo; i <= best_hi; ++i) {
      const Receipt& r = receipts[i];
      if (m.txids.empty() || m.txids.back() != chain.transaction(r.ordinal).txid) {
        m.txids.push_back(chain.transaction(r.ordinal).txid);
      }
      value += r.value;
      for (const auto& [label, amount] : r.mass) mass[label] += amount;
    }
    m.label = fifo.labels().name(dominant(mass));
    m.score = ratio(sum(mass), value);
    matches.push_back(std::move(m));
  }
  return matches;
}

std::vector<PatternMatch> detect_peeling_chain(const Chain& chain, const FifoAssignment& fifo,
                                               const PeelingParams& params) {
  check_same_chain(chain, fifo);
  const std::size_t n = chain.transaction_count();
  std::vector<std::optional<std::uint32_t>> larger(n);  // set iff the tx qualifies
  for (std::size_t o = 0; o < n; ++o) {
    const Transaction& tx = chain.transaction(o);
    if (tx.is_coinbase || tx.outputs.size() != 2) continue;
    const std::uint32_t big = tx.outputs[1].value > tx.outputs[0].value ? 1 : 0;
    if (ratio(tx.outputs[big].value, tx.output_total()) >= params.peel_fraction) larger[o] = big;
  }

  std::vector<std::optional<std::size_t>> next(n);
  std::vector<bool> has_prev(n, false);
  for (std::size_t o = 0; o < n; ++o) {
    if (!larger[o]) continue;
    auto spend = chain.spender(o, *larger[o]);
    if (spend && larger[spend->ordinal]) {
      next[o] = spend->ordinal;
      has_prev[spend->ordinal] = true;
    }
  }

  std::vector<PatternMatch> matches;
  for (std::size_t start = 0; start < n; ++start) {
    if (!larger[start] || has_prev[start]) continue;
    std::vector<std::size_t> path{start};
    while (next[path.back()]) path.push_back(*next[path.back()]);
    if (path.size() < params.min_length) continue;

    LabelMass mass;
    Fraction score(1);
    for (std::size_t o : path) {
      for (const auto& [label, m] : input_taint(chain, fifo, o).mass) mass[label] += m;
      const Transaction& tx = chain.transaction(o);
      score = std::min(score, ratio(tx.outputs[*larger[o]].value, tx.output_total()));
    }
    if (mass.empty()) continue;

    PatternMatch m;
    m.kind = PatternKind::PeelingChain;
    for (std::size_t o : path) m.txids.push_back(chain.transaction(o).txid);
    m.label = fifo.labels().name(dominant(mass));
    m.score = score;
    matches.push_back(std::move(m));
  }
  return matches;
}

std::vector<PatternMatch> detect_patterns(const Chain& chain, const FifoAssignment& fifo,
                                          const DetectorThresholds& thresholds) {
  auto matches = detect_splitting(chain, fifo, thresholds.splitting);
  for (auto& m : detect_collection(chain, fifo, thresholds.collection)) matches.push_back(std::move(m));
  for (auto& m : detect_peeling_chain(chain, fifo, thresholds.peeling)) matches.push_back(std::move(m));
  return matches;
}

}  // namespace taintchain
