#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taintchain/assignment.hpp"
#include "taintchain/chain.hpp"
#include "taintchain/rational.hpp"

namespace taintchain {

enum class PatternKind { Splitting, Collection, PeelingChain };

std::string_view to_string(PatternKind kind);

struct PatternMatch {
  PatternKind kind = PatternKind::Splitting;
  std::vector<Txid> txids;  // chain order; path order for peeling chains
  std::string label;        // dominant tainted label
  Fraction score;           // in (0, 1]
  std::optional<std::string> address;  // collection target
};

struct SplittingParams {
  std::size_t min_fan = 10;
  Amount min_tainted_sats = 1;
};

struct CollectionParams {
  std::size_t min_converging = 5;
  std::uint64_t window_blocks = 144;
};

struct PeelingParams {
  std::size_t min_length = 4;
  Fraction peel_fraction{3, 4};
};

struct DetectorThresholds {
  SplittingParams splitting;
  CollectionParams collection;
  PeelingParams peeling;
};

// Transactions spending at least `min_tainted_sats` tainted satoshis into
// at least `min_fan` outputs that each receive some of them. Score is the
// tainted share of the input value.
std::vector<PatternMatch> detect_splitting(const Chain& chain, const FifoAssignment& fifo,
                                           const SplittingParams& params = {});

// Addresses paid tainted outputs by at least `min_converging` distinct
// transactions whose heights span at most `window_blocks`. One match per
// address, for its busiest window. Score is the tainted share of the value
// received in that window.
std::vector<PatternMatch> detect_collection(const Chain& chain, const FifoAssignment& fifo,
                                            const CollectionParams& params = {});

// Maximal paths of two-output transactions whose larger output (ties go to
// the lower index) holds at least `peel_fraction` of the output value and is
// spent by the next transaction on the path. Paths must move tainted
// satoshis. Score is the smallest larger-output share on the path.
std::vector<PatternMatch> detect_peeling_chain(const Chain& chain, const FifoAssignment& fifo,
                                               const PeelingParams& params = {});

// Splitting, then collection, then peeling matches.
std::vector<PatternMatch> detect_patterns(const Chain& chain, const FifoAssignment& fifo,
                                          const DetectorThresholds& thresholds = {});

}  // namespace taintchain
