#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "taintchain/chain.hpp"

namespace taintchain {

// Rule names reported by validate_chain.
namespace rules {
inline constexpr std::string_view kHeightSequence = "height-sequence";
inline constexpr std::string_view kMissingCoinbase = "missing-coinbase";
inline constexpr std::string_view kExtraCoinbase = "extra-coinbase";
inline constexpr std::string_view kCoinbaseInputs = "coinbase-inputs";
inline constexpr std::string_view kCoinbaseValue = "coinbase-value";
inline constexpr std::string_view kNoInputs = "no-inputs";
inline constexpr std::string_view kEmptyOutputs = "empty-outputs";
inline constexpr std::string_view kZeroValueOutput = "zero-value-output";
inline constexpr std::string_view kDuplicateTxid = "duplicate-txid";
inline constexpr std::string_view kDoubleSpend = "double-spend";
inline constexpr std::string_view kMissingInput = "missing-input";
inline constexpr std::string_view kSpendsLaterOutput = "spends-later-output";
inline constexpr std::string_view kSameBlockCoinbaseSpend = "same-block-coinbase-spend";
inline constexpr std::string_view kValueInflation = "value-inflation";
}  // namespace rules

struct Violation {
  std::uint64_t height = 0;
  std::string txid;  // empty for block-level findings
  std::string rule;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view rule) const;
};

// Single sequential pass that rebuilds the UTXO set. Every finding is
// reported; validation never throws.
ValidationReport validate_chain(const Chain& chain);

}  // namespace taintchain
