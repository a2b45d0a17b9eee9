#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taintchain {

// Satoshi amounts. Money is never represented as floating point.
using Amount = std::int64_t;

inline constexpr Amount kCoin = 100'000'000;
inline constexpr Amount kDefaultSubsidy = 50 * kCoin;

// 32-byte transaction identifier, serialized as 64 lowercase hex characters.
class Txid {
 public:
  static constexpr std::size_t kSize = 32;

  Txid() = default;
  explicit Txid(const std::array<std::uint8_t, kSize>& bytes) : bytes_(bytes) {}

  // Throws Error unless `hex` is exactly 64 lowercase hex characters.
  static Txid from_hex(std::string_view hex);
  static std::optional<Txid> parse(std::string_view hex) noexcept;

  std::string hex() const;
  const std::array<std::uint8_t, kSize>& bytes() const { return bytes_; }

  auto operator<=>(const Txid&) const = default;

 private:
  std::array<std::uint8_t, kSize> bytes_{};
};

struct OutPoint {
  Txid txid;
  std::uint32_t vout = 0;

  auto operator<=>(const OutPoint&) const = default;
};

struct TxOutput {
  Amount value = 0;
  std::string address;

  bool operator==(const TxOutput&) const = default;
};

struct Transaction {
  Txid txid;
  bool is_coinbase = false;
  std::vector<OutPoint> inputs;
  std::vector<TxOutput> outputs;

  Amount output_total() const;
  // Sum of output values before output `vout`.
  Amount output_offset(std::uint32_t vout) const;

  bool operator==(const Transaction&) const = default;
};

struct Block {
  std::uint64_t height = 0;
  std::string hash;
  std::vector<Transaction> transactions;  // [0] is the coinbase

  bool operator==(const Block&) const = default;
};

struct ChainParams {
  Amount subsidy = kDefaultSubsidy;

  bool operator==(const ChainParams&) const = default;
};

// Where a transaction sits. `ordinal` counts transactions across the whole
// chain in order and is the index every per-transaction table uses.
struct TxLocation {
  std::size_t block = 0;
  std::size_t index = 0;
  std::size_t ordinal = 0;
};

struct SpendRef {
  std::size_t ordinal = 0;      // spending transaction
  std::uint32_t input_index = 0;
};

}  // namespace taintchain

template <>
struct std::hash<taintchain::Txid> {
  std::size_t operator()(const taintchain::Txid& txid) const noexcept;
};

template <>
struct std::hash<taintchain::OutPoint> {
  std::size_t operator()(const taintchain::OutPoint& op) const noexcept;
};

namespace taintchain {

// Linear, append-only ledger. Immutable once constructed; lookups go through
// indexes built in the constructor, so copies stay valid.
class Chain {
 public:
  Chain() = default;
  explicit Chain(std::vector<Block> blocks, ChainParams params = {});

  const std::vector<Block>& blocks() const { return blocks_; }
  const ChainParams& params() const { return params_; }
  bool empty() const { return blocks_.empty(); }

  std::size_t transaction_count() const { return locations_.size(); }
  const Transaction& transaction(std::size_t ordinal) const;
  const TxLocation& location(std::size_t ordinal) const { return locations_.at(ordinal); }
  const Block& block_of(std::size_t ordinal) const { return blocks_[location(ordinal).block]; }

  // First transaction carrying `txid`, if any.
  std::optional<TxLocation> find(const Txid& txid) const;
  // nullptr when the outpoint does not name an existing output.
  const TxOutput* output(const OutPoint& op) const;

  // Transaction that consumes output `vout` of `ordinal`, if any. Only
  // inputs that resolve to an existing output are indexed.
  std::optional<SpendRef> spender(std::size_t ordinal, std::uint32_t vout) const;

  // Cheap identity check used to reject results computed on another chain.
  std::uint64_t fingerprint() const { return fingerprint_; }

  bool operator==(const Chain& other) const {
    return params_ == other.params_ && blocks_ == other.blocks_;
  }

 private:
  std::vector<Block> blocks_;
  ChainParams params_;
  std::vector<TxLocation> locations_;
  std::unordered_map<Txid, std::size_t> ordinals_;
  std::unordered_map<OutPoint, SpendRef> spenders_;
  std::uint64_t fingerprint_ = 0;
};

enum class TxClass { OneToOne, ManyToTwo, OneToMany, ManyToMany, Coinbase };

inline constexpr std::size_t kDefaultFanThreshold = 3;

std::string_view to_string(TxClass cls);

// Count-based taxonomy. One-input two-output payments fall in ManyToTwo.
TxClass classify_transaction(const Transaction& tx,
                             std::size_t fan_threshold = kDefaultFanThreshold);

}  // namespace taintchain
