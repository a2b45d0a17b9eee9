#include "taintchain/chain.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>

#include "taintchain/error.hpp"

namespace taintchain {

namespace {

int hex_value(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, const std::uint8_t* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

std::optional<Txid> Txid::parse(std::string_view hex) noexcept {
  if (hex.size() != 2 * kSize) return std::nullopt;
  std::array<std::uint8_t, kSize> bytes{};
  for (std::size_t i = 0; i < kSize; ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) return std::nullopt;
    bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return Txid(bytes);
}

Txid Txid::from_hex(std::string_view hex) {
  auto txid = parse(hex);
  if (!txid) {
    throw Error("txid must be 64 lowercase hex characters: '" + std::string(hex) + "'");
  }
  return *txid;
}

std::string Txid::hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(2 * kSize, '0');
  for (std::size_t i = 0; i < kSize; ++i) {
    out[2 * i] = kDigits[bytes_[i] >> 4];
    out[2 * i + 1] = kDigits[bytes_[i] & 0xf];
  }
  return out;
}

Amount Transaction::output_total() const {
  return std::accumulate(outputs.begin(), outputs.end(), Amount{0},
                         [](Amount acc, const TxOutput& o) { return acc + o.value; });
}

Amount Transaction::output_offset(std::uint32_t vout) const {
  Amount offset = 0;
  for (std::uint32_t i = 0; i < vout && i < outputs.size(); ++i) offset += outputs[i].value;
  return offset;
}

Chain::Chain(std::vector<Block> blocks, ChainParams params)
    : blocks_(std::move(blocks)), params_(params) {
  std::uint64_t h = kFnvOffset;
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& txs = blocks_[b].transactions;
    for (std::size_t i = 0; i < txs.size(); ++i) {
      const std::size_t ordinal = locations_.size();
      locations_.push_back({b, i, ordinal});
      ordinals_.try_emplace(txs[i].txid, ordinal);
      h = fnv1a(h, txs[i].txid.bytes().data(), Txid::kSize);
    }
  }
  const std::uint64_t subsidy = static_cast<std::uint64_t>(params_.subsidy);
  fingerprint_ = fnv1a(h, reinterpret_cast<const std::uint8_t*>(&subsidy), sizeof subsidy);

  for (std::size_t ordinal = 0; ordinal < locations_.size(); ++ordinal) {
    const auto& tx = transaction(ordinal);
    for (std::uint32_t i = 0; i < tx.inputs.size(); ++i) {
      if (output(tx.inputs[i]) != nullptr) {
        spenders_.try_emplace(tx.inputs[i], SpendRef{ordinal, i});
      }
    }
  }
}

const Transaction& Chain::transaction(std::size_t ordinal) const {
  const auto& loc = locations_.at(ordinal);
  return blocks_[loc.block].transactions[loc.index];
}

std::optional<TxLocation> Chain::find(const Txid& txid) const {
  auto it = ordinals_.find(txid);
  if (it == ordinals_.end()) return std::nullopt;
  return locations_[it->second];
}

const TxOutput* Chain::output(const OutPoint& op) const {
  auto loc = find(op.txid);
  if (!loc) return nullptr;
  const auto& outs = transaction(loc->ordinal).outputs;
  return op.vout < outs.size() ? &outs[op.vout] : nullptr;
}

std::optional<SpendRef> Chain::spender(std::size_t ordinal, std::uint32_t vout) const {
  auto it = spenders_.find(OutPoint{transaction(ordinal).txid, vout});
  if (it == spenders_.end()) return std::nullopt;
  return it->second;
}

std::string_view to_string(TxClass cls) {
  switch (cls) {
    case TxClass::OneToOne: return "one-to-one";
    case TxClass::ManyToTwo: return "many-to-two";
    case TxClass::OneToMany: return "one-to-many";
    case TxClass::ManyToMany: return "many-to-many";
    case TxClass::Coinbase: return "coinbase";
  }
  return "unknown";
}

TxClass classify_transaction(const Transaction& tx, std::size_t fan_threshold) {
  fan_threshold = std::max<std::size_t>(fan_threshold, 3);
  const std::size_t ins = tx.inputs.size();
  const std::size_t outs = tx.outputs.size();
  if (tx.is_coinbase) return TxClass::Coinbase;
  if (ins == 1 && outs == 1) return TxClass::OneToOne;
  if (outs <= 2) return TxClass::ManyToTwo;
  if (ins == 1 && outs >= fan_threshold) return TxClass::OneToMany;
  return TxClass::ManyToMany;
}

}  // namespace taintchain

std::size_t std::hash<taintchain::Txid>::operator()(const taintchain::Txid& txid) const noexcept {
  std::size_t h = 0;
  std::memcpy(&h, txid.bytes().data(), sizeof h);
  return h;
}

std::size_t std::hash<taintchain::OutPoint>::operator()(
    const taintchain::OutPoint& op) const noexcept {
  return std::hash<taintchain::Txid>{}(op.txid) ^ (std::size_t{op.vout} * 0x9e3779b97f4a7c15ULL);
}
