#include "builder.hpp"

#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace testing_support {

Txid numbered_txid(std::uint64_t n) { return Txid::from_hex(fmt::format("{:064x}", n)); }

ChainBuilder::ChainBuilder(Amount subsidy) : subsidy_(subsidy) {}

Txid ChainBuilder::next_txid() { return numbered_txid(0x7700000000ull + ++counter_); }

Txid ChainBuilder::open_block(std::size_t coinbase_outputs, std::vector<Amount> coinbase_split) {
  if (!blocks_.empty()) close_block();
  Block b;
  b.height = blocks_.size();
  b.hash = fmt::format("{:064x}", 0xb10c000000ull + b.height);
  Transaction cb;
  cb.txid = next_txid();
  cb.is_coinbase = true;
  b.transactions.push_back(cb);
  blocks_.push_back(std::move(b));
  pending_outputs_ = coinbase_outputs;
  pending_split_ = std::move(coinbase_split);
  pending_fees_ = 0;
  return cb.txid;
}

Txid ChainBuilder::add(std::vector<OutPoint> inputs, std::vector<Amount> outputs, std::vector<std::string> addresses) {
  if (blocks_.empty()) throw std::logic_error("open a block first");
  Transaction tx;
  tx.txid = next_txid();
  Amount in = 0;
  for (const auto& op : inputs) in += values_.at(op);
  const Amount out = std::accumulate(outputs.begin(), outputs.end(), Amount{0});
  if (out > in) throw std::logic_error("builder: outputs exceed inputs");
  pending_fees_ += in - out;
  tx.inputs = std::move(inputs);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    std::string address = i < addresses.size() ? addresses[i] : fmt::format("addr{}_{}", counter_, i);
    tx.outputs.push_back(TxOutput{outputs[i], std::move(address)});
    values_[OutPoint{tx.txid, static_cast<std::uint32_t>(i)}] = outputs[i];
  }
  blocks_.back().transactions.push_back(tx);
  return tx.txid;
}

void ChainBuilder::close_block() {
  Transaction& cb = blocks_.back().transactions.front();
  const Amount total = subsidy_ + pending_fees_;
  std::vector<Amount> split = pending_split_;
  if (split.empty()) {
    const Amount part = total / static_cast<Amount>(pending_outputs_);
    split.assign(pending_outputs_, part);
    split.back() = total - part * static_cast<Amount>(pending_outputs_ - 1);
  }
  if (std::accumulate(split.begin(), split.end(), Amount{0}) != total) {
    throw std::logic_error("builder: coinbase split does not match subsidy plus fees");
  }
  for (std::size_t i = 0; i < split.size(); ++i) {
    cb.outputs.push_back(TxOutput{split[i], fmt::format("miner{}_{}", blocks_.back().height, i)});
    values_[OutPoint{cb.txid, static_cast<std::uint32_t>(i)}] = split[i];
  }
}

Chain ChainBuilder::build() {
  if (!blocks_.empty()) close_block();
  Chain chain(std::move(blocks_), ChainParams{subsidy_});
  blocks_.clear();
  return chain;
}

}  // namespace testing_support
