#include "taintchain/validation.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace taintchain {

bool ValidationReport::has(std::string_view rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

namespace {

class Validator {
 public:
  explicit Validator(const Chain& chain) : chain_(chain) {}

  ValidationReport run() {
    const auto& blocks = chain_.blocks();
    std::size_t ordinal = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const Block& block = blocks[b];
      if (block.height != b) {
        report(block.height, "", rules::kHeightSequence,
               "expected height " + std::to_string(b));
      }
      check_block(block, ordinal);
      ordinal += block.transactions.size();
    }
    return std::move(report_);
  }

 private:
  struct Coin {
    Amount value = 0;
  };

  void report(std::uint64_t height, std::string txid, std::string_view rule,
              std::string detail) {
    report_.violations.push_back({height, std::move(txid), std::string(rule), std::move(detail)});
  }

  void check_block(const Block& block, std::size_t first_ordinal) {
    const auto& txs = block.transactions;
    const bool has_coinbase = !txs.empty() && txs.front().is_coinbase;
    if (!has_coinbase) {
      report(block.height, "", rules::kMissingCoinbase, "first transaction is not a coinbase");
    }
    const Txid* coinbase_txid = has_coinbase ? &txs.front().txid : nullptr;

    Amount fees = 0;
    for (std::size_t i = has_coinbase ? 1 : 0; i < txs.size(); ++i) {
      const Transaction& tx = txs[i];
      check_shape(block, tx);
      if (tx.is_coinbase) {
        report(block.height, tx.txid.hex(), rules::kExtraCoinbase, "coinbase at index " + std::to_string(i));
        add_outputs(tx);
        continue;
      }
      const auto fee = spend_inputs(block, tx, first_ordinal + i, coinbase_txid);
      if (fee) {
        if (*fee < 0) {
          report(block.height, tx.txid.hex(), rules::kValueInflation,
                 "outputs exceed inputs by " + std::to_string(-*fee));
        } else {
          fees += *fee;
        }
      }
      add_outputs(tx);
    }

    if (has_coinbase) {
      const Transaction& cb = txs.front();
      check_shape(block, cb);
      const Amount expected = chain_.params().subsidy + fees;
      if (cb.output_total() != expected) {
        report(block.height, cb.txid.hex(), rules::kCoinbaseValue,
               "coinbase pays " + std::to_string(cb.output_total()) + ", expected " +
                   std::to_string(expected));
      }
      add_outputs(cb);
    }
  }

  void check_shape(const Block& block, const Transaction& tx) {
    if (!seen_.insert(tx.txid).second) {
      report(block.height, tx.txid.hex(), rules::kDuplicateTxid, "");
    }
    if (tx.is_coinbase && !tx.inputs.empty()) {
      report(block.height, tx.txid.hex(), rules::kCoinbaseInputs, "");
    }
    if (!tx.is_coinbase && tx.inputs.empty()) {
      report(block.height, tx.txid.hex(), rules::kNoInputs, "");
    }
    if (tx.outputs.empty()) {
      report(block.height, tx.txid.hex(), rules::kEmptyOutputs, "");
    }
    for (std::size_t v = 0; v < tx.outputs.size(); ++v) {
      if (tx.outputs[v].value < 1) {
        report(block.height, tx.txid.hex(), rules::kZeroValueOutput, "vout " + std::to_string(v));
      }
    }
  }

  // Returns the fee, or nullopt when some input did not resolve.
  std::optional<Amount> spend_inputs(const Block& block, const Transaction& tx,
                                     std::size_t ordinal, const Txid* coinbase_txid) {
    Amount in = 0;
    bool resolved = true;
    for (const OutPoint& op : tx.inputs) {
      const std::string where = op.txid.hex() + ":" + std::to_string(op.vout);
      auto it = utxos_.find(op);
      if (it != utxos_.end()) {
        in += it->second.value;
        utxos_.erase(it);
        spent_.insert(op);
        continue;
      }
      resolved = false;
      if (spent_.count(op) != 0) {
        report(block.height, tx.txid.hex(), rules::kDoubleSpend, where);
      } else if (coinbase_txid != nullptr && op.txid == *coinbase_txid) {
        report(block.height, tx.txid.hex(), rules::kSameBlockCoinbaseSpend, where);
      } else if (auto loc = chain_.find(op.txid); loc && loc->ordinal >= ordinal) {
        report(block.height, tx.txid.hex(), rules::kSpendsLaterOutput, where);
      } else {
        report(block.height, tx.txid.hex(), rules::kMissingInput, where);
      }
    }
    if (!resolved) return std::nullopt;
    return in - tx.output_total();
  }

  void add_outputs(const Transaction& tx) {
    for (std::uint32_t v = 0; v < tx.outputs.size(); ++v) {
      utxos_.insert_or_assign(OutPoint{tx.txid, v}, Coin{tx.outputs[v].value});
    }
  }

  const Chain& chain_;
  ValidationReport report_;
  std::unordered_map<OutPoint, Coin> utxos_;
  std::unordered_set<OutPoint> spent_;
  std::unordered_set<Txid> seen_;
};

}  // namespace

ValidationReport validate_chain(const Chain& chain) { return Validator(chain).run(); }

}  // namespace taintchain
