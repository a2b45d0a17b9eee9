#include "taintchain/chain_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "json_util.hpp"

namespace taintchain {

namespace {

using detail::json;
using detail::ordered_json;
using detail::RecordReader;

Transaction parse_transaction(const json& j, const RecordReader& rd) {
  Transaction tx;
  tx.txid = rd.txid(j, "txid");
  tx.is_coinbase = rd.boolean(j, "coinbase");
  for (const json& in : rd.array(j, "inputs")) {
    OutPoint op;
    op.txid = rd.txid(in, "txid");
    op.vout = static_cast<std::uint32_t>(rd.integer(in, "vout", 0, UINT32_MAX));
    tx.inputs.push_back(op);
  }
  for (const json& out : rd.array(j, "outputs")) {
    TxOutput o;
    o.value = rd.integer(out, "value", 1);
    o.address = rd.string(out, "address");
    tx.outputs.push_back(std::move(o));
  }
  if (tx.outputs.empty()) rd.fail("transaction " + tx.txid.hex() + " has no outputs");
  if (tx.is_coinbase != tx.inputs.empty()) {
    rd.fail("transaction " + tx.txid.hex() +
            (tx.is_coinbase ? " is a coinbase with inputs" : " has no inputs"));
  }
  return tx;
}

ordered_json to_json(const Transaction& tx) {
  ordered_json inputs = ordered_json::array();
  for (const auto& op : tx.inputs) {
    ordered_json in;
    in["txid"] = op.txid.hex();
    in["vout"] = op.vout;
    inputs.push_back(std::move(in));
  }
  ordered_json outputs = ordered_json::array();
  for (const auto& o : tx.outputs) {
    ordered_json out;
    out["value"] = o.value;
    out["address"] = o.address;
    outputs.push_back(std::move(out));
  }
  ordered_json j;
  j["txid"] = tx.txid.hex();
  j["coinbase"] = tx.is_coinbase;
  j["inputs"] = std::move(inputs);
  j["outputs"] = std::move(outputs);
  return j;
}

}  // namespace

Chain parse_chain(std::istream& in, std::optional<Amount> subsidy) {
  std::vector<Block> blocks;
  std::unordered_set<Txid> txids;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const json j = detail::parse_line(text, line);
    RecordReader rd(line, "");
    Block block;
    block.height = static_cast<std::uint64_t>(rd.integer(j, "height", 0));
    if (block.height != blocks.size()) {
      rd.fail("non-consecutive height " + std::to_string(block.height) + ", expected " +
              std::to_string(blocks.size()));
    }
    block.hash = rd.string(j, "hash");
    for (const json& tj : rd.array(j, "txs")) {
      Transaction tx = parse_transaction(tj, rd);
      if (!txids.insert(tx.txid).second) rd.fail("duplicate txid " + tx.txid.hex());
      block.transactions.push_back(std::move(tx));
    }
    blocks.push_back(std::move(block));
  }

  ChainParams params;
  if (subsidy) {
    params.subsidy = *subsidy;
  } else if (!blocks.empty() && !blocks.front().transactions.empty() &&
             blocks.front().transactions.front().is_coinbase) {
    params.subsidy = blocks.front().transactions.front().output_total();
  }
  return Chain(std::move(blocks), params);
}

Chain parse_chain_file(const std::string& path, std::optional<Amount> subsidy) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open chain file '" + path + "'");
  return parse_chain(in, subsidy);
}

void write_chain(std::ostream& out, const Chain& chain) {
  for (const Block& block : chain.blocks()) {
    ordered_json txs = ordered_json::array();
    for (const auto& tx : block.transactions) txs.push_back(to_json(tx));
    ordered_json j;
    j["height"] = block.height;
    j["hash"] = block.hash;
    j["txs"] = std::move(txs);
    out << j.dump() << '\n';
  }
}

std::string write_chain(const Chain& chain) {
  std::ostringstream out;
  write_chain(out, chain);
  return out.str();
}

}  // namespace taintchain
