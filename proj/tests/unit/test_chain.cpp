#include <numeric>

#include "builder.hpp"
#include "doctest.h"
#include "random_chain.hpp"
#include "taintchain/error.hpp"
#include "taintchain/generator.hpp"
#include "taintchain/validation.hpp"

using namespace taintchain;
using testing_support::ChainBuilder;
using testing_support::numbered_txid;

namespace {

Transaction shaped(std::size_t inputs, std::size_t outputs) {
  Transaction tx;
  tx.txid = numbered_txid(1);
  for (std::size_t i = 0; i < inputs; ++i) tx.inputs.push_back({numbered_txid(100 + i), 0});
  for (std::size_t i = 0; i < outputs; ++i) tx.outputs.push_back({1, "a"});
  return tx;
}

Block coinbase_block(std::uint64_t height, Amount value, std::uint64_t id) {
  Block b;
  b.height = height;
  b.hash = "h" + std::to_string(height);
  Transaction cb;
  cb.txid = numbered_txid(id);
  cb.is_coinbase = true;
  cb.outputs.push_back({value, "miner"});
  b.transactions.push_back(cb);
  return b;
}

}  // namespace

TEST_CASE("txid hex round trip and validation") {
  const std::string hex(64, 'a');
  CHECK(Txid::from_hex(hex).hex() == hex);
  CHECK_FALSE(Txid::parse(std::string(63, 'a')));
  CHECK_FALSE(Txid::parse(std::string(64, 'A')));
  CHECK_FALSE(Txid::parse(std::string(63, 'a') + "g"));
  CHECK_THROWS_AS(Txid::from_hex("zz"), Error);
}

TEST_CASE("classify_transaction follows the count-based taxonomy") {
  CHECK(classify_transaction(shaped(1, 1)) == TxClass::OneToOne);
  CHECK(classify_transaction(shaped(3, 2)) == TxClass::ManyToTwo);
  CHECK(classify_transaction(shaped(1, 2)) == TxClass::ManyToTwo);
  CHECK(classify_transaction(shaped(2, 1)) == TxClass::ManyToTwo);
  CHECK(classify_transaction(shaped(1, 40), 3) == TxClass::OneToMany);
  CHECK(classify_transaction(shaped(3, 3)) == TxClass::ManyToMany);
  CHECK(classify_transaction(shaped(1, 3), 5) == TxClass::ManyToMany);
  Transaction cb = shaped(0, 1);
  cb.is_coinbase = true;
  CHECK(classify_transaction(cb) == TxClass::Coinbase);
  CHECK(to_string(TxClass::ManyToTwo) == "many-to-two");
}

TEST_CASE("classification is total over random shapes") {
  for (std::size_t in = 1; in < 6; ++in) {
    for (std::size_t out = 1; out < 12; ++out) {
      for (std::size_t fan = 3; fan < 6; ++fan) {
        const TxClass c = classify_transaction(shaped(in, out), fan);
        CHECK(c != TxClass::Coinbase);
        CHECK(c == classify_transaction(shaped(in, out), fan));
      }
    }
  }
}

TEST_CASE("chain indexes locations and spenders") {
  ChainBuilder b(50);
  const Txid cb0 = b.open_block();
  b.open_block();
  const Txid t = b.add({{cb0, 0}}, {20, 29});
  const Txid u = b.add({{t, 1}}, {29});
  const Chain chain = b.build();
  REQUIRE(chain.transaction_count() == 4);
  const auto loc = chain.find(u).value();
  CHECK(loc.block == 1);
  CHECK(loc.index == 2);
  CHECK(loc.ordinal == 3);
  CHECK(chain.output({t, 1})->value == 29);
  CHECK(chain.output({t, 2}) == nullptr);
  const auto spend = chain.spender(chain.find(t)->ordinal, 1).value();
  CHECK(spend.ordinal == 3);
  CHECK(spend.input_index == 0);
  CHECK_FALSE(chain.spender(chain.find(t)->ordinal, 0));
  CHECK(chain.transaction(chain.find(t)->ordinal).output_offset(1) == 20);
}

TEST_CASE("validate_chain accepts a single coinbase block") {
  const Chain chain({coinbase_block(0, kDefaultSubsidy, 1)});
  CHECK(validate_chain(chain).ok());
}

TEST_CASE("validate_chain reports double spends and inflation") {
  SUBCASE("double spend") {
    Block b0 = coinbase_block(0, 50, 1);
    Block b1 = coinbase_block(1, 50, 2);
    Transaction tx;
    tx.txid = numbered_txid(3);
    tx.inputs = {{numbered_txid(1), 0}, {numbered_txid(1), 0}};
    tx.outputs = {{50, "x"}};
    b1.transactions.push_back(tx);
    b1.transactions[0].outputs[0].value = 100;
    const auto report = validate_chain(Chain({b0, b1}, ChainParams{50}));
    CHECK(report.has(rules::kDoubleSpend));
  }
  SUBCASE("value inflation") {
    Block b0 = coinbase_block(0, 50, 1);
    Block b1 = coinbase_block(1, 50, 2);
    Transaction tx;
    tx.txid = numbered_txid(3);
    tx.inputs = {{numbered_txid(1), 0}};
    tx.outputs = {{60, "x"}};
    b1.transactions.push_back(tx);
    const auto report = validate_chain(Chain({b0, b1}, ChainParams{50}));
    CHECK(report.has(rules::kValueInflation));
  }
  SUBCASE("same-block coinbase spend and later outputs") {
    Block b0 = coinbase_block(0, 50, 1);
    Transaction early;
    early.txid = numbered_txid(3);
    early.inputs = {{numbered_txid(4), 0}};
    early.outputs = {{1, "x"}};
    Transaction own;
    own.txid = numbered_txid(4);
    own.inputs = {{numbered_txid(1), 0}};
    own.outputs = {{50, "y"}};
    b0.transactions.push_back(early);
    b0.transactions.push_back(own);
    const auto report = validate_chain(Chain({b0}, ChainParams{50}));
    CHECK(report.has(rules::kSpendsLaterOutput));
    CHECK(report.has(rules::kSameBlockCoinbaseSpend));
  }
  SUBCASE("coinbase must equal subsidy plus fees") {
    const auto report = validate_chain(Chain({coinbase_block(0, 49, 1)}, ChainParams{50}));
    CHECK(report.has(rules::kCoinbaseValue));
  }
}

TEST_CASE("property: fee conservation per block on random chains") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto r = testing_support::random_chain(seed);
    REQUIRE(validate_chain(r.chain).ok());
    for (const Block& block : r.chain.blocks()) {
      Amount fees = 0;
      for (std::size_t i = 1; i < block.transactions.size(); ++i) {
        const Transaction& tx = block.transactions[i];
        Amount in = 0;
        for (const auto& op : tx.inputs) in += r.chain.output(op)->value;
        fees += in - tx.output_total();
      }
      CHECK(block.transactions[0].output_total() - r.chain.params().subsidy == fees);
    }
  }
}

TEST_CASE("property: generated chains validate cleanly") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    GeneratorSpec spec;
    spec.seed = seed;
    spec.n_blocks = 15;
    spec.txs_per_block = 5;
    spec.n_taint_sources = 3;
    spec.patterns = {Injection{InjectionKind::Splitting, 12, 0, 90, 0},
                     Injection{InjectionKind::Collection, 6, 0, 90, 0},
                     Injection{InjectionKind::PeelingChain, 0, 5, 90, 0}};
    const auto g = generate_synthetic_chain(spec);
    const auto report = validate_chain(g.chain);
    INFO("seed " << seed << " first rule " << (report.ok() ? "" : report.violations[0].rule));
    CHECK(report.ok());
  }
}
