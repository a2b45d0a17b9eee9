#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "taintchain/chain.hpp"
#include "taintchain/taint_source.hpp"

namespace testing_support {

using namespace taintchain;

struct RandomChainParams {
  std::size_t blocks = 12;
  std::size_t max_txs_per_block = 5;
  std::size_t max_inputs = 4;
  std::size_t max_outputs = 5;
  Amount subsidy = 200;
  std::size_t sources = 3;
  unsigned coinbase_outputs = 2;
};

struct RandomChain {
  Chain chain;
  std::vector<TaintSource> sources;
};

// Small valid chains with fees, same-block spends, multi-output coinbases
// and taint sources on outputs or whole transactions. Independent of the
// library's synthetic generator.
RandomChain random_chain(std::uint64_t seed, const RandomChainParams& params = {});

}  // namespace testing_support
