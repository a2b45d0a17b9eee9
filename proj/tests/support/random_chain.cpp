#include "random_chain.hpp"

#include <algorithm>
#include <set>

#include "builder.hpp"

namespace testing_support {

RandomChain random_chain(std::uint64_t seed, const RandomChainParams& params) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

  ChainBuilder b(params.subsidy);
  std::vector<OutPoint> pool;
  std::vector<Txid> spendable_txs;  // candidates for sources
  for (std::size_t h = 0; h < params.blocks; ++h) {
    const Txid cb = b.open_block(params.coinbase_outputs);
    const std::size_t n = h == 0 ? 0 : uniform(0, params.max_txs_per_block);
    std::vector<OutPoint> fresh;
    for (std::size_t t = 0; t < n && !pool.empty(); ++t) {
      std::shuffle(pool.begin(), pool.end(), rng);
      const std::size_t k = uniform(1, std::min(params.max_inputs, pool.size()));
      std::vector<OutPoint> inputs(pool.end() - static_cast<std::ptrdiff_t>(k), pool.end());
      pool.resize(pool.size() - k);
      Amount in = 0;
      for (const auto& op : inputs) in += b.value(op);
      const Amount fee = uniform(0, 3) == 0 ? 0 : static_cast<Amount>(uniform(0, static_cast<std::size_t>(std::min<Amount>(3, in / 10))));
      const Amount spendable = in - fee;
      const std::size_t outs = uniform(1, static_cast<std::size_t>(std::min<Amount>(static_cast<Amount>(params.max_outputs), spendable)));
      std::vector<Amount> values(outs, 1);
      Amount left = spendable - static_cast<Amount>(outs);
      for (std::size_t i = 0; i + 1 < outs && left > 0; ++i) {
        const Amount extra = static_cast<Amount>(uniform(0, static_cast<std::size_t>(left)));
        values[i] += extra;
        left -= extra;
      }
      values.back() += left;
      const Txid txid = b.add(inputs, values);
      spendable_txs.push_back(txid);
      for (std::uint32_t v = 0; v < outs; ++v) {
        // Half the outputs are spendable within the same block.
        (uniform(0, 1) ? pool : fresh).push_back(OutPoint{txid, v});
      }
    }
    pool.insert(pool.end(), fresh.begin(), fresh.end());
    for (std::uint32_t v = 0; v < params.coinbase_outputs; ++v) pool.push_back(OutPoint{cb, v});
    if (h < params.blocks / 2) spendable_txs.push_back(cb);
  }
  RandomChain r{b.build(), {}};

  static const char* kLabels[] = {"RED", "BLUE", "GREEN", "ORANGE"};
  std::shuffle(spendable_txs.begin(), spendable_txs.end(), rng);
  for (std::size_t i = 0; i < params.sources && i < spendable_txs.size(); ++i) {
    TaintSource s;
    s.txid = spendable_txs[i];
    const auto outs = r.chain.transaction(r.chain.find(s.txid)->ordinal).outputs.size();
    if (uniform(0, 3) != 0) s.vout = static_cast<std::uint32_t>(uniform(0, outs - 1));
    s.label = kLabels[i % 4];
    r.sources.push_back(std::move(s));
  }
  return r;
}

}  // namespace testing_support
