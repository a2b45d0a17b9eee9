#include <random>

#include <benchmark/benchmark.h>

#include "taintchain/generator.hpp"
#include "taintchain/graph.hpp"
#include "taintchain/propagate.hpp"
#include "taintchain/segment_list.hpp"
#include "taintchain/source_index.hpp"
#include "taintchain/trace.hpp"

using namespace taintchain;

namespace {

GeneratedChain bench_chain(std::size_t blocks) {
  GeneratorSpec spec;
  spec.seed = 3;
  spec.n_blocks = blocks;
  spec.txs_per_block = 20;
  spec.n_taint_sources = 3;
  spec.patterns = {Injection{InjectionKind::Mix, 8, 0, 90, 4}, Injection{InjectionKind::Splitting, 20, 0, 90, 0},
                   Injection{InjectionKind::PeelingChain, 0, 10, 90, 0}};
  return generate_synthetic_chain(spec);
}

void BM_FifoPropagate(benchmark::State& state) {
  const auto g = bench_chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fifo_propagate(g.chain, g.sources));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.chain.transaction_count()));
}
BENCHMARK(BM_FifoPropagate)->Arg(100)->Arg(400);

void BM_PoisonPropagate(benchmark::State& state) {
  const auto g = bench_chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(poison_propagate(g.chain, g.sources));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.chain.transaction_count()));
}
BENCHMARK(BM_PoisonPropagate)->Arg(100)->Arg(400);

void BM_HaircutPropagate(benchmark::State& state) {
  const auto g = bench_chain(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(haircut_propagate(g.chain, g.sources));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.chain.transaction_count()));
}
BENCHMARK(BM_HaircutPropagate)->Arg(50)->Arg(100);

void BM_TraceBack(benchmark::State& state) {
  const auto g = bench_chain(200);
  const auto fifo = fifo_propagate(g.chain, g.sources);
  LabelTable labels = fifo.labels();
  const SourceIndex index(g.chain, g.sources, labels);
  std::vector<OutPoint> tainted;
  for (std::size_t o = 0; o < g.chain.transaction_count(); ++o) {
    for (std::uint32_t v = 0; v < fifo.outputs(o).size(); ++v) {
      if (fifo.output(o, v).tainted()) tainted.push_back({g.chain.transaction(o).txid, v});
    }
  }
  std::size_t k = 0;
  for (auto _ : state) {
    const OutPoint& op = tainted[k++ % tainted.size()];
    benchmark::DoNotOptimize(trace_back(g.chain, index, labels, op, 0, g.chain.output(op)->value));
  }
}
BENCHMARK(BM_TraceBack);

void BM_BuildGraph(benchmark::State& state) {
  const auto g = bench_chain(200);
  const auto fifo = fifo_propagate(g.chain, g.sources);
  for (auto _ : state) benchmark::DoNotOptimize(build_graph(g.chain, fifo));
}
BENCHMARK(BM_BuildGraph);

void BM_SegmentQueue(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::vector<SegmentList> lists;
  Amount total = 0;
  for (int i = 0; i < state.range(0); ++i) {
    SegmentList list;
    for (int s = 0; s < 4; ++s) list.append(1 + static_cast<Amount>(rng() % 1000), static_cast<LabelId>(rng() % 4));
    total += list.total();
    lists.push_back(std::move(list));
  }
  for (auto _ : state) {
    SegmentQueue queue;
    for (const auto& list : lists) queue.push(list);
    Amount left = total;
    while (left > 0) {
      const Amount n = std::min<Amount>(left, 1 + static_cast<Amount>(rng() % 3000));
      benchmark::DoNotOptimize(queue.take(n));
      left -= n;
    }
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SegmentQueue)->Arg(64)->Arg(4096);

}  // namespace
BENCHMARK_MAIN();
