#pragma once

#include <memory>
#include <vector>

#include "config.hpp"
#include "taintchain/chain.hpp"
#include "taintchain/diffusion.hpp"
#include "taintchain/graph.hpp"
#include "taintchain/patterns.hpp"
#include "taintchain/source_index.hpp"
#include "taintchain/taint_source.hpp"

namespace taintchain::service {

// Everything the API serves, computed once and never modified.
struct Snapshot {
  Chain chain;
  std::vector<TaintSource> sources;
  LabelTable labels;
  SourceIndex index;
  FifoAssignment fifo;
  TaintGraph graph;
  DiffusionReport diffusion;
  std::vector<PatternMatch> patterns;
  ColorMap colors;
  std::size_t fan_threshold = kDefaultFanThreshold;
};

std::shared_ptr<const Snapshot> build_snapshot(Chain chain, std::vector<TaintSource> sources,
                                               const ServiceConfig& config);
// Loads the chain and taint-source files named by the config.
std::shared_ptr<const Snapshot> load_snapshot(const ServiceConfig& config);

}  // namespace taintchain::service
