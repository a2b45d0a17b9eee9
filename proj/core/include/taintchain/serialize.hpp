#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "taintchain/assignment.hpp"
#include "taintchain/chain.hpp"
#include "taintchain/diffusion.hpp"
#include "taintchain/graph.hpp"
#include "taintchain/patterns.hpp"
#include "taintchain/svg.hpp"
#include "taintchain/trace.hpp"
#include "taintchain/validation.hpp"

// Compact JSON renderings of library results. The HTTP service sends these
// strings unchanged. Fractions are "num/den" strings, amounts are integers.
namespace taintchain {

std::string serialize(const ProvenanceNode& root);
std::string serialize(const ValidationReport& report);
std::string serialize(const DiffusionReport& report);
std::string serialize(std::span<const PatternMatch> matches);
std::string serialize(const ExpandResult& result, const LabelTable& labels);

// Every label but CLEAN, in table order, with its color when known.
std::string serialize_labels(const LabelTable& labels, const ColorMap& colors);

std::string serialize_chain_summary(const Chain& chain, const TaintGraph& graph,
                                    std::size_t fan_threshold = kDefaultFanThreshold);

// Block hint plus per-output FIFO segments. Throws QueryError for an
// unknown txid.
std::string serialize_tx_detail(const Chain& chain, const FifoAssignment& fifo, const TaintGraph& graph,
                                const Txid& txid, std::size_t fan_threshold = kDefaultFanThreshold);

std::string serialize_error(std::string_view message);

}  // namespace taintchain
