#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "taintchain/assignment.hpp"
#include "taintchain/chain.hpp"
#include "taintchain/taint_source.hpp"

namespace taintchain {

struct SvgOptions {
  // Unset: scale so the largest transaction is `auto_max_height` pixels tall.
  std::optional<double> px_per_sat;
  double auto_max_height = 200.0;
  double min_rect_height = 2.0;
  double column_width = 120.0;
  double column_gap = 60.0;
  double rect_width = 80.0;
  double rect_gap = 12.0;
  double margin = 20.0;
  std::string fallback_color = "#7f7f7f";
};

// Label name -> CSS color.
using ColorMap = std::map<std::string, std::string>;

// First color given for each label.
ColorMap colors_from_sources(std::span<const TaintSource> sources);

// Static view of blocks [first_height, last_height]: one column per block,
// one stack of per-label rectangles per tainted transaction, lines for
// tainted hops between drawn transactions. Throws QueryError for an empty
// or out-of-chain range.
std::string export_svg_columnar(const Chain& chain, const FifoAssignment& fifo,
                                std::uint64_t first_height, std::uint64_t last_height,
                                const ColorMap& colors, const SvgOptions& options = {});

}  // namespace taintchain
