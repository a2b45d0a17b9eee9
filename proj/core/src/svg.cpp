#include "taintchain/svg.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

namespace taintchain {

namespace {

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Box {
  double x = 0;
  double y = 0;
  double height = 0;
};

}  // namespace

ColorMap colors_from_sources(std::span<const TaintSource> sources) {
  ColorMap colors;
  for (const TaintSource& s : sources) {
    if (s.color) colors.emplace(s.label, *s.color);
  }
  return colors;
}

std::string export_svg_columnar(const Chain& chain, const FifoAssignment& fifo,
                                std::uint64_t first_height, std::uint64_t last_height,
                                const ColorMap& colors, const SvgOptions& options) {
  if (fifo.chain_fingerprint() != chain.fingerprint()) {
    throw Error("assignment was computed on a different chain");
  }
  if (first_height > last_height || last_height >= chain.blocks().size()) {
    throw QueryError(fmt::format("empty or out-of-range block range {}..{}", first_height, last_height));
  }
  const LabelTable& labels = fifo.labels();

  struct Drawn {
    std::size_t ordinal;
    std::size_t column;
    // Labels by descending mass, ties by label id.
    std::vector<std::pair<LabelId, Amount>> stack;
  };
  std::vector<Drawn> drawn;
  Amount largest = 0;
  for (std::uint64_t h = first_height; h <= last_height; ++h) {
    const Block& block = chain.blocks()[h];
    const std::size_t base = chain.find(block.transactions.front().txid)->ordinal;
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
      const std::size_t o = base + i;
      std::map<LabelId, Amount> mass;
      for (const SegmentList& segs : fifo.outputs(o)) {
        for (const auto& [l, m] : segs.masses()) mass[l] += m;
      }
      for (const auto& [l, m] : fifo.fee(o).masses()) mass[l] += m;
      if (mass.empty()) continue;
      Drawn d{o, static_cast<std::size_t>(h - first_height), {mass.begin(), mass.end()}};
      std::stable_sort(d.stack.begin(), d.stack.end(),
                       [](const auto& a, const auto& b) { return a.second > b.second; });
      Amount total = 0;
      for (const auto& [l, m] : d.stack) total += m;
      largest = std::max(largest, total);
      drawn.push_back(std::move(d));
    }
  }

  const double scale = options.px_per_sat.value_or(
      largest > 0 ? options.auto_max_height / static_cast<double>(largest) : 1.0);
  auto rect_height = [&](Amount m) {
    return std::max(options.min_rect_height, static_cast<double>(m) * scale);
  };

  const std::size_t columns = last_height - first_height + 1;
  const double top = options.margin + 20.0;
  std::vector<double> column_fill(columns, top);
  std::unordered_map<std::size_t, Box> boxes;
  for (const Drawn& d : drawn) {
    double h = 0;
    for (const auto& [l, m] : d.stack) h += rect_height(m);
    double& y = column_fill[d.column];
    const double x = options.margin + static_cast<double>(d.column) * (options.column_width + options.column_gap) +
                     (options.column_width - options.rect_width) / 2.0;
    boxes.emplace(d.ordinal, Box{x, y, h});
    y += h + options.rect_gap;
  }
  const double inner_bottom = std::max(top + options.rect_gap,
                                       *std::max_element(column_fill.begin(), column_fill.end()));
  const double width = 2.0 * options.margin + static_cast<double>(columns) * options.column_width +
                       static_cast<double>(columns - 1) * options.column_gap;
  const double height = inner_bottom + options.margin;

  std::string out;
  auto it = std::back_inserter(out);
  fmt::format_to(it, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  fmt::format_to(it,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.2f}\" "
                 "height=\"{:.2f}\" viewBox=\"0 0 {:.2f} {:.2f}\">\n",
                 width, height, width, height);
  fmt::format_to(it, "<g class=\"columns\">\n");
  for (std::size_t c = 0; c < columns; ++c) {
    const Block& block = chain.blocks()[first_height + c];
    const double x = options.margin + static_cast<double>(c) * (options.column_width + options.column_gap);
    fmt::format_to(it,
                   "<rect class=\"block\" data-height=\"{}\" data-hash=\"{}\" x=\"{:.2f}\" y=\"{:.2f}\" "
                   "width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" stroke=\"#cccccc\"/>\n",
                   block.height, escape(block.hash), x, options.margin, options.column_width,
                   inner_bottom - options.margin);
    fmt::format_to(it,
                   "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
                   "text-anchor=\"middle\">block {}</text>\n",
                   x + options.column_width / 2.0, options.margin + 14.0, block.height);
  }
  fmt::format_to(it, "</g>\n<g class=\"hops\">\n");
  for (const Drawn& d : drawn) {
    const Transaction& tx = chain.transaction(d.ordinal);
    const Box& to = boxes.at(d.ordinal);
    for (const OutPoint& op : tx.inputs) {
      auto loc = chain.find(op.txid);
      if (!loc || !fifo.output(loc->ordinal, op.vout).tainted()) continue;
      auto from = boxes.find(loc->ordinal);
      if (from == boxes.end()) continue;
      const Box& f = from->second;
      fmt::format_to(it,
                     "<line data-from=\"{}:{}\" data-to=\"{}\" x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" "
                     "y2=\"{:.2f}\" stroke=\"#555555\" stroke-width=\"1\"/>\n",
                     op.txid.hex(), op.vout, tx.txid.hex(), f.x + options.rect_width, f.y + f.height / 2.0,
                     to.x, to.y + to.height / 2.0);
    }
  }
  fmt::format_to(it, "</g>\n<g class=\"transactions\">\n");
  for (const Drawn& d : drawn) {
    const std::string txid = chain.transaction(d.ordinal).txid.hex();
    const Box& box = boxes.at(d.ordinal);
    double y = box.y;
    for (const auto& [label, mass] : d.stack) {
      const std::string& name = labels.name(label);
      auto color = colors.find(name);
      const double h = rect_height(mass);
      fmt::format_to(it,
                     "<rect data-txid=\"{}\" data-label=\"{}\" data-sats=\"{}\" x=\"{:.2f}\" y=\"{:.2f}\" "
                     "width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
                     txid, escape(name), mass, box.x, y, options.rect_width, h,
                     escape(color == colors.end() ? options.fallback_color : color->second));
      y += h;
    }
  }
  fmt::format_to(it, "</g>\n</svg>\n");
  return out;
}

}  // namespace taintchain
