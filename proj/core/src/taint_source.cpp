#include "taintchain/taint_source.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "json_util.hpp"
#include "taintchain/labels.hpp"

namespace taintchain {

void check_label(std::string_view label) {
  if (label.empty()) throw SourceError("taint label is empty");
  if (label.size() > kMaxLabelLength) {
    throw SourceError("taint label '" + std::string(label) + "' exceeds " +
                      std::to_string(kMaxLabelLength) + " characters");
  }
  if (label == kCleanName) throw SourceError("'CLEAN' is a reserved label");
}

std::vector<TaintSource> load_taint_sources(std::istream& in) {
  using detail::json;
  std::vector<TaintSource> sources;
  // Per txid: label of the whole-transaction entry (if any) and of each vout.
  struct Claims {
    std::optional<std::string> all;
    std::map<std::uint32_t, std::string> outputs;
  };
  std::unordered_map<Txid, Claims> claims;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    const json j = detail::parse_line(text, line);
    detail::RecordReader rd(line, "taint source");
    TaintSource src;
    src.txid = rd.txid(j, "txid");
    if (!rd.field(j, "vout").is_null()) {
      src.vout = static_cast<std::uint32_t>(rd.integer(j, "vout", 0, UINT32_MAX));
    }
    src.label = rd.string(j, "label");
    try {
      check_label(src.label);
    } catch (const SourceError& e) {
      rd.fail(e.what());
    }
    if (auto it = j.find("color"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) rd.fail("field 'color' must be a string");
      src.color = it->get<std::string>();
    }

    Claims& c = claims[src.txid];
    const auto clash = [&](const std::string& existing) {
      rd.fail(existing == src.label ? "duplicate taint source"
                                    : "conflicting taint source: output already labelled '" +
                                          existing + "'");
    };
    if (c.all) clash(*c.all);
    if (src.vout) {
      if (auto it = c.outputs.find(*src.vout); it != c.outputs.end()) clash(it->second);
      c.outputs.emplace(*src.vout, src.label);
    } else {
      if (!c.outputs.empty()) clash(c.outputs.begin()->second);
      c.all = src.label;
    }
    sources.push_back(std::move(src));
  }
  return sources;
}

std::vector<TaintSource> load_taint_sources_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open taint-source file '" + path + "'");
  return load_taint_sources(in);
}

void write_taint_sources(std::ostream& out, std::span<const TaintSource> sources) {
  for (const auto& src : sources) {
    detail::ordered_json j;
    j["txid"] = src.txid.hex();
    j["vout"] = src.vout ? detail::ordered_json(*src.vout) : detail::ordered_json(nullptr);
    j["label"] = src.label;
    if (src.color) j["color"] = *src.color;
    out << j.dump() << '\n';
  }
}

}  // namespace taintchain
