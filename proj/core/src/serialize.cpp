#include "taintchain/serialize.hpp"

#include <array>

#include "json_util.hpp"

namespace taintchain {

namespace {

using detail::ordered_json;

ordered_json segments_json(const SegmentList& segs, const LabelTable& labels) {
  ordered_json out = ordered_json::array();
  for (const Segment& s : segs) {
    out.push_back(ordered_json{{"length", s.length}, {"label", labels.name(s.label)}});
  }
  return out;
}

ordered_json mass_json(const LabelMass& mass, const LabelTable& labels) {
  ordered_json out = ordered_json::object();
  for (const auto& [label, m] : mass) out[labels.name(label)] = m;
  return out;
}

ordered_json node_json(const ProvenanceNode& node) {
  ordered_json out;
  out["kind"] = node.kind == NodeKind::Output ? "output" : "fee";
  out["txid"] = node.outpoint.txid.hex();
  if (node.kind == NodeKind::Output) out["vout"] = node.outpoint.vout;
  out["start"] = node.start;
  out["end"] = node.end;
  if (node.terminal) {
    if (const auto* cb = std::get_if<CoinbaseOrigin>(&*node.terminal)) {
      out["terminal"] = ordered_json{{"type", "coinbase"}, {"height", cb->height}};
    } else {
      const auto& ev = std::get<TaintEvent>(*node.terminal);
      out["terminal"] =
          ordered_json{{"type", "taint"}, {"label", ev.label}, {"source_txid", ev.source_txid.hex()}};
    }
  }
  ordered_json children = ordered_json::array();
  for (const ProvenanceNode& child : node.children) children.push_back(node_json(child));
  out["children"] = std::move(children);
  return out;
}

ordered_json vertex_json(const TaintVertex& v, const LabelTable& labels) {
  return ordered_json{{"txid", v.txid.hex()},
                      {"height", v.height},
                      {"block_hash", v.block_hash},
                      {"class", to_string(v.tx_class)},
                      {"input_mass", mass_json(v.input_mass, labels)},
                      {"output_mass", mass_json(v.output_mass, labels)}};
}

ordered_json edge_json(const TaintEdge& e, const LabelTable& labels) {
  return ordered_json{{"from", ordered_json{{"txid", e.from.txid.hex()}, {"vout", e.from.vout}}},
                      {"to", ordered_json{{"txid", e.to.hex()}, {"input_index", e.input_index}}},
                      {"value", e.value},
                      {"tainted", mass_json(e.tainted, labels)},
                      {"proportion", to_string(e.proportion)}};
}

std::string dump(const ordered_json& j) { return j.dump(-1, ' ', false, ordered_json::error_handler_t::strict); }

}  // namespace

std::string serialize(const ProvenanceNode& root) { return dump(node_json(root)); }

std::string serialize(const ValidationReport& report) {
  ordered_json violations = ordered_json::array();
  for (const Violation& v : report.violations) {
    violations.push_back(
        ordered_json{{"height", v.height}, {"txid", v.txid}, {"rule", v.rule}, {"detail", v.detail}});
  }
  return dump(ordered_json{{"ok", report.ok()}, {"violations", std::move(violations)}});
}

std::string serialize(const DiffusionReport& report) {
  ordered_json policies = ordered_json::array();
  for (const PolicyDiffusion& p : report.policies) {
    ordered_json mass = ordered_json::object();
    for (const auto& [label, f] : p.mass_by_label) mass[label] = to_string(f);
    ordered_json series = ordered_json::array();
    for (const HeightPoint& h : p.series) {
      series.push_back(ordered_json{{"height", h.height},
                                    {"tainted_addresses", h.tainted_addresses},
                                    {"active_addresses", h.active_addresses},
                                    {"fraction", to_string(h.fraction())}});
    }
    policies.push_back(ordered_json{{"policy", to_string(p.policy)},
                                    {"tainted_outputs", p.tainted_outputs},
                                    {"tainted_addresses", p.tainted_addresses},
                                    {"mass_by_label", std::move(mass)},
                                    {"series", std::move(series)}});
  }
  return dump(ordered_json{{"policies", std::move(policies)}});
}

std::string serialize(std::span<const PatternMatch> matches) {
  ordered_json out = ordered_json::array();
  for (const PatternMatch& m : matches) {
    ordered_json txids = ordered_json::array();
    for (const Txid& t : m.txids) txids.push_back(t.hex());
    ordered_json j{{"kind", to_string(m.kind)},
                   {"txids", std::move(txids)},
                   {"label", m.label},
                   {"score", to_string(m.score)}};
    if (m.address) j["address"] = *m.address;
    out.push_back(std::move(j));
  }
  return dump(ordered_json{{"patterns", std::move(out)}});
}

std::string serialize(const ExpandResult& result, const LabelTable& labels) {
  ordered_json neighbors = ordered_json::array();
  for (const Neighbor& n : result.neighbors) {
    neighbors.push_back(ordered_json{{"edge", edge_json(n.edge, labels)}, {"vertex", vertex_json(n.vertex, labels)}});
  }
  return dump(ordered_json{{"neighbors", std::move(neighbors)},
                           {"collapsed", result.collapsed},
                           {"collapsed_sats", result.collapsed_sats}});
}

std::string serialize_labels(const LabelTable& labels, const ColorMap& colors) {
  ordered_json out = ordered_json::array();
  for (std::size_t id = 1; id < labels.size(); ++id) {
    const std::string& name = labels.name(static_cast<LabelId>(id));
    ordered_json j{{"label", name}};
    auto it = colors.find(name);
    j["color"] = it == colors.end() ? ordered_json(nullptr) : ordered_json(it->second);
    out.push_back(std::move(j));
  }
  return dump(ordered_json{{"labels", std::move(out)}});
}

std::string serialize_chain_summary(const Chain& chain, const TaintGraph& graph, std::size_t fan_threshold) {
  std::array<std::size_t, 5> classes{};
  for (std::size_t o = 0; o < chain.transaction_count(); ++o) {
    ++classes[static_cast<std::size_t>(classify_transaction(chain.transaction(o), fan_threshold))];
  }
  ordered_json class_counts = ordered_json::object();
  for (auto c : {TxClass::OneToOne, TxClass::ManyToTwo, TxClass::OneToMany, TxClass::ManyToMany, TxClass::Coinbase}) {
    class_counts[std::string(to_string(c))] = classes[static_cast<std::size_t>(c)];
  }
  ordered_json out{{"blocks", chain.blocks().size()}, {"transactions", chain.transaction_count()},
                   {"subsidy", chain.params().subsidy}};
  if (!chain.empty()) {
    out["tip_height"] = chain.blocks().back().height;
    out["tip_hash"] = chain.blocks().back().hash;
  }
  out["class_counts"] = std::move(class_counts);
  out["graph"] = ordered_json{{"vertices", graph.vertices().size()}, {"edges", graph.edges().size()}};
  return dump(out);
}

std::string serialize_tx_detail(const Chain& chain, const FifoAssignment& fifo, const TaintGraph& graph,
                                const Txid& txid, std::size_t fan_threshold) {
  auto loc = chain.find(txid);
  if (!loc) throw QueryError("unknown txid " + txid.hex());
  const LabelTable& labels = fifo.labels();
  const Transaction& tx = chain.transaction(loc->ordinal);
  const Block& block = chain.blocks()[loc->block];

  ordered_json inputs = ordered_json::array();
  for (const OutPoint& op : tx.inputs) {
    auto from = chain.find(op.txid);
    const SegmentList& segs = fifo.output(from->ordinal, op.vout);
    inputs.push_back(ordered_json{{"txid", op.txid.hex()},
                                  {"vout", op.vout},
                                  {"value", segs.total()},
                                  {"segments", segments_json(segs, labels)}});
  }
  ordered_json outputs = ordered_json::array();
  for (std::uint32_t v = 0; v < tx.outputs.size(); ++v) {
    ordered_json j{{"vout", v},
                   {"value", tx.outputs[v].value},
                   {"address", tx.outputs[v].address},
                   {"segments", segments_json(fifo.output(loc->ordinal, v), labels)}};
    if (auto spend = chain.spender(loc->ordinal, v)) {
      j["spent_by"] = ordered_json{{"txid", chain.transaction(spend->ordinal).txid.hex()},
                                   {"input_index", spend->input_index}};
    } else {
      j["spent_by"] = nullptr;
    }
    outputs.push_back(std::move(j));
  }
  const SegmentList& fee = fifo.fee(loc->ordinal);
  return dump(ordered_json{{"txid", tx.txid.hex()},
                           {"block", ordered_json{{"height", block.height}, {"hash", block.hash}}},
                           {"index", loc->index},
                           {"class", to_string(classify_transaction(tx, fan_threshold))},
                           {"coinbase", tx.is_coinbase},
                           {"in_graph", graph.vertex(tx.txid) != nullptr},
                           {"inputs", std::move(inputs)},
                           {"outputs", std::move(outputs)},
                           {"fee", ordered_json{{"value", fee.total()}, {"segments", segments_json(fee, labels)}}}});
}

std::string serialize_error(std::string_view message) {
  return dump(ordered_json{{"error", std::string(message)}});
}

}  // namespace taintchain
