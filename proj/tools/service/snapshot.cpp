#include "snapshot.hpp"

#include "taintchain/chain_io.hpp"
#include "taintchain/propagate.hpp"

namespace taintchain::service {

std::shared_ptr<const Snapshot> build_snapshot(Chain chain, std::vector<TaintSource> sources,
                                               const ServiceConfig& config) {
  auto snap = std::make_shared<Snapshot>();
  snap->chain = std::move(chain);
  snap->sources = std::move(sources);
  snap->labels = labels_from_sources(snap->sources);
  snap->index = SourceIndex(snap->chain, snap->sources, snap->labels);
  snap->fifo = fifo_propagate(snap->chain, snap->index, snap->labels);
  snap->graph = build_graph(snap->chain, snap->fifo, config.fan_threshold);

  std::vector<TaintAssignment> assignments;
  for (Policy p : config.policies) {
    switch (p) {
      case Policy::Fifo: assignments.emplace_back(snap->fifo); break;
      case Policy::Poison: assignments.emplace_back(poison_propagate(snap->chain, snap->index, snap->labels)); break;
      case Policy::Haircut: assignments.emplace_back(haircut_propagate(snap->chain, snap->index, snap->labels)); break;
    }
  }
  snap->diffusion = diffusion_report(snap->chain, assignments);
  snap->patterns = detect_patterns(snap->chain, snap->fifo, config.thresholds);

  snap->colors = colors_from_sources(snap->sources);
  for (const auto& [label, color] : config.colors) snap->colors[label] = color;
  snap->fan_threshold = config.fan_threshold;
  return snap;
}

std::shared_ptr<const Snapshot> load_snapshot(const ServiceConfig& config) {
  Chain chain = parse_chain_file(config.chain_path, config.subsidy);
  std::vector<TaintSource> sources;
  if (!config.taints_path.empty()) sources = load_taint_sources_file(config.taints_path);
  return build_snapshot(std::move(chain), std::move(sources), config);
}

}  // namespace taintchain::service
