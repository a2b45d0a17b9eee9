#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "config.hpp"
#include "http_server.hpp"
#include "taintchain/assignment_io.hpp"
#include "taintchain/chain_io.hpp"
#include "taintchain/diffusion.hpp"
#include "taintchain/generator.hpp"
#include "taintchain/patterns.hpp"
#include "taintchain/propagate.hpp"
#include "taintchain/serialize.hpp"
#include "taintchain/svg.hpp"
#include "taintchain/trace.hpp"
#include "taintchain/validation.hpp"

namespace taintchain::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string chain;
  std::string taints;
  std::optional<Amount> subsidy;
  std::string out;

  std::string spec;
  std::optional<std::uint64_t> seed;
  std::string taints_out;
  std::string ledger_out;

  bool json = false;
  std::string policy;
  std::string format = "json";

  std::string txid;
  std::uint32_t vout = 0;
  std::optional<Amount> from;
  std::optional<Amount> to;

  std::optional<std::size_t> min_fan;
  std::optional<Amount> min_tainted_sats;
  std::optional<std::size_t> min_converging;
  std::optional<std::uint64_t> window_blocks;
  std::optional<std::size_t> min_length;
  std::string peel_fraction;
  std::optional<std::size_t> fan_threshold;

  std::optional<std::uint64_t> first_height;
  std::optional<std::uint64_t> last_height;
  std::optional<double> px_per_sat;

  std::string host;
  std::optional<int> port;
};

// Flags win over the config file, which wins over built-in defaults.
service::ServiceConfig resolve(const Options& o) {
  service::ServiceConfig config;
  if (auto path = service::config_path(o.config)) config = service::load_config(*path);
  if (!o.chain.empty()) config.chain_path = o.chain;
  if (!o.taints.empty()) config.taints_path = o.taints;
  if (o.subsidy) config.subsidy = o.subsidy;
  if (!o.host.empty()) config.host = o.host;
  if (o.port) config.port = *o.port;
  if (o.fan_threshold) config.fan_threshold = *o.fan_threshold;
  DetectorThresholds& t = config.thresholds;
  if (o.min_fan) t.splitting.min_fan = *o.min_fan;
  if (o.min_tainted_sats) t.splitting.min_tainted_sats = *o.min_tainted_sats;
  if (o.min_converging) t.collection.min_converging = *o.min_converging;
  if (o.window_blocks) t.collection.window_blocks = *o.window_blocks;
  if (o.min_length) t.peeling.min_length = *o.min_length;
  if (!o.peel_fraction.empty()) t.peeling.peel_fraction = parse_fraction(o.peel_fraction);
  if (config.chain_path.empty()) throw UsageError("--chain is required (or set \"chain\" in the config file)");
  return config;
}

Chain load_chain(const service::ServiceConfig& config) { return parse_chain_file(config.chain_path, config.subsidy); }

std::vector<TaintSource> load_sources(const service::ServiceConfig& config) {
  if (config.taints_path.empty()) throw UsageError("--taints is required (or set \"taints\" in the config file)");
  return load_taint_sources_file(config.taints_path);
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error("cannot write '" + path + "'");
  file << content;
  if (!file) throw Error("failed writing '" + path + "'");
}

template <typename Fn>
std::string capture(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

void add_input_flags(CLI::App* cmd, Options& o, bool with_taints) {
  cmd->add_option("--chain", o.chain, "Chain file (JSONL)");
  if (with_taints) cmd->add_option("--taints", o.taints, "Taint-source file (JSONL)");
  cmd->add_option("--subsidy", o.subsidy, "Block subsidy in satoshis (default: inferred from block 0)");
}

int cmd_generate(const Options& o, std::ostream& out) {
  GeneratorSpec spec = parse_generator_spec_file(o.spec);
  if (o.seed) spec.seed = *o.seed;
  GeneratedChain g = generate_synthetic_chain(spec);
  emit(o.out, write_chain(g.chain), out);
  if (!o.taints_out.empty()) emit(o.taints_out, capture([&](std::ostream& s) { write_taint_sources(s, g.sources); }), out);
  if (!o.ledger_out.empty()) emit(o.ledger_out, capture([&](std::ostream& s) { write_pattern_ledger(s, g.ledger); }), out);
  return 0;
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const auto config = resolve(o);
  const ValidationReport report = validate_chain(load_chain(config));
  if (o.json) {
    out << serialize(report) << '\n';
  } else {
    out << report.violations.size() << " violations\n";
    for (const Violation& v : report.violations) {
      out << fmt::format("height {} {}{}: {}\n", v.height, v.txid.empty() ? "" : v.txid + " ", v.rule, v.detail);
    }
  }
  if (!report.ok()) {
    err << "error: chain is invalid\n";
    return 1;
  }
  return 0;
}

int cmd_propagate(const Options& o, std::ostream& out) {
  const auto config = resolve(o);
  const auto policy = parse_policy(o.policy);
  if (!policy) throw UsageError("--policy must be fifo, poison or haircut");
  const Chain chain = load_chain(config);
  const auto sources = load_sources(config);
  emit(o.out, write_assignment(chain, propagate(chain, sources, *policy)), out);
  return 0;
}

int cmd_trace_back(const Options& o, std::ostream& out) {
  const auto config = resolve(o);
  const Chain chain = load_chain(config);
  const auto sources = load_sources(config);
  const auto txid = Txid::parse(o.txid);
  if (!txid) throw UsageError("--txid must be 64 hex digits");
  const TxOutput* output = chain.output(OutPoint{*txid, o.vout});
  if (!output) throw QueryError(fmt::format("unknown output {}:{}", o.txid, o.vout));
  const Amount from = o.from.value_or(0);
  const Amount to = o.to.value_or(output->value);
  emit(o.out, serialize(trace_back(chain, sources, OutPoint{*txid, o.vout}, from, to)) + "\n", out);
  return 0;
}

int cmd_diffusion(const Options& o, std::ostream& out) {
  auto config = resolve(o);
  if (!o.policy.empty()) config.policies = service::parse_policy_selection(o.policy);
  const Chain chain = load_chain(config);
  const auto sources = load_sources(config);
  std::vector<TaintAssignment> assignments;
  for (Policy p : config.policies) assignments.push_back(propagate(chain, sources, p));
  const DiffusionReport report = diffusion_report(chain, assignments);
  if (o.format == "csv") {
    emit(o.out, capture([&](std::ostream& s) { write_diffusion_csv(s, report); }), out);
  } else {
    emit(o.out, serialize(report) + "\n", out);
  }
  return 0;
}

int cmd_patterns(const Options& o, std::ostream& out) {
  const auto config = resolve(o);
  const Chain chain = load_chain(config);
  const auto sources = load_sources(config);
  const auto matches = detect_patterns(chain, fifo_propagate(chain, sources), config.thresholds);
  emit(o.out, serialize(std::span<const PatternMatch>(matches)) + "\n", out);
  return 0;
}

int cmd_export_svg(const Options& o, std::ostream& out) {
  const auto config = resolve(o);
  const Chain chain = load_chain(config);
  const auto sources = load_sources(config);
  if (chain.empty()) throw QueryError("empty chain");
  ColorMap colors = colors_from_sources(sources);
  for (const auto& [label, color] : config.colors) colors[label] = color;
  SvgOptions options;
  options.px_per_sat = o.px_per_sat;
  const std::uint64_t first = o.first_height.value_or(0);
  const std::uint64_t last = o.last_height.value_or(chain.blocks().size() - 1);
  emit(o.out, export_svg_columnar(chain, fifo_propagate(chain, sources), first, last, colors, options), out);
  return 0;
}

int cmd_serve(const Options& o, std::ostream& err) {
  auto config = resolve(o);
  if (!o.policy.empty()) config.policies = service::parse_policy_selection(o.policy);
  service::serve(config, err);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app("Satoshi-level taint tracking for UTXO chains", "taintchain");
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON config file (default: $TAINTCHAIN_CONFIG)");

  auto* generate = app.add_subcommand("generate", "Generate a synthetic chain with planted patterns");
  generate->add_option("--spec", o.spec, "Generator spec (JSON)")->required();
  generate->add_option("--seed", o.seed, "Override the spec's seed");
  generate->add_option("--out", o.out, "Chain output (default: stdout)");
  generate->add_option("--taints-out", o.taints_out, "Write the taint sources here");
  generate->add_option("--ledger", o.ledger_out, "Write the planted-pattern ledger here");

  auto* validate = app.add_subcommand("validate", "Check chain consistency");
  add_input_flags(validate, o, false);
  validate->add_flag("--json", o.json, "Print the report as JSON");

  auto* propagate_cmd = app.add_subcommand("propagate", "Propagate taint under one policy");
  add_input_flags(propagate_cmd, o, true);
  propagate_cmd->add_option("--policy", o.policy, "fifo, poison or haircut")->required();
  propagate_cmd->add_option("--out", o.out, "Assignment output (default: stdout)");

  auto* trace = app.add_subcommand("trace-back", "Trace a satoshi interval back to its origins (FIFO)");
  add_input_flags(trace, o, true);
  trace->add_option("--txid", o.txid, "Transaction id")->required();
  trace->add_option("--vout", o.vout, "Output index")->required();
  trace->add_option("--from", o.from, "First satoshi offset (default 0)");
  trace->add_option("--to", o.to, "End offset, exclusive (default: output value)");
  trace->add_option("--out", o.out, "Output file (default: stdout)");

  auto* diffusion = app.add_subcommand("diffusion", "Tainted-address fraction per block and policy");
  add_input_flags(diffusion, o, true);
  diffusion->add_option("--policy", o.policy, "fifo, poison, haircut or all (default all)");
  diffusion->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  diffusion->add_option("--out", o.out, "Output file (default: stdout)");

  auto* patterns = app.add_subcommand("patterns", "Detect splitting, collection and peeling chains");
  add_input_flags(patterns, o, true);
  patterns->add_option("--min-fan", o.min_fan, "Splitting: minimum tainted outputs");
  patterns->add_option("--min-tainted-sats", o.min_tainted_sats, "Splitting: minimum tainted input");
  patterns->add_option("--min-converging", o.min_converging, "Collection: minimum paying transactions");
  patterns->add_option("--window-blocks", o.window_blocks, "Collection: window length in blocks");
  patterns->add_option("--min-length", o.min_length, "Peeling: minimum chain length");
  patterns->add_option("--peel-fraction", o.peel_fraction, "Peeling: minimum change share, as n/d");
  patterns->add_option("--out", o.out, "Output file (default: stdout)");

  auto* svg = app.add_subcommand("export-svg", "Render blocks as columns of tainted transactions");
  add_input_flags(svg, o, true);
  svg->add_option("--from", o.first_height, "First block height (default 0)");
  svg->add_option("--to", o.last_height, "Last block height, inclusive (default: tip)");
  svg->add_option("--px-per-sat", o.px_per_sat, "Rectangle scale (default: fit the largest to 200px)");
  svg->add_option("--out", o.out, "SVG output (default: stdout)");

  auto* serve = app.add_subcommand("serve", "Serve the taint graph over HTTP");
  add_input_flags(serve, o, true);
  serve->add_option("--host", o.host, "Bind address (default 127.0.0.1)");
  serve->add_option("--port", o.port, "Port (default 8080)");
  serve->add_option("--policy", o.policy, "Policies for /v1/diffusion: fifo, poison, haircut or all");

  for (auto* cmd : {validate, patterns}) cmd->add_option("--fan-threshold", o.fan_threshold, "Outputs that make a fan-out");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) return cmd_generate(o, out);
    if (validate->parsed()) return cmd_validate(o, out, err);
    if (propagate_cmd->parsed()) return cmd_propagate(o, out);
    if (trace->parsed()) return cmd_trace_back(o, out);
    if (diffusion->parsed()) return cmd_diffusion(o, out);
    if (patterns->parsed()) return cmd_patterns(o, out);
    if (svg->parsed()) return cmd_export_svg(o, out);
    if (serve->parsed()) return cmd_serve(o, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace taintchain::cli
