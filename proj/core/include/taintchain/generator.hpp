#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "taintchain/chain.hpp"
#include "taintchain/taint_source.hpp"

namespace taintchain {

enum class InjectionKind { Splitting, Collection, PeelingChain, Mix };

std::string_view to_string(InjectionKind kind);
std::optional<InjectionKind> parse_injection_kind(std::string_view text);

// One laundering pattern to plant. Which fields matter depends on `kind`:
//   Splitting     fan outputs from one tainted input
//   Collection    fan tainted payments converging on one address
//   PeelingChain  length two-output hops, change_percent kept as change
//   Mix           fan pieces shuffled through `rounds` many-to-many rounds
struct Injection {
  InjectionKind kind = InjectionKind::Splitting;
  std::size_t fan = 0;
  std::size_t length = 0;
  unsigned change_percent = 90;
  std::size_t rounds = 0;
};

// Relative weights of background transaction shapes.
struct BackgroundMix {
  unsigned many_to_two = 70;
  unsigned one_to_one = 15;
  unsigned many_to_many = 10;
  unsigned one_to_many = 5;
};

struct GeneratorSpec {
  std::uint64_t seed = 0;
  std::size_t n_blocks = 10;
  std::size_t txs_per_block = 4;
  std::size_t n_taint_sources = 1;
  Amount subsidy = kDefaultSubsidy;
  std::size_t fan_threshold = kDefaultFanThreshold;
  BackgroundMix mix;
  std::vector<Injection> patterns;
};

// Ground truth for one planted pattern. `txids` are the transactions a
// detector should report (in path order for peeling chains); funding
// transactions that set the pattern up go in `support_txids`.
struct PatternRecord {
  InjectionKind kind = InjectionKind::Splitting;
  std::string label;
  std::vector<Txid> txids;
  std::vector<Txid> support_txids;
  std::optional<std::string> address;  // collection target
  std::size_t size = 0;                // fan, fan-in or chain length
};

struct PatternLedger {
  std::vector<PatternRecord> records;
};

struct GeneratedChain {
  Chain chain;
  std::vector<TaintSource> sources;
  PatternLedger ledger;
};

// Deterministic: equal specs give byte-identical chain files. Background
// transactions never form the planted shapes: two-output splits keep the
// larger side at or below 70%, fan-outs stay under 9 outputs, and every
// output gets a fresh address. Pattern i is funded by taint source i.
// Throws GeneratorError when the spec asks for more value or more sources
// than the chain can provide.
GeneratedChain generate_synthetic_chain(const GeneratorSpec& spec);

// Single JSON document mirroring GeneratorSpec; patterns are
// {"kind": "Splitting", "params": {"fan": 50}}.
GeneratorSpec parse_generator_spec(std::istream& in);
GeneratorSpec parse_generator_spec_file(const std::string& path);

void write_pattern_ledger(std::ostream& out, const PatternLedger& ledger);

}  // namespace taintchain
