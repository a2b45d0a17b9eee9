#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "taintchain/chain.hpp"

namespace taintchain {

// Reads the JSONL chain format, one block per line. Blank lines are skipped.
// When `subsidy` is not given it is taken from the genesis coinbase, which
// can carry no fees, falling back to kDefaultSubsidy for an empty chain.
// Throws ParseError naming the line and field on malformed input.
Chain parse_chain(std::istream& in, std::optional<Amount> subsidy = std::nullopt);
Chain parse_chain_file(const std::string& path, std::optional<Amount> subsidy = std::nullopt);

// Canonical form: fixed key order, unquoted integers, LF after every block.
void write_chain(std::ostream& out, const Chain& chain);
std::string write_chain(const Chain& chain);

}  // namespace taintchain
