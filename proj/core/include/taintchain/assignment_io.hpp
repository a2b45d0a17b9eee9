#pragma once

#include <iosfwd>
#include <string>

#include "taintchain/assignment.hpp"
#include "taintchain/chain.hpp"

namespace taintchain {

// One JSONL record per output in chain order:
//   {"txid":..,"vout":0,"policy":"fifo","segments":[[4,"RED"],[1,"CLEAN"]]}
//   {"txid":..,"vout":0,"policy":"haircut","fractions":{"RED":"3/10"}}
//   {"txid":..,"vout":0,"policy":"poison","labels":["RED","GREEN"]}
void write_assignment(std::ostream& out, const Chain& chain, const TaintAssignment& assignment);
std::string write_assignment(const Chain& chain, const TaintAssignment& assignment);

// Reads an export back against the chain it was computed on. Every output
// must appear exactly once; fee taints are rebuilt. `labels` seeds the label
// order so a round trip reproduces the original ids. Throws ParseError.
TaintAssignment parse_assignment(std::istream& in, const Chain& chain, LabelTable labels = {});

}  // namespace taintchain
