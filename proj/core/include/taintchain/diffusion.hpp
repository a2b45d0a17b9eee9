#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "taintchain/assignment.hpp"
#include "taintchain/chain.hpp"
#include "taintchain/rational.hpp"

namespace taintchain {

// Addresses stand in for wallets: the engine does no clustering.
struct HeightPoint {
  std::uint64_t height = 0;
  std::size_t tainted_addresses = 0;
  std::size_t active_addresses = 0;  // owning at least one UTXO

  Fraction fraction() const;
};

struct PolicyDiffusion {
  Policy policy = Policy::Fifo;
  std::size_t tainted_outputs = 0;    // over every output ever created
  std::size_t tainted_addresses = 0;  // at the tip
  std::map<std::string, Fraction> mass_by_label;  // live UTXO set at the tip
  std::vector<HeightPoint> series;    // one point per block, after the block
};

struct DiffusionReport {
  std::vector<PolicyDiffusion> policies;  // in the order the assignments came

  const PolicyDiffusion* find(Policy policy) const;
};

// An address is tainted at height h when a UTXO it owns after block h
// carries any taint. Throws Error if an assignment belongs to another chain.
DiffusionReport diffusion_report(const Chain& chain, std::span<const TaintAssignment> assignments);

// "height,policy,fraction" rows, fraction as a decimal.
void write_diffusion_csv(std::ostream& out, const DiffusionReport& report);

}  // namespace taintchain
