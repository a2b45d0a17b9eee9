#include "taintchain/diffusion.hpp"

#include <ostream>
#include <unordered_map>

#include <fmt/format.h>

namespace taintchain {

Fraction HeightPoint::fraction() const {
  if (active_addresses == 0) return Fraction(0);
  Fraction f(static_cast<unsigned long>(tainted_addresses), static_cast<unsigned long>(active_addresses));
  f.canonicalize();
  return f;
}

const PolicyDiffusion* DiffusionReport::find(Policy policy) const {
  for (const auto& p : policies) {
    if (p.policy == policy) return &p;
  }
  return nullptr;
}

namespace {

void add_mass(const SegmentList& t, Amount, std::map<LabelId, Fraction>& mass) {
  for (const auto& [label, m] : t.masses()) mass[label] += m;
}

void add_mass(const PoisonTaint& t, Amount value, std::map<LabelId, Fraction>& mass) {
  for (LabelId label : t) mass[label] += value;
}

void add_mass(const HaircutTaint& t, Amount value, std::map<LabelId, Fraction>& mass) {
  for (const auto& [label, f] : t) mass[label] += f * value;
}

struct AddressState {
  std::size_t utxos = 0;
  std::size_t tainted = 0;
};

template <typename A>
PolicyDiffusion diffuse(const Chain& chain, const A& assignment) {
  PolicyDiffusion out;
  out.policy = A::policy;

  std::unordered_map<std::string, AddressState> owners;
  std::size_t active = 0;
  std::size_t tainted = 0;
  const auto update = [&](const std::string& address, bool is_tainted, int delta) {
    AddressState& s = owners[address];
    const bool was_active = s.utxos > 0;
    const bool was_tainted = s.tainted > 0;
    s.utxos = static_cast<std::size_t>(static_cast<long>(s.utxos) + delta);
    if (is_tainted) s.tainted = static_cast<std::size_t>(static_cast<long>(s.tainted) + delta);
    active += (s.utxos > 0) - was_active;
    tainted += (s.tainted > 0) - was_tainted;
  };

  std::size_t ordinal = 0;
  for (const Block& block : chain.blocks()) {
    for (const Transaction& tx : block.transactions) {
      for (const OutPoint& op : tx.inputs) {
        auto loc = chain.find(op.txid);
        if (!loc) continue;
        const auto& created = chain.transaction(loc->ordinal);
        update(created.outputs.at(op.vout).address,
               is_tainted(assignment.output(loc->ordinal, op.vout)), -1);
      }
      for (std::uint32_t v = 0; v < tx.outputs.size(); ++v) {
        const bool t = is_tainted(assignment.output(ordinal, v));
        out.tainted_outputs += t;
        update(tx.outputs[v].address, t, +1);
      }
      ++ordinal;
    }
    out.series.push_back({block.height, tainted, active});
  }
  out.tainted_addresses = tainted;

  std::map<LabelId, Fraction> mass;
  for (std::size_t o = 0; o < chain.transaction_count(); ++o) {
    const auto& tx = chain.transaction(o);
    for (std::uint32_t v = 0; v < tx.outputs.size(); ++v) {
      if (!chain.spender(o, v)) add_mass(assignment.output(o, v), tx.outputs[v].value, mass);
    }
  }
  for (const auto& [label, m] : mass) {
    if (m > 0) out.mass_by_label.emplace(assignment.labels().name(label), m);
  }
  return out;
}

}  // namespace

DiffusionReport diffusion_report(const Chain& chain, std::span<const TaintAssignment> assignments) {
  DiffusionReport report;
  for (const auto& assignment : assignments) {
    report.policies.push_back(std::visit(
        [&](const auto& a) {
          if (a.chain_fingerprint() != chain.fingerprint()) {
            throw Error("assignment was computed on a different chain");
          }
          return diffuse(chain, a);
        },
        assignment));
  }
  return report;
}

void write_diffusion_csv(std::ostream& out, const DiffusionReport& report) {
  out << "height,policy,fraction\n";
  for (const auto& p : report.policies) {
    for (const auto& point : p.series) {
      out << fmt::format("{},{},{:.6f}\n", point.height, to_string(p.policy),
                         point.fraction().get_d());
    }
  }
}

}  // namespace taintchain
