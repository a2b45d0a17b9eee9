#include "taintchain/assignment_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "json_util.hpp"
#include "taintchain/propagate.hpp"

namespace taintchain {

namespace {

using detail::json;
using detail::ordered_json;
using detail::RecordReader;

ordered_json taint_json(const SegmentList& t, const LabelTable& labels) {
  ordered_json segs = ordered_json::array();
  for (const auto& s : t) segs.push_back(ordered_json::array({s.length, labels.name(s.label)}));
  return segs;
}

ordered_json taint_json(const PoisonTaint& t, const LabelTable& labels) {
  ordered_json names = ordered_json::array();
  for (LabelId id : t) names.push_back(labels.name(id));
  return names;
}

ordered_json taint_json(const HaircutTaint& t, const LabelTable& labels) {
  ordered_json fractions = ordered_json::object();
  for (const auto& [id, f] : t) fractions[labels.name(id)] = to_string(f);
  return fractions;
}

constexpr std::string_view taint_key(Policy p) {
  switch (p) {
    case Policy::Fifo: return "segments";
    case Policy::Poison: return "labels";
    case Policy::Haircut: return "fractions";
  }
  return "";
}

LabelId tainted_label(LabelTable& labels, const std::string& name, const RecordReader& rd) {
  if (name.empty()) rd.fail("empty label");
  return labels.intern(name);
}

SegmentList read_taint(const json& j, LabelTable& labels, const RecordReader& rd, SegmentList*) {
  if (!j.is_array()) rd.fail("'segments' must be an array");
  SegmentList list;
  for (const json& seg : j) {
    if (!seg.is_array() || seg.size() != 2 || !seg[0].is_number_integer() || !seg[1].is_string()) {
      rd.fail("segment must be [length, label]");
    }
    const auto length = seg[0].get<std::int64_t>();
    if (length < 1) rd.fail("segment length must be >= 1");
    const auto& name = seg[1].get_ref<const std::string&>();
    list.append(length, name == kCleanName ? kClean : tainted_label(labels, name, rd));
  }
  return list;
}

PoisonTaint read_taint(const json& j, LabelTable& labels, const RecordReader& rd, PoisonTaint*) {
  if (!j.is_array()) rd.fail("'labels' must be an array");
  PoisonTaint set;
  for (const json& name : j) {
    if (!name.is_string() || name.get<std::string>() == kCleanName) rd.fail("invalid label");
    set.insert(tainted_label(labels, name.get<std::string>(), rd));
  }
  return set;
}

HaircutTaint read_taint(const json& j, LabelTable& labels, const RecordReader& rd, HaircutTaint*) {
  if (!j.is_object()) rd.fail("'fractions' must be an object");
  HaircutTaint map;
  for (const auto& [name, value] : j.items()) {
    if (!value.is_string() || name == kCleanName) rd.fail("invalid fraction entry '" + name + "'");
    Fraction f;
    try {
      f = parse_fraction(value.get<std::string>());
    } catch (const Error& e) {
      rd.fail(e.what());
    }
    if (f <= 0 || f > 1) rd.fail("fraction for '" + name + "' outside (0, 1]");
    map.emplace(tainted_label(labels, name, rd), f);
  }
  return map;
}

template <typename A>
TaintAssignment parse_records(const std::vector<std::pair<std::size_t, json>>& records,
                              const Chain& chain, LabelTable labels, Policy policy) {
  using Taint = typename A::taint_type;
  LabelTable table = std::move(labels);
  std::vector<std::vector<bool>> seen(chain.transaction_count());
  for (std::size_t o = 0; o < chain.transaction_count(); ++o) {
    seen[o].resize(chain.transaction(o).outputs.size());
  }
  std::vector<std::pair<std::pair<std::size_t, std::uint32_t>, Taint>> parsed;
  for (const auto& [line, j] : records) {
    RecordReader rd(line, "assignment");
    const Txid txid = rd.txid(j, "txid");
    const auto vout = static_cast<std::uint32_t>(rd.integer(j, "vout", 0, UINT32_MAX));
    if (parse_policy(rd.string(j, "policy")) != policy) rd.fail("mixed policies in one export");
    auto loc = chain.find(txid);
    if (!loc || vout >= seen[loc->ordinal].size()) {
      rd.fail("unknown output " + txid.hex() + ":" + std::to_string(vout));
    }
    if (seen[loc->ordinal][vout]) rd.fail("duplicate record for " + txid.hex() + ":" + std::to_string(vout));
    seen[loc->ordinal][vout] = true;
    Taint taint = read_taint(rd.field(j, taint_key(policy)), table, rd, static_cast<Taint*>(nullptr));
    if constexpr (std::is_same_v<Taint, SegmentList>) {
      if (taint.total() != chain.transaction(loc->ordinal).outputs[vout].value) {
        rd.fail("segments do not total the output value");
      }
    }
    parsed.push_back({{loc->ordinal, vout}, std::move(taint)});
  }
  for (std::size_t o = 0; o < seen.size(); ++o) {
    for (std::size_t v = 0; v < seen[o].size(); ++v) {
      if (!seen[o][v]) {
        throw ParseError(records.empty() ? 0 : records.back().first,
                         "export is missing output " + chain.transaction(o).txid.hex() + ":" +
                             std::to_string(v));
      }
    }
  }
  A complete(chain, table);
  for (auto& [key, taint] : parsed) complete.output(key.first, key.second) = std::move(taint);
  rebuild_fees(chain, complete);
  return complete;
}

}  // namespace

void write_assignment(std::ostream& out, const Chain& chain, const TaintAssignment& assignment) {
  std::visit(
      [&](const auto& a) {
        const auto policy = std::decay_t<decltype(a)>::policy;
        for (std::size_t o = 0; o < chain.transaction_count(); ++o) {
          const auto& tx = chain.transaction(o);
          const auto taints = a.outputs(o);
          for (std::uint32_t v = 0; v < taints.size(); ++v) {
            ordered_json j;
            j["txid"] = tx.txid.hex();
            j["vout"] = v;
            j["policy"] = to_string(policy);
            j[std::string(taint_key(policy))] = taint_json(taints[v], a.labels());
            out << j.dump() << '\n';
          }
        }
      },
      assignment);
}

std::string write_assignment(const Chain& chain, const TaintAssignment& assignment) {
  std::ostringstream out;
  write_assignment(out, chain, assignment);
  return out.str();
}

TaintAssignment parse_assignment(std::istream& in, const Chain& chain, LabelTable labels) {
  std::vector<std::pair<std::size_t, json>> records;
  std::optional<Policy> policy;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.empty()) continue;
    json j = detail::parse_line(text, line);
    if (!policy) {
      RecordReader rd(line, "assignment");
      policy = parse_policy(rd.string(j, "policy"));
      if (!policy) rd.fail("unknown policy");
    }
    records.emplace_back(line, std::move(j));
  }
  switch (policy.value_or(Policy::Fifo)) {
    case Policy::Fifo: return parse_records<FifoAssignment>(records, chain, std::move(labels), Policy::Fifo);
    case Policy::Poison:
      return parse_records<PoisonAssignment>(records, chain, std::move(labels), Policy::Poison);
    case Policy::Haircut:
      return parse_records<HaircutAssignment>(records, chain, std::move(labels), Policy::Haircut);
  }
  throw Error("unreachable");
}

}  // namespace taintchain
