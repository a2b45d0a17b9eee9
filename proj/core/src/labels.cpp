#include "taintchain/labels.hpp"

#include <algorithm>
#include <limits>

#include "taintchain/error.hpp"
#include "taintchain/taint_source.hpp"

namespace taintchain {

LabelTable::LabelTable() { intern(kCleanName); }

LabelId LabelTable::intern(std::string_view name) {
  if (auto id = find(name)) return *id;
  if (names_.size() > std::numeric_limits<LabelId>::max()) throw Error("too many taint labels");
  const auto id = static_cast<LabelId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<LabelId> LabelTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

LabelTable labels_from_sources(std::span<const TaintSource> sources) {
  LabelTable table;
  for (const auto& src : sources) table.intern(src.label);
  return table;
}

LabelSet::LabelSet(std::initializer_list<LabelId> ids) {
  for (LabelId id : ids) insert(id);
}

void LabelSet::insert(LabelId id) {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) ids_.insert(it, id);
}

void LabelSet::merge(const LabelSet& other) {
  std::vector<LabelId> merged;
  merged.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(),
                 std::back_inserter(merged));
  ids_ = std::move(merged);
}

bool LabelSet::contains(LabelId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

}  // namespace taintchain
