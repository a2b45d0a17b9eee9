#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taintchain {

struct TaintSource;

using LabelId = std::uint16_t;

inline constexpr LabelId kClean = 0;
inline constexpr std::string_view kCleanName = "CLEAN";

// Interns taint label names. Id 0 is always CLEAN; the rest follow the order
// in which labels were first seen.
class LabelTable {
 public:
  LabelTable();

  LabelId intern(std::string_view name);
  std::optional<LabelId> find(std::string_view name) const;
  const std::string& name(LabelId id) const { return names_.at(id); }

  // Including CLEAN.
  std::size_t size() const { return names_.size(); }

  bool operator==(const LabelTable& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, LabelId> ids_;
};

LabelTable labels_from_sources(std::span<const TaintSource> sources);

// Sorted set of tainted label ids; the poison policy's per-output taint.
class LabelSet {
 public:
  LabelSet() = default;
  LabelSet(std::initializer_list<LabelId> ids);

  void insert(LabelId id);
  void merge(const LabelSet& other);
  bool contains(LabelId id) const;
  bool empty() const { return ids_.empty(); }
  std::size_t size() const { return ids_.size(); }

  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }

  bool operator==(const LabelSet&) const = default;

 private:
  std::vector<LabelId> ids_;
};

}  // namespace taintchain
