#pragma once

#include <initializer_list>
#include <map>
#include <vector>

#include "taintchain/chain.hpp"
#include "taintchain/labels.hpp"

namespace taintchain {

struct Segment {
  Amount length = 0;
  LabelId label = kClean;

  bool operator==(const Segment&) const = default;
};

// Run-length provenance of one output's satoshis, in satoshi order. Always
// normalized: every segment has length >= 1 and neighbours differ in label.
class SegmentList {
 public:
  SegmentList() = default;
  SegmentList(std::initializer_list<Segment> segments);

  static SegmentList uniform(Amount length, LabelId label);

  // Zero-length appends are ignored; negative lengths throw.
  void append(Amount length, LabelId label);
  void append(const SegmentList& other);

  Amount total() const { return total_; }
  bool empty() const { return segments_.empty(); }
  bool tainted() const;
  Amount mass(LabelId label) const;
  Amount tainted_mass() const { return total_ - mass(kClean); }
  // Tainted labels only.
  std::map<LabelId, Amount> masses() const;

  // Satoshis in [start, end). Throws QueryError when out of bounds.
  SegmentList slice(Amount start, Amount end) const;

  const std::vector<Segment>& segments() const { return segments_; }
  auto begin() const { return segments_.begin(); }
  auto end() const { return segments_.end(); }

  bool operator==(const SegmentList& other) const { return segments_ == other.segments_; }

 private:
  std::vector<Segment> segments_;
  Amount total_ = 0;
};

// FIFO queue of satoshis. Lists pushed at the back, satoshis taken from the
// front.
class SegmentQueue {
 public:
  void push(const SegmentList& list);
  void push(Amount length, LabelId label);

  // Throws Error if fewer than `n` satoshis remain.
  SegmentList take(Amount n);
  SegmentList drain() { return take(remaining_); }

  Amount remaining() const { return remaining_; }

 private:
  std::vector<Segment> segments_;
  std::size_t head_ = 0;
  Amount head_used_ = 0;
  Amount remaining_ = 0;
};

}  // namespace taintchain
