#include "taintchain/segment_list.hpp"

#include <algorithm>

#include "taintchain/error.hpp"

namespace taintchain {

SegmentList::SegmentList(std::initializer_list<Segment> segments) {
  for (const auto& s : segments) append(s.length, s.label);
}

SegmentList SegmentList::uniform(Amount length, LabelId label) {
  SegmentList list;
  list.append(length, label);
  return list;
}

void SegmentList::append(Amount length, LabelId label) {
  if (length < 0) throw Error("negative segment length");
  if (length == 0) return;
  if (!segments_.empty() && segments_.back().label == label) {
    segments_.back().length += length;
  } else {
    segments_.push_back({length, label});
  }
  total_ += length;
}

void SegmentList::append(const SegmentList& other) {
  for (const auto& s : other.segments_) append(s.length, s.label);
}

bool SegmentList::tainted() const {
  return std::any_of(segments_.begin(), segments_.end(),
                     [](const Segment& s) { return s.label != kClean; });
}

Amount SegmentList::mass(LabelId label) const {
  Amount sum = 0;
  for (const auto& s : segments_) {
    if (s.label == label) sum += s.length;
  }
  return sum;
}

std::map<LabelId, Amount> SegmentList::masses() const {
  std::map<LabelId, Amount> out;
  for (const auto& s : segments_) {
    if (s.label != kClean) out[s.label] += s.length;
  }
  return out;
}

SegmentList SegmentList::slice(Amount start, Amount end) const {
  if (start < 0 || end > total_ || start > end) {
    throw QueryError("interval [" + std::to_string(start) + "," + std::to_string(end) +
                     ") outside [0," + std::to_string(total_) + ")");
  }
  SegmentList out;
  Amount pos = 0;
  for (const auto& s : segments_) {
    const Amount lo = std::max(pos, start);
    const Amount hi = std::min(pos + s.length, end);
    if (lo < hi) out.append(hi - lo, s.label);
    pos += s.length;
    if (pos >= end) break;
  }
  return out;
}

void SegmentQueue::push(const SegmentList& list) {
  for (const auto& s : list) push(s.length, s.label);
}

void SegmentQueue::push(Amount length, LabelId label) {
  if (length <= 0) return;
  segments_.push_back({length, label});
  remaining_ += length;
}

SegmentList SegmentQueue::take(Amount n) {
  if (n > remaining_) {
    throw Error("FIFO queue underflow: need " + std::to_string(n) + " satoshis, " +
                std::to_string(remaining_) + " queued");
  }
  SegmentList out;
  remaining_ -= n;
  while (n > 0) {
    const Segment& head = segments_[head_];
    const Amount available = head.length - head_used_;
    const Amount used = std::min(available, n);
    out.append(used, head.label);
    n -= used;
    head_used_ += used;
    if (head_used_ == head.length) {
      ++head_;
      head_used_ = 0;
    }
  }
  return out;
}

}  // namespace taintchain
