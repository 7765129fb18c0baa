// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <stdexcept>
#include <vector>

namespace fttr::frames {

/// Multi-queue scheduler: weighted deficit round-robin over tags below
/// `strict_from`, strict priority (ascending tag) for tags at or above it.
/// FIFO within each tag. Frames are never split; a draw stops at the first
/// DRR frame that does not fit the remaining budget.
template <class Frame>
class DeficitRoundRobin {
 public:
  using SizeFn = std::function<std::size_t(const Frame&)>;

  DeficitRoundRobin(std::size_t tags, std::size_t quantum_bytes, SizeFn size, std::size_t strict_from = SIZE_MAX)
      : queues_(tags), quantum_{quantum_bytes}, size_{std::move(size)}, strict_from_{strict_from} {
    if (quantum_ == 0) throw std::invalid_argument{"DRR quantum must be positive"};
  }

  std::size_t tag_count() const { return queues_.size(); }

  void set_weight(std::size_t tag, std::uint32_t weight) { queues_.at(tag).weight = weight == 0 ? 1 : weight; }
  std::uint32_t weight(std::size_t tag) const { return queues_.at(tag).weight; }

  void push(std::size_t tag, Frame frame) {
    Queue& q = queues_.at(tag);
    const std::size_t s = size_(frame);
    q.bytes += s;
    q.frames.push_back(std::move(frame));
    if (tag < strict_from_ && !q.listed) {
      q.listed = true;
      active_.push_back(tag);
    }
    total_bytes_ += s;
    ++total_frames_;
  }

  bool empty() const { return total_frames_ == 0; }
  std::size_t queued_frames() const { return total_frames_; }
  std::size_t queued_bytes() const { return total_bytes_; }
  std::size_t queued_bytes(std::size_t tag) const { return queues_.at(tag).bytes; }
  const std::deque<Frame>& queue(std::size_t tag) const { return queues_.at(tag).frames; }

  /// Removes and returns frames whose serialized sizes sum to at most `budget`.
  std::vector<Frame> draw(std::size_t budget) {
    std::vector<Frame> out;
    std::size_t remaining = budget;

    for (std::size_t tag = strict_from_; tag < queues_.size(); ++tag) {
      Queue& q = queues_[tag];
      while (!q.frames.empty() && size_(q.frames.front()) <= remaining) remaining -= pop(q, out);
    }

    std::size_t blocked_in_row = 0;
    while (!active_.empty() && blocked_in_row < active_.size()) {
      Queue& q = queues_[active_.front()];
      if (!turn_open_) {
        q.deficit += quantum_ * q.weight;
        turn_open_ = true;
      }
      bool blocked = false;
      while (!q.frames.empty()) {
        const std::size_t s = size_(q.frames.front());
        if (s > q.deficit) break;
        if (s > remaining) {
          blocked = true;
          break;
        }
        q.deficit -= s;
        remaining -= pop(q, out);
      }
      if (q.frames.empty()) {
        q.deficit = 0;
        q.listed = false;
        active_.pop_front();
        turn_open_ = false;
        blocked_in_row = 0;
        continue;
      }
      if (blocked && !out.empty()) break;  // budget exhausted; this turn resumes next draw
      rotate();
      blocked_in_row = blocked ? blocked_in_row + 1 : 0;
    }
    return out;
  }

 private:
  struct Queue {
    std::deque<Frame> frames;
    std::size_t bytes = 0;
    std::size_t deficit = 0;
    std::uint32_t weight = 1;
    bool listed = false;
  };

  std::size_t pop(Queue& q, std::vector<Frame>& out) {
    const std::size_t s = size_(q.frames.front());
    q.bytes -= s;
    total_bytes_ -= s;
    --total_frames_;
    out.push_back(std::move(q.frames.front()));
    q.frames.pop_front();
    return s;
  }

  void rotate() {
    active_.push_back(active_.front());
    active_.pop_front();
    turn_open_ = false;
  }

  std::vector<Queue> queues_;
  std::deque<std::size_t> active_;
  bool turn_open_ = false;
  std::size_t quantum_;
  SizeFn size_;
  std::size_t strict_from_;
  std::size_t total_bytes_ = 0;
  std::size_t total_frames_ = 0;
};

}  // namespace fttr::frames
