#include "mahc/marl/replay.hpp"

#include "mahc/errors.hpp"

namespace mahc::marl {

TransitionBatch stack(const std::vector<Transition>& transitions) {
  if (transitions.empty()) throw InvalidInput("stack: no transitions");
  const auto n = static_cast<Eigen::Index>(transitions.size());
  const auto& first = transitions.front();
  TransitionBatch b;
  b.states.resize(first.state.size(), n);
  b.actions.resize(first.actions.size(), n);
  b.rewards.resize(first.rewards.size(), n);
  b.next_states.resize(first.next_state.size(), n);
  for (Eigen::Index c = 0; c < n; ++c) {
    const auto& t = transitions[static_cast<std::size_t>(c)];
    b.states.col(c) = t.state;
    b.actions.col(c) = t.actions;
    b.rewards.col(c) = t.rewards;
    b.next_states.col(c) = t.next_state;
  }
  return b;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw InvalidInput("ReplayBuffer: capacity must be positive");
  entries_.reserve(std::min<std::size_t>(capacity, 4096));
}

void ReplayBuffer::push(Transition t) {
  if (entries_.size() < capacity_) {
    entries_.push_back(std::move(t));
  } else {
    entries_[cursor_] = std::move(t);
  }
  cursor_ = (cursor_ + 1) % capacity_;
}

TransitionBatch ReplayBuffer::sample(std::size_t n, RngStream& rng) const {
  if (entries_.empty()) throw EmptyBuffer("ReplayBuffer::sample: buffer is empty");
  if (n == 0) throw InvalidInput("ReplayBuffer::sample: batch size must be positive");
  const auto& first = entries_.front();
  const auto cols = static_cast<Eigen::Index>(n);
  TransitionBatch b;
  b.states.resize(first.state.size(), cols);
  b.actions.resize(first.actions.size(), cols);
  b.rewards.resize(first.rewards.size(), cols);
  b.next_states.resize(first.next_state.size(), cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    const auto& t = entries_[sample_index(entries_.size(), rng)];
    b.states.col(c) = t.state;
    b.actions.col(c) = t.actions;
    b.rewards.col(c) = t.rewards;
    b.next_states.col(c) = t.next_state;
  }
  return b;
}

}  // namespace mahc::marl
