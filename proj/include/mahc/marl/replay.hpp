#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <vector>

#include "mahc/rng.hpp"

namespace mahc::marl {

/// One step of experience with normalized joint states flattened agent by agent.
struct Transition {
  Eigen::VectorXd state;
  Eigen::VectorXd actions;  // N values in [0, 1]
  Eigen::VectorXd rewards;  // N values
  Eigen::VectorXd next_state;
};

/// Column-per-sample view of a sampled mini-batch.
struct TransitionBatch {
  Eigen::MatrixXd states;
  Eigen::MatrixXd actions;
  Eigen::MatrixXd rewards;
  Eigen::MatrixXd next_states;

  Eigen::Index size() const { return states.cols(); }
};

TransitionBatch stack(const std::vector<Transition>& transitions);

class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);

  void push(Transition t);
  /// Uniform with replacement over stored entries.
  TransitionBatch sample(std::size_t n, RngStream& rng) const;

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return entries_.at(i); }

 private:
  std::size_t capacity_;
  std::size_t cursor_ = 0;
  std::vector<Transition> entries_;
};

}  // namespace mahc::marl
