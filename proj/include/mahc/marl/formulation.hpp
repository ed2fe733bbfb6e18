#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "mahc/simcore.hpp"

namespace mahc::marl {

/// Per-agent observation laid out as [d_i, d_{-i}, v_i, v_{-i}, v_master].
using AgentState = Eigen::VectorXd;
using JointState = std::vector<AgentState>;

constexpr Eigen::Index state_dim(std::size_t n_workers) { return 3 * static_cast<Eigen::Index>(n_workers) + 2; }

AgentState build_state(const WorldState& world, std::size_t agent);
JointState build_joint_state(const WorldState& world);

/// Fixed divisors applied before states reach a network.
struct StateScales {
  double distance = 100.0 * 1.4142135623730951;
  double velocity = 10.0;
};

AgentState normalize_state(const AgentState& s, std::size_t n_workers, const StateScales& scales);

enum class PenaltyBoundary {
  /// Penalize sum(l) < p: allocations meeting the decodability constraint go unpenalized.
  Strict,
  /// Penalize sum(l) <= p, the literal indicator.
  Inclusive,
};

struct RewardConfig {
  double penalty = 200.0;
  PenaltyBoundary boundary = PenaltyBoundary::Strict;
};

/// -T_j minus the infeasibility penalty; shared by every agent.
double reward(double completion_time, const LoadAllocation& loads, std::int64_t p, const RewardConfig& cfg);

}  // namespace mahc::marl
