#include "mahc/marl/formulation.hpp"

#include <string>

#include "mahc/errors.hpp"

namespace mahc::marl {

AgentState build_state(const WorldState& world, std::size_t agent) {
  const std::size_t n = world.n_workers();
  if (agent >= n) throw InvalidInput("build_state: agent " + std::to_string(agent) + " out of range");
  AgentState s(state_dim(n));
  Eigen::Index k = 0;
  s(k++) = world.distance_to_master(agent);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != agent) s(k++) = world.distance_to_master(j);
  }
  s.segment<2>(k) = world.workers[agent].kinematics.velocity;
  k += 2;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == agent) continue;
    s.segment<2>(k) = world.workers[j].kinematics.velocity;
    k += 2;
  }
  s.segment<2>(k) = world.master.velocity;
  return s;
}

JointState build_joint_state(const WorldState& world) {
  JointState joint;
  joint.reserve(world.n_workers());
  for (std::size_t i = 0; i < world.n_workers(); ++i) joint.push_back(build_state(world, i));
  return joint;
}

AgentState normalize_state(const AgentState& s, std::size_t n_workers, const StateScales& scales) {
  if (s.size() != state_dim(n_workers)) throw InvalidInput("normalize_state: dimension mismatch");
  AgentState out = s;
  const auto n = static_cast<Eigen::Index>(n_workers);
  out.head(n) /= scales.distance;
  out.tail(2 * n + 2) /= scales.velocity;
  return out;
}

double reward(double completion_time, const LoadAllocation& loads, std::int64_t p, const RewardConfig& cfg) {
  const std::int64_t total = loads.total();
  const bool penalized = cfg.boundary == PenaltyBoundary::Strict ? total < p : total <= p;
  return -completion_time - (penalized ? cfg.penalty : 0.0);
}

}  // namespace mahc::marl
