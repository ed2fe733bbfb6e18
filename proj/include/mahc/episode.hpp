#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mahc/marl/formulation.hpp"
#include "mahc/rng.hpp"
#include "mahc/scenario.hpp"
#include "mahc/simcore.hpp"

namespace mahc {

struct AllocationRequest {
  const WorldState& world;
  const marl::JointState& joint_state;
  std::int64_t p;
  std::size_t task_index;
};

struct AllocationDecision {
  LoadAllocation loads;
  /// Loads as fractions of p, the form stored in transitions.
  std::vector<double> actions;
};

/// Decides per-worker loads at the start of every task.
class AllocationPolicy {
 public:
  virtual ~AllocationPolicy() = default;
  virtual std::string name() const = 0;
  virtual CodingMode coding() const = 0;
  /// `rng` is a per-episode stream for policies that randomize (exploration).
  virtual AllocationDecision allocate(const AllocationRequest& req, RngStream& rng) const = 0;
};

struct EpisodeOptions {
  std::int64_t batch_size = 1;
  marl::RewardConfig reward;
  std::shared_ptr<const VerificationData> verify;
};

struct EpisodeRecord {
  WorldState initial_world;
  std::optional<std::size_t> straggler_victim;
  std::vector<TaskRecord> tasks;
  /// K + 1 joint states; states[j + 1] is the successor of states[j].
  std::vector<marl::JointState> states;
  std::vector<std::vector<double>> actions;
  std::vector<LoadAllocation> loads;
  std::vector<double> rewards;
  std::vector<bool> clamped;
  double total_time = 0.0;

  std::size_t infeasible_count() const;
  double total_reward() const;
};

/// Draws initial positions, velocities and compute profiles for one episode.
WorldState sample_world(const ScenarioConfig& scenario, RngStream& rng);
StragglerPlan sample_straggler(const ScenarioConfig& scenario, RngStream& rng);

/// Runs K sequential tasks, each dispatched when the previous completes.
///
/// Environment draws come from rng.fork("env") and task noise from
/// rng.fork("sim").fork(j), so two policies given the same rng see the same
/// nodes, profiles and straggler. An all-zero allocation dispatches nothing:
/// the task is recorded as infeasible with zero duration.
EpisodeRecord run_episode(const ScenarioConfig& scenario, const AllocationPolicy& policy,
                          const EpisodeOptions& options, RngStream rng);

}  // namespace mahc
