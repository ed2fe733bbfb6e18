#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "mahc/episode.hpp"
#include "mahc/marl/maddpg.hpp"
#include "mahc/scenario.hpp"

namespace mahc::marl {

/// Distances scaled by the diagonal of the position box, velocities by the speed bound.
StateScales scales_for(const ScenarioConfig& scenario);

/// Flattens an episode into K transitions with normalized states.
std::vector<Transition> transitions_of(const EpisodeRecord& rec, const StateScales& scales);

struct TrainResult {
  std::vector<AgentNets> agents;
  /// Mean total episode reward of the episodes collected in each iteration.
  std::vector<double> learning_curve;

  std::shared_ptr<const std::vector<Mlp>> actors() const;
};

/// Exploration std used at a given iteration (linear schedule).
double exploration_std(const TrainConfig& cfg, std::size_t iteration);

using TrainProgress = std::function<void(std::size_t iteration, double mean_reward)>;

/// MADDPG with centralized critics and decentralized actors.
///
/// Each iteration collects `episodes_per_iteration` episodes with the current
/// actors plus exploration noise, stores their transitions, then for each
/// agent samples its own mini-batch and updates the critic, the actor and the
/// target networks in that order.
TrainResult train(const ScenarioConfig& scenario, const TrainConfig& cfg, RngStream rng,
                  const TrainProgress& progress = {});

}  // namespace mahc::marl
