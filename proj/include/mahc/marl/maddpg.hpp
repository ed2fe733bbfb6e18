#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "mahc/marl/formulation.hpp"
#include "mahc/marl/mlp.hpp"
#include "mahc/marl/replay.hpp"

namespace mahc::marl {

struct TrainConfig {
  double gamma = 0.95;
  double learning_rate = 0.01;
  double tau = 0.99;
  RewardConfig reward;
  std::size_t batch_size = 256;
  std::size_t replay_capacity = 100000;
  std::size_t episodes_per_iteration = 10;
  std::size_t iterations = 300;
  /// Gradient rounds (critic, actor, target for every agent) per iteration.
  std::size_t updates_per_iteration = 1;
  /// Exploration std on the [0, 1] action, decayed linearly over training.
  double noise_start = 0.3;
  double noise_end = 0.02;
  OptimizerKind optimizer = OptimizerKind::Adam;
  Eigen::Index hidden_width = 64;

  void validate() const;
};

/// Actor, critic, their targets and optimizer state for one agent.
struct AgentNets {
  Mlp actor;
  Mlp critic;
  Mlp target_actor;
  Mlp target_critic;
  Optimizer actor_optimizer;
  Optimizer critic_optimizer;

  /// Targets start as copies of the online networks.
  AgentNets(Mlp actor_net, Mlp critic_net, const OptimizerConfig& opt);
};

std::vector<AgentNets> make_agents(std::size_t n_workers, const TrainConfig& cfg, RngStream& rng);

/// Rows of agent `agent`'s observation inside a flattened joint state.
Eigen::Index agent_offset(std::size_t agent, std::size_t n_workers);

/// Concatenates joint states (rows) and joint actions (rows) column-wise samples.
Eigen::MatrixXd critic_input(const Eigen::MatrixXd& joint_states, const Eigen::MatrixXd& joint_actions);

double actor_forward(const AgentNets& nets, const Eigen::VectorXd& agent_state);
double critic_forward(const AgentNets& nets, const Eigen::VectorXd& joint_state, const Eigen::VectorXd& joint_actions);

/// r_i + gamma * Q'_i(s', pi'(s')) per sample, using every agent's target actor.
Eigen::VectorXd td_target(const std::vector<AgentNets>& agents, std::size_t agent, const TransitionBatch& batch,
                          double gamma);

struct LossAndGradient {
  double value = 0.0;
  MlpGradient gradient;
};

/// Mean squared TD error of agent i's critic and its parameter gradient.
LossAndGradient critic_loss(const AgentNets& nets, const TransitionBatch& batch, const Eigen::VectorXd& targets);
/// One optimizer step on the critic; returns the loss measured before the step.
double critic_update(AgentNets& nets, const TransitionBatch& batch, const Eigen::VectorXd& targets);

/// Batch-mean Q_i with a_i replaced by pi_i(s_i), and its gradient with
/// respect to the actor parameters (chain rule through the critic).
LossAndGradient actor_objective(const std::vector<AgentNets>& agents, std::size_t agent, const TransitionBatch& batch);
/// Gradient-ascent step on the actor objective.
void actor_update(std::vector<AgentNets>& agents, std::size_t agent, const TransitionBatch& batch);

void polyak_update(AgentNets& nets, double tau);

}  // namespace mahc::marl
