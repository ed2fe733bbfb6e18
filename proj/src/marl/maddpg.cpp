#include "mahc/marl/maddpg.hpp"

#include <string>

#include "mahc/errors.hpp"

namespace mahc::marl {

void TrainConfig::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw ConfigError("train.gamma: must lie in (0, 1)");
  if (!(tau > 0.0 && tau < 1.0)) throw ConfigError("train.tau: must lie in (0, 1)");
  if (!(learning_rate > 0.0)) throw ConfigError("train.learning_rate: must be positive");
  if (!(reward.penalty >= 0.0)) throw ConfigError("train.penalty: must be non-negative");
  if (batch_size == 0) throw ConfigError("train.batch_size: must be positive");
  if (replay_capacity == 0) throw ConfigError("train.replay_capacity: must be positive");
  if (episodes_per_iteration == 0) throw ConfigError("train.episodes_per_iteration: must be positive");
  if (!(noise_start >= 0.0 && noise_end >= 0.0)) throw ConfigError("train.noise_start/noise_end: must be non-negative");
  if (hidden_width < 1) throw ConfigError("train.hidden_width: must be positive");
}

AgentNets::AgentNets(Mlp actor_net, Mlp critic_net, const OptimizerConfig& opt)
    : actor(std::move(actor_net)),
      critic(std::move(critic_net)),
      target_actor(actor),
      target_critic(critic),
      actor_optimizer(actor, opt),
      critic_optimizer(critic, opt) {}

std::vector<AgentNets> make_agents(std::size_t n_workers, const TrainConfig& cfg, RngStream& rng) {
  const Eigen::Index sdim = state_dim(n_workers);
  const Eigen::Index cdim = sdim * static_cast<Eigen::Index>(n_workers) + static_cast<Eigen::Index>(n_workers);
  OptimizerConfig opt;
  opt.kind = cfg.optimizer;
  opt.learning_rate = cfg.learning_rate;
  std::vector<AgentNets> agents;
  agents.reserve(n_workers);
  for (std::size_t i = 0; i < n_workers; ++i) {
    RngStream a = rng.fork("actor").fork(i);
    RngStream c = rng.fork("critic").fork(i);
    agents.emplace_back(make_actor(sdim, cfg.hidden_width, a), make_critic(cdim, cfg.hidden_width, c), opt);
  }
  return agents;
}

Eigen::Index agent_offset(std::size_t agent, std::size_t n_workers) {
  return static_cast<Eigen::Index>(agent) * state_dim(n_workers);
}

Eigen::MatrixXd critic_input(const Eigen::MatrixXd& joint_states, const Eigen::MatrixXd& joint_actions) {
  if (joint_states.cols() != joint_actions.cols()) throw InvalidInput("critic_input: sample counts differ");
  Eigen::MatrixXd x(joint_states.rows() + joint_actions.rows(), joint_states.cols());
  x << joint_states, joint_actions;
  return x;
}

double actor_forward(const AgentNets& nets, const Eigen::VectorXd& agent_state) {
  if (agent_state.size() != nets.actor.input_dim()) {
    throw InvalidInput("actor_forward: state dimension " + std::to_string(agent_state.size()) + ", expected " +
                       std::to_string(nets.actor.input_dim()));
  }
  return nets.actor.forward(agent_state)(0, 0);
}

double critic_forward(const AgentNets& nets, const Eigen::VectorXd& joint_state, const Eigen::VectorXd& joint_actions) {
  if (joint_state.size() + joint_actions.size() != nets.critic.input_dim()) {
    throw InvalidInput("critic_forward: joint input dimension mismatch");
  }
  return nets.critic.forward(critic_input(joint_state, joint_actions))(0, 0);
}

namespace {

std::size_t agent_count(const TransitionBatch& batch) { return static_cast<std::size_t>(batch.actions.rows()); }

}  // namespace

Eigen::VectorXd td_target(const std::vector<AgentNets>& agents, std::size_t agent, const TransitionBatch& batch,
                          double gamma) {
  const std::size_t n = agent_count(batch);
  const Eigen::Index sdim = state_dim(n);
  Eigen::MatrixXd next_actions(static_cast<Eigen::Index>(n), batch.size());
  for (std::size_t k = 0; k < n; ++k) {
    next_actions.row(static_cast<Eigen::Index>(k)) =
        agents[k].target_actor.forward(batch.next_states.middleRows(agent_offset(k, n), sdim));
  }
  const Eigen::MatrixXd q_next = agents[agent].target_critic.forward(critic_input(batch.next_states, next_actions));
  return batch.rewards.row(static_cast<Eigen::Index>(agent)).transpose() + gamma * q_next.row(0).transpose();
}

LossAndGradient critic_loss(const AgentNets& nets, const TransitionBatch& batch, const Eigen::VectorXd& targets) {
  if (batch.size() == 0) throw InvalidInput("critic_loss: empty batch");
  ForwardTape tape;
  const Eigen::MatrixXd q = nets.critic.forward(critic_input(batch.states, batch.actions), tape);
  const Eigen::RowVectorXd err = q.row(0) - targets.transpose();
  const auto b = static_cast<double>(batch.size());
  LossAndGradient out{err.squaredNorm() / b, nets.critic.zero_gradient()};
  nets.critic.backward(tape, (2.0 / b) * err, &out.gradient);
  return out;
}

double critic_update(AgentNets& nets, const TransitionBatch& batch, const Eigen::VectorXd& targets) {
  LossAndGradient lg = critic_loss(nets, batch, targets);
  nets.critic_optimizer.step(nets.critic, lg.gradient);
  return lg.value;
}

LossAndGradient actor_objective(const std::vector<AgentNets>& agents, std::size_t agent, const TransitionBatch& batch) {
  if (batch.size() == 0) throw InvalidInput("actor_objective: empty batch");
  const std::size_t n = agent_count(batch);
  const Eigen::Index sdim = state_dim(n);
  const AgentNets& nets = agents[agent];

  ForwardTape actor_tape;
  const Eigen::MatrixXd own = nets.actor.forward(batch.states.middleRows(agent_offset(agent, n), sdim), actor_tape);
  Eigen::MatrixXd actions = batch.actions;
  actions.row(static_cast<Eigen::Index>(agent)) = own.row(0);

  ForwardTape critic_tape;
  const Eigen::MatrixXd q = nets.critic.forward(critic_input(batch.states, actions), critic_tape);
  const auto b = static_cast<double>(batch.size());
  const Eigen::MatrixXd dq = Eigen::MatrixXd::Constant(1, batch.size(), 1.0 / b);
  const Eigen::MatrixXd dinput = nets.critic.backward(critic_tape, dq, nullptr);
  const Eigen::MatrixXd daction = dinput.row(batch.states.rows() + static_cast<Eigen::Index>(agent));

  LossAndGradient out{q.mean(), nets.actor.zero_gradient()};
  nets.actor.backward(actor_tape, daction, &out.gradient);
  return out;
}

void actor_update(std::vector<AgentNets>& agents, std::size_t agent, const TransitionBatch& batch) {
  LossAndGradient lg = actor_objective(agents, agent, batch);
  lg.gradient *= -1.0;
  auto& nets = agents[agent];
  nets.actor_optimizer.step(nets.actor, lg.gradient);
}

void polyak_update(AgentNets& nets, double tau) {
  polyak_update(nets.target_actor, nets.actor, tau);
  polyak_update(nets.target_critic, nets.critic, tau);
}

}  // namespace mahc::marl
