#include "mahc/marl/trainer.hpp"

#include <cmath>
#include <numeric>

#include "mahc/allocators.hpp"

namespace mahc::marl {

StateScales scales_for(const ScenarioConfig& scenario) {
  StateScales s;
  s.distance = std::max(scenario.position_range, 1.0) * std::sqrt(2.0);
  s.velocity = std::max(scenario.velocity_range, 1.0);
  return s;
}

std::vector<Transition> transitions_of(const EpisodeRecord& rec, const StateScales& scales) {
  auto flatten = [&scales](const JointState& joint) {
    const std::size_t n = joint.size();
    const Eigen::Index d = state_dim(n);
    Eigen::VectorXd out(d * static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) out.segment(static_cast<Eigen::Index>(i) * d, d) = normalize_state(joint[i], n, scales);
    return out;
  };
  std::vector<Transition> out;
  out.reserve(rec.tasks.size());
  for (std::size_t j = 0; j < rec.tasks.size(); ++j) {
    const std::size_t n = rec.actions[j].size();
    Transition t;
    t.state = flatten(rec.states[j]);
    t.actions = Eigen::Map<const Eigen::VectorXd>(rec.actions[j].data(), static_cast<Eigen::Index>(n));
    t.rewards = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), rec.rewards[j]);
    t.next_state = flatten(rec.states[j + 1]);
    out.push_back(std::move(t));
  }
  return out;
}

std::shared_ptr<const std::vector<Mlp>> TrainResult::actors() const {
  auto out = std::make_shared<std::vector<Mlp>>();
  for (const auto& a : agents) out->push_back(a.actor);
  return out;
}

double exploration_std(const TrainConfig& cfg, std::size_t iteration) {
  if (cfg.iterations <= 1) return cfg.noise_start;
  const double frac = static_cast<double>(iteration) / static_cast<double>(cfg.iterations - 1);
  return cfg.noise_start + (cfg.noise_end - cfg.noise_start) * frac;
}

TrainResult train(const ScenarioConfig& scenario, const TrainConfig& cfg, RngStream rng, const TrainProgress& progress) {
  scenario.validate();
  cfg.validate();
  RngStream init = rng.fork("init");
  TrainResult result{make_agents(scenario.n_workers, cfg, init), {}};
  ReplayBuffer buffer(cfg.replay_capacity);
  const StateScales scales = scales_for(scenario);

  EpisodeOptions options;
  options.batch_size = scenario.batch_size;
  options.reward = cfg.reward;

  RngStream episodes = rng.fork("episodes");
  RngStream sampling = rng.fork("minibatch");
  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const ActorPolicy policy(result.actors(), scales, exploration_std(cfg, it));
    double reward_sum = 0.0;
    RngStream iter_rng = episodes.fork(it);
    for (std::size_t e = 0; e < cfg.episodes_per_iteration; ++e) {
      const EpisodeRecord rec = run_episode(scenario, policy, options, iter_rng.fork(e));
      reward_sum += rec.total_reward();
      for (auto& t : transitions_of(rec, scales)) buffer.push(std::move(t));
    }
    const double mean_reward = reward_sum / static_cast<double>(cfg.episodes_per_iteration);
    result.learning_curve.push_back(mean_reward);

    RngStream update_rng = sampling.fork(it);
    for (std::size_t u = 0; u < cfg.updates_per_iteration; ++u) {
      for (std::size_t i = 0; i < result.agents.size(); ++i) {
        const TransitionBatch batch = buffer.sample(cfg.batch_size, update_rng);
        const Eigen::VectorXd targets = td_target(result.agents, i, batch, cfg.gamma);
        critic_update(result.agents[i], batch, targets);
        actor_update(result.agents, i, batch);
        polyak_update(result.agents[i], cfg.tau);
      }
    }
    if (progress) progress(it, mean_reward);
  }
  return result;
}

}  // namespace mahc::marl
