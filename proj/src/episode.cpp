#include "mahc/episode.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "mahc/errors.hpp"

namespace mahc {

void ScenarioConfig::validate() const {
  if (n_workers < 1) throw ConfigError("scenario.workers: must be at least 1");
  if (p < 1) throw ConfigError("scenario.rows: must be at least 1");
  if (m < 1) throw ConfigError("scenario.cols: must be at least 1");
  if (k_tasks < 1) throw ConfigError("scenario.tasks: must be at least 1");
  if (!(position_range >= 0)) throw ConfigError("scenario.position_range: must be non-negative");
  if (!(velocity_range >= 0)) throw ConfigError("scenario.velocity_range: must be non-negative");
  if (!(beta_min > 0) || !(beta_max >= beta_min)) {
    throw ConfigError("scenario.beta_min/beta_max: need 0 < beta_min <= beta_max");
  }
  if (alpha_rule == AlphaRule::Fixed && !(alpha_fixed > 0)) throw ConfigError("scenario.alpha: must be positive");
  if (!(slowdown_factor >= 0)) throw ConfigError("straggler.slowdown_factor: must be non-negative");
  if (batch_size < 1) throw ConfigError("scenario.batch_size: must be at least 1");
  if (baseline_batch_size < 0) throw ConfigError("scenario.baseline_batch_size: must be non-negative");
  comm.validate();
}

std::size_t EpisodeRecord::infeasible_count() const {
  return static_cast<std::size_t>(std::count_if(tasks.begin(), tasks.end(), [](const TaskRecord& t) { return !t.feasible; }));
}

double EpisodeRecord::total_reward() const { return std::accumulate(rewards.begin(), rewards.end(), 0.0); }

WorldState sample_world(const ScenarioConfig& s, RngStream& rng) {
  auto sample_vec = [&rng](double range) {
    const double x = sample_uniform(-range, range, rng);
    const double y = sample_uniform(-range, range, rng);
    return Eigen::Vector2d(x, y);
  };
  WorldState world;
  world.master.position = sample_vec(s.position_range);
  const Eigen::Vector2d master_velocity = sample_vec(s.velocity_range);
  world.master.velocity = s.master_moves ? master_velocity : Eigen::Vector2d::Zero();
  world.workers.resize(s.n_workers);
  for (auto& w : world.workers) {
    w.kinematics.position = sample_vec(s.position_range);
    w.kinematics.velocity = sample_vec(s.velocity_range);
    w.profile.beta = sample_uniform(s.beta_min, s.beta_max, rng);
    w.profile.alpha = s.alpha_rule == AlphaRule::InverseBeta ? 1.0 / w.profile.beta : s.alpha_fixed;
  }
  return world;
}

StragglerPlan sample_straggler(const ScenarioConfig& s, RngStream& rng) {
  StragglerPlan plan;
  plan.slowdown_factor = s.slowdown_factor;
  // Always draw so the env stream stays aligned whether or not stragglers are on.
  const auto victim = static_cast<std::size_t>(sample_index(s.n_workers, rng));
  if (s.straggler_enabled) {
    plan.enabled = true;
    plan.victim = victim;
  }
  return plan;
}

EpisodeRecord run_episode(const ScenarioConfig& scenario, const AllocationPolicy& policy,
                          const EpisodeOptions& options, RngStream rng) {
  RngStream env = rng.fork("env");
  RngStream sim = rng.fork("sim");
  RngStream decide = rng.fork("policy");
  RngStream inputs = rng.fork("x");

  EpisodeRecord rec;
  WorldState world = sample_world(scenario, env);
  const StragglerPlan straggler = sample_straggler(scenario, env);
  rec.initial_world = world;
  rec.straggler_victim = straggler.victim;

  TaskContext ctx;
  ctx.p = scenario.p;
  ctx.m = scenario.m;
  ctx.batch_size = options.batch_size;
  ctx.coding = policy.coding();
  ctx.comm = scenario.comm;
  ctx.straggler = straggler;
  ctx.verify = options.verify;

  rec.states.push_back(marl::build_joint_state(world));
  for (std::size_t j = 0; j < scenario.k_tasks; ++j) {
    AllocationDecision decision = policy.allocate({world, rec.states.back(), scenario.p, j}, decide);
    if (decision.loads.loads.size() != scenario.n_workers) {
      throw InvalidInput("run_episode: policy " + policy.name() + " returned " +
                         std::to_string(decision.loads.loads.size()) + " loads");
    }
    bool clamped = false;
    for (auto& l : decision.loads.loads) {
      const auto c = std::clamp<std::int64_t>(l, 0, scenario.p);
      clamped = clamped || c != l;
      l = c;
    }

    ctx.task_index = j;
    VectorXr x;
    if (ctx.verify) {
      RngStream xr = inputs.fork(j);
      x.resize(scenario.m);
      for (Eigen::Index c = 0; c < x.size(); ++c) x(c) = sample_uniform(-1.0, 1.0, xr);
      ctx.x = &x;
    }

    TaskRecord task;
    if (decision.loads.total() == 0) {
      task.index = j;
      task.dispatch_time = world.clock;
      task.feasible = false;
    } else {
      auto [t, next] = run_task(world, decision.loads, ctx, sim.fork(j));
      task = std::move(t);
      world = std::move(next);
    }
    ctx.x = nullptr;

    rec.rewards.push_back(marl::reward(task.completion_time, decision.loads, scenario.p, options.reward));
    rec.total_time += task.completion_time;
    rec.tasks.push_back(std::move(task));
    rec.actions.push_back(std::move(decision.actions));
    rec.loads.push_back(std::move(decision.loads));
    rec.clamped.push_back(clamped);
    rec.states.push_back(marl::build_joint_state(world));
  }
  return rec;
}

}  // namespace mahc
