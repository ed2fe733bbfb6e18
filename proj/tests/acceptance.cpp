// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "mahc/allocators.hpp"
#include "mahc/config.hpp"
#include "mahc/envmodels.hpp"
#include "mahc/experiments.hpp"
#include "mahc/marl/trainer.hpp"
#include "mahc/simcore.hpp"

using namespace mahc;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kRoundTripTol = 1e-8;
constexpr double kHcmmResidualTol = 1e-9;
constexpr double kHcmmUnitRoot = 2.1462;
constexpr double kHcmmUnitTol = 1e-3;
constexpr double kSamplerCdfTol = 0.01;
constexpr double kCapacityRelTol = 1e-3;
constexpr double kCapacityHandValue = 3.18e5;
constexpr double kGradientTol = 1e-4;
constexpr double kNormalQuantile975 = 1.959963984540054;

// Desk-scale training recipe used by criteria 6 to 8.
constexpr double kDeskLearningRate = 1e-3;
constexpr std::size_t kDeskUpdatesPerIteration = 10;
constexpr std::size_t kDeskIterations = 300;
const std::vector<std::uint64_t> kTrainingSeeds{101, 202, 303};
constexpr std::uint64_t kEvalSeed = 9001;
constexpr std::size_t kEvalEpisodes = 20;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

RunConfig desk_config(const std::string& preset, std::uint64_t seed, bool straggler) {
  RunConfig cfg;
  cfg.scenario = scenario_preset(preset);
  cfg.scenario.seed = seed;
  cfg.scenario.straggler_enabled = straggler;
  cfg.train.learning_rate = kDeskLearningRate;
  cfg.train.updates_per_iteration = kDeskUpdatesPerIteration;
  cfg.train.iterations = kDeskIterations;
  cfg.eval_episodes = kEvalEpisodes;
  return cfg;
}

marl::TrainResult train_desk(const RunConfig& cfg) {
  return marl::train(cfg.scenario, cfg.train, RngStream(cfg.scenario.seed).fork("train"));
}

std::vector<double> evaluate_scheme(const RunConfig& cfg, const std::string& scheme,
                                    const std::optional<marl::Checkpoint>& ckpt) {
  const auto policy = make_policy(scheme, cfg, ckpt);
  return total_times(evaluate_policy(cfg, *policy, options_for(scheme, cfg), kEvalSeed, kEvalEpisodes));
}

double mean(const std::vector<double>& v) { return summarize(v).mean; }

// ---------------------------------------------------------------------------

Outcome coded_round_trip() {
  RngStream rng(1);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    RngStream t = rng.fork(static_cast<std::uint64_t>(trial));
    ScenarioConfig s;
    s.n_workers = 1 + sample_index(5, t);
    s.p = static_cast<std::int64_t>(1 + sample_index(50, t));
    s.m = static_cast<std::int64_t>(1 + sample_index(100, t));
    s.k_tasks = 1;
    const WorldState world = sample_world(s, t);

    LoadAllocation alloc;
    for (std::size_t i = 0; i < s.n_workers; ++i)
      alloc.loads.push_back(static_cast<std::int64_t>(sample_index(static_cast<std::uint64_t>(s.p) + 1, t)));
    while (alloc.total() < s.p) {
      auto& l = alloc.loads[sample_index(s.n_workers, t)];
      if (l < s.p) ++l;
    }

    const auto data = VerificationData::make(s.p, s.m, s.n_workers, t.fork("data"));
    VectorXr x(s.m);
    for (auto& v : x) v = sample_uniform(-1.0, 1.0, t);
    TaskContext ctx;
    ctx.p = s.p;
    ctx.m = s.m;
    ctx.batch_size = static_cast<std::int64_t>(1 + sample_index(static_cast<std::uint64_t>(s.p), t));
    ctx.coding = CodingMode::Coded;
    ctx.verify = data;
    ctx.x = &x;
    const auto rec = run_task(world, alloc, ctx, t.fork("sim")).first;
    if (!rec.decode_error) return {false, "trial " + std::to_string(trial) + " produced no decode"};
    worst = std::max(worst, *rec.decode_error);
  }
  return {worst < kRoundTripTol, "worst relative error " + fmt(worst) + " over 50 instances"};
}

// Newton iteration on e^z - e^{ab}(z + 1), independent of the library's bisection.
double newton_root(double ab) {
  double z = ab + 2.0;
  for (int i = 0; i < 100; ++i) {
    const double f = std::exp(z) - std::exp(ab) * (z + 1.0);
    const double df = std::exp(z) - std::exp(ab);
    z -= f / df;
  }
  return z;
}

Outcome hcmm_solver() {
  RngStream rng(2);
  double worst_residual = 0.0;
  double worst_unit = 0.0;
  double worst_oracle = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double beta = sample_uniform(1e4, 1e5, rng);
    const ComputeProfile prof{beta, 1.0 / beta};
    const double lambda = solve_hcmm_lambda(prof);
    const double lhs = std::exp(beta * lambda);
    const double rhs = std::exp(prof.alpha * beta) * (beta * lambda + 1.0);
    worst_residual = std::max(worst_residual, std::abs(lhs - rhs) / rhs);
    worst_unit = std::max(worst_unit, std::abs(beta * lambda - kHcmmUnitRoot));
    worst_oracle = std::max(worst_oracle, std::abs(beta * lambda - newton_root(1.0)));
  }
  const bool pass = worst_residual < kHcmmResidualTol && worst_unit < kHcmmUnitTol && worst_oracle < 1e-9;
  return {pass, "max residual " + fmt(worst_residual) + ", max |beta*lambda - 2.1462| " + fmt(worst_unit) +
                    ", max |z - newton| " + fmt(worst_oracle)};
}

Outcome shifted_exponential() {
  const ComputeProfile prof{1e4, 1e-4};
  RngStream rng(3);
  const int n = 100000;
  const double target = 1e-4 * 100 + 100 / 1e4;
  double sum = 0.0, sq = 0.0;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    const double t = comp_time_sample(100, prof, rng);
    sum += t;
    sq += t * t;
    below += t <= target ? 1 : 0;
  }
  const double m = sum / n;
  const double se = std::sqrt((sq / n - m * m) / n);
  const double cdf = static_cast<double>(below) / n;
  const bool pass = std::abs(m - target) < 3.0 * se && std::abs(cdf - (1.0 - std::exp(-1.0))) < kSamplerCdfTol;
  return {pass, "mean " + fmt(m) + " (3 se = " + fmt(3 * se) + "), CDF at mean " + fmt(cdf)};
}

Outcome channel_model() {
  const CommConfig cfg;
  bool decreasing = true;
  double prev = std::numeric_limits<double>::infinity();
  std::string values;
  for (double d : {1.0, 2.0, 5.0, 10.0, 50.0, 100.0}) {
    const double c = channel_capacity(d, 0.0, cfg);
    decreasing = decreasing && c < prev;
    prev = c;
    values += fmt(c, 5) + " ";
  }
  // 10^4 log2(1 + 10^-2.4 / 1.1e-12) evaluated in 40-digit arithmetic (tests/oracles/closed_forms.py).
  const double hand = 317530.06187567371;
  const double c1 = channel_capacity(1.0, 0.0, cfg);
  const double rel = std::abs(c1 - hand) / hand;
  const double three_figures = std::round(c1 / 1e3) * 1e3;
  const double vs_rounded = std::abs(c1 - kCapacityHandValue) / kCapacityHandValue;
  const bool pass = decreasing && rel < kCapacityRelTol && three_figures == kCapacityHandValue;
  return {pass, "capacities " + values + "bits/s; d=1 is " + fmt(c1, 9) + " (rel. error " + fmt(rel, 3) +
                    " vs hand computation, rounds to " + fmt(three_figures, 3) + ", " + fmt(100 * vs_rounded, 3) +
                    "% from the rounded figure)"};
}

Outcome gradient_fidelity() {
  RngStream rng(5);
  double worst_critic = 0.0;
  double worst_actor = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + sample_index(3, rng);
    const auto width = static_cast<Eigen::Index>(2 + sample_index(7, rng));
    auto agents = testing::small_agents(n, width, rng);
    const auto batch = testing::random_batch(n, static_cast<Eigen::Index>(1 + sample_index(8, rng)), rng);
    const std::size_t agent = sample_index(n, rng);
    const Eigen::VectorXd targets = marl::td_target(agents, agent, batch, 0.95);
    worst_critic = std::max(worst_critic, testing::critic_gradient_error(agents, agent, batch, targets));
    worst_actor = std::max(worst_actor, testing::actor_gradient_error(agents, agent, batch));
  }
  return {worst_critic < kGradientTol && worst_actor < kGradientTol,
          "worst relative error critic " + fmt(worst_critic) + ", actor " + fmt(worst_actor)};
}

// Trained desk policy shared by criteria 6 and 7.
std::optional<marl::Checkpoint> g_desk_checkpoint;

Outcome training_improvement() {
  int improved = 0;
  std::string detail;
  for (std::size_t k = 0; k < kTrainingSeeds.size(); ++k) {
    const RunConfig cfg = desk_config("desk", kTrainingSeeds[k], false);
    const auto result = train_desk(cfg);
    const auto& curve = result.learning_curve;
    const std::size_t tenth = std::max<std::size_t>(1, curve.size() / 10);
    const double first = std::accumulate(curve.begin(), curve.begin() + static_cast<long>(tenth), 0.0) / tenth;
    const double last = std::accumulate(curve.end() - static_cast<long>(tenth), curve.end(), 0.0) / tenth;
    improved += last > first ? 1 : 0;
    detail += "seed " + std::to_string(kTrainingSeeds[k]) + ": " + fmt(first, 5) + " -> " + fmt(last, 5) + "; ";
    if (k == 0) g_desk_checkpoint = checkpoint_of(result, cfg.scenario);
  }
  return {improved == static_cast<int>(kTrainingSeeds.size()),
          std::to_string(improved) + "/3 improved (" + detail.substr(0, detail.size() - 2) + ")"};
}

Outcome batch_trend() {
  if (!g_desk_checkpoint) {
    const RunConfig cfg = desk_config("desk", kTrainingSeeds[0], false);
    g_desk_checkpoint = checkpoint_of(train_desk(cfg), cfg.scenario);
  }
  bool pass = true;
  std::string detail;
  for (bool straggler : {false, true}) {
    RunConfig cfg = desk_config("desk", kTrainingSeeds[0], straggler);
    const std::int64_t p = cfg.scenario.p;
    double prev = 0.0;
    detail += straggler ? "straggler:" : "no straggler:";
    for (std::int64_t b : {std::int64_t{1}, p / 4, p}) {
      cfg.scenario.batch_size = b;
      const double m = mean(evaluate_scheme(cfg, "marl", g_desk_checkpoint));
      pass = pass && m >= prev;
      prev = m;
      detail += " b=" + std::to_string(b) + " " + fmt(m, 5);
    }
    detail += "; ";
  }
  return {pass, detail.substr(0, detail.size() - 2)};
}

Outcome comparative_trend() {
  const RunConfig cfg = desk_config("desk3", kTrainingSeeds[0], true);
  const auto ckpt = checkpoint_of(train_desk(cfg), cfg.scenario);

  const auto marl = evaluate_scheme(cfg, "marl", ckpt);
  const auto uniform = evaluate_scheme(cfg, "uniform", std::nullopt);
  const auto balanced = evaluate_scheme(cfg, "load-balanced", std::nullopt);
  const auto hcmm = evaluate_scheme(cfg, "hcmm", std::nullopt);
  std::vector<double> diff(marl.size());
  for (std::size_t e = 0; e < diff.size(); ++e) diff[e] = marl[e] - uniform[e];
  const Summary d = summarize(diff);
  const double upper = d.mean + kNormalQuantile975 * d.std / std::sqrt(static_cast<double>(d.n));
  const bool part_a = upper < 0.0;

  RunConfig calm = cfg;
  calm.scenario.straggler_enabled = false;
  const double u0 = mean(evaluate_scheme(calm, "uniform", std::nullopt));
  const double lb0 = mean(evaluate_scheme(calm, "load-balanced", std::nullopt));
  const double h0 = mean(evaluate_scheme(calm, "hcmm", std::nullopt));
  const bool stragglers_favor_hcmm = mean(hcmm) < mean(uniform) && mean(hcmm) < mean(balanced);
  const bool calm_favors_uncoded = u0 < h0 && lb0 < h0;

  std::string detail = "(a) marl " + fmt(mean(marl), 5) + " vs uniform " + fmt(mean(uniform), 5) +
                       ", paired diff CI upper " + fmt(upper, 4) + (part_a ? " ok" : " FAILED") +
                       "; (b) straggler: hcmm " + fmt(mean(hcmm), 5) + ", load-balanced " + fmt(mean(balanced), 5) +
                       (stragglers_favor_hcmm ? " ok" : " FAILED") + "; no straggler: uniform " + fmt(u0, 5) +
                       ", load-balanced " + fmt(lb0, 5) + ", hcmm " + fmt(h0, 5) +
                       (calm_favors_uncoded ? " ok" : " FAILED");
  return {part_a && stragglers_favor_hcmm && calm_favors_uncoded, detail};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  RunConfig cfg = desk_config("desk", 17, true);
  cfg.scenario.k_tasks = 3;
  cfg.train.iterations = 4;
  cfg.train.updates_per_iteration = 2;
  cfg.train.batch_size = 32;
  const fs::path root = fs::temp_directory_path() / "mahc_acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> files;
  for (const char* run : {"a", "b"}) {
    CommandOptions opts;
    opts.seed = 17;
    opts.out_dir = root / run;
    opts.svg = false;
    cmd_train(cfg, opts);
    opts.checkpoint = opts.out_dir / "checkpoint.json";
    CommandOptions eval = opts;
    eval.out_dir = root / run / "eval";
    cmd_evaluate(cfg, "marl", 5, eval);
    CommandOptions cmp = opts;
    cmp.out_dir = root / run / "compare";
    cmd_compare(cfg, {"uniform", "load-balanced", "hcmm", "marl"}, 5, cmp);
    CommandOptions sweep = opts;
    sweep.out_dir = root / run / "sweep";
    cmd_sweep_batch(cfg, "marl", {1, 50, 200}, 3, sweep);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (!entry.is_regular_file()) continue;
    const auto rel = fs::relative(entry.path(), root / "a");
    if (slurp(entry.path()) != slurp(root / "b" / rel)) return {false, rel.string() + " differs between reruns"};
    ++compared;
  }
  fs::remove_all(root);
  return {compared >= 8, std::to_string(compared) + " output files byte-identical across reruns"};
}

// Actors whose output is a fixed fraction of p for every state.
std::shared_ptr<const std::vector<marl::Mlp>> constant_actors(std::size_t n, double output) {
  RngStream rng(0);
  auto actors = std::make_shared<std::vector<marl::Mlp>>();
  for (std::size_t i = 0; i < n; ++i) {
    marl::Mlp a = marl::make_actor(marl::state_dim(n), 8, rng);
    a.unflatten(Eigen::VectorXd::Zero(a.parameter_count()));
    a.layers().back().bias(0) = std::log(output / (1.0 - output));
    actors->push_back(std::move(a));
  }
  return actors;
}

Outcome feasibility_accounting() {
  std::size_t baseline_tasks = 0;
  std::size_t baseline_infeasible = 0;
  for (const char* preset : {"desk", "desk3", "scenario1"}) {
    for (bool straggler : {false, true}) {
      RunConfig cfg = desk_config(preset, 3, straggler);
      cfg.scenario.k_tasks = std::min<std::size_t>(cfg.scenario.k_tasks, 5);
      for (const auto& scheme : {"uniform", "load-balanced", "hcmm"}) {
        const auto policy = make_policy(scheme, cfg, std::nullopt);
        for (const auto& rec : evaluate_policy(cfg, *policy, options_for(scheme, cfg), 44, 5)) {
          baseline_tasks += rec.tasks.size();
          baseline_infeasible += rec.infeasible_count();
        }
      }
    }
  }

  const RunConfig cfg = desk_config("desk", 3, true);
  const auto scales = marl::scales_for(cfg.scenario);
  std::size_t crippled_tasks = 0;
  std::size_t exact = 0;
  for (double output : {1e-12, 0.2}) {
    const ActorPolicy crippled(constant_actors(cfg.scenario.n_workers, output), scales);
    for (const auto& rec : evaluate_policy(cfg, crippled, options_for("marl", cfg), 45, 10)) {
      for (std::size_t j = 0; j < rec.tasks.size(); ++j) {
        ++crippled_tasks;
        const bool ok = !rec.tasks[j].feasible && rec.rewards[j] == -rec.tasks[j].completion_time - 200.0;
        exact += ok ? 1 : 0;
      }
    }
  }
  const bool pass = baseline_infeasible == 0 && baseline_tasks > 0 && exact == crippled_tasks;
  return {pass, std::to_string(baseline_infeasible) + "/" + std::to_string(baseline_tasks) +
                    " baseline tasks infeasible; " + std::to_string(exact) + "/" + std::to_string(crippled_tasks) +
                    " crippled tasks infeasible with reward exactly -T - 200"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "coded round trip", 5.0, coded_round_trip},
      {2, "HCMM solver", 1.0, hcmm_solver},
      {3, "shifted-exponential sampler", 2.0, shifted_exponential},
      {4, "channel model", 1.0, channel_model},
      {5, "gradient fidelity", 10.0, gradient_fidelity},
      {6, "training improvement", 600.0, training_improvement},
      {7, "batch-size trend", 120.0, batch_trend},
      {8, "comparative trend", 900.0, comparative_trend},
      {9, "determinism", 60.0, determinism},
      {10, "feasibility accounting", 60.0, feasibility_accounting},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs < c.budget_s;
    const bool pass = out.pass && in_budget;
    failures += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << out.detail << " ["
              << fmt(secs, 3) << " s, budget " << c.budget_s << " s" << (in_budget ? "" : ", OVER BUDGET") << "]"
              << std::endl;
  }
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
