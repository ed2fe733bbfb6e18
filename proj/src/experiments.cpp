#include "mahc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <numeric>

#include "mahc/allocators.hpp"
#include "mahc/errors.hpp"
#include "mahc/format.hpp"
#include "mahc/plot.hpp"

namespace mahc {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> scheme_names() { return {"uniform", "load-balanced", "hcmm", "marl"}; }

std::unique_ptr<AllocationPolicy> make_policy(const std::string& scheme, const RunConfig& cfg,
                                              const std::optional<marl::Checkpoint>& checkpoint) {
  if (scheme == "uniform") return std::make_unique<UniformPolicy>();
  if (scheme == "load-balanced") return std::make_unique<LoadBalancedPolicy>();
  if (scheme == "hcmm") return std::make_unique<HcmmPolicy>();
  if (scheme == "marl") {
    if (!checkpoint) throw ConfigError("scheme marl: --checkpoint is required");
    if (checkpoint->n_workers != cfg.scenario.n_workers) {
      throw ConfigError("scheme marl: checkpoint has " + std::to_string(checkpoint->n_workers) +
                        " agents but scenario.workers is " + std::to_string(cfg.scenario.n_workers));
    }
    auto actors = std::make_shared<const std::vector<marl::Mlp>>(checkpoint->actors);
    return std::make_unique<ActorPolicy>(std::move(actors), checkpoint->scales);
  }
  throw ConfigError("--scheme: unknown scheme '" + scheme + "' (expected uniform|load-balanced|hcmm|marl)");
}

EpisodeOptions options_for(const std::string& scheme, const RunConfig& cfg) {
  EpisodeOptions o;
  o.batch_size = scheme == "marl" ? cfg.scenario.batch_size : cfg.scenario.baseline_batch_size;
  o.reward = cfg.train.reward;
  if (cfg.scenario.verify) {
    o.verify = VerificationData::make(cfg.scenario.p, cfg.scenario.m, cfg.scenario.n_workers,
                                      RngStream(cfg.scenario.seed).fork("verify"));
  }
  return o;
}

RngStream evaluation_rng(std::uint64_t seed, std::size_t episode) { return RngStream(seed).fork("evaluation").fork(episode); }

std::vector<EpisodeRecord> evaluate_policy(const RunConfig& cfg, const AllocationPolicy& policy,
                                           const EpisodeOptions& options, std::uint64_t seed, std::size_t episodes) {
  std::vector<EpisodeRecord> out;
  out.reserve(episodes);
  for (std::size_t e = 0; e < episodes; ++e) out.push_back(run_episode(cfg.scenario, policy, options, evaluation_rng(seed, e)));
  return out;
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.n = values.size();
  if (s.n == 0) return s;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    s.mean = s.ci_low = s.ci_high = *lo;
    return s;
  }
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.std = s.n > 1 ? std::sqrt(ss / static_cast<double>(s.n - 1)) : 0.0;
  const double half = 1.959963984540054 * s.std / std::sqrt(static_cast<double>(s.n));
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

std::vector<double> total_times(const std::vector<EpisodeRecord>& records) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.total_time);
  return out;
}

marl::Checkpoint checkpoint_of(const marl::TrainResult& result, const ScenarioConfig& scenario) {
  marl::Checkpoint ckpt;
  ckpt.n_workers = scenario.n_workers;
  ckpt.scales = marl::scales_for(scenario);
  for (const auto& a : result.agents) {
    ckpt.actors.push_back(a.actor);
    ckpt.critics.push_back(a.critic);
  }
  return ckpt;
}

namespace {

json kinematics_json(const KinematicState& k) {
  return {{"position", {k.position.x(), k.position.y()}}, {"velocity", {k.velocity.x(), k.velocity.y()}}};
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void write_metadata(std::ostream& out, const RunConfig& cfg, std::uint64_t seed, const std::string& command) {
  out << "# command=" << command << " config_hash=" << format_hex(cfg.hash()) << " seed=" << seed << '\n';
}

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
}

std::string episode_row(const RunConfig& cfg, const std::string& scheme, std::uint64_t seed, std::size_t e,
                        const EpisodeRecord& rec) {
  return cfg.scenario.name + "," + scheme + "," + std::to_string(seed) + "," + std::to_string(e) + "," +
         format_double(rec.total_time) + "," +
         format_double(rec.total_time / static_cast<double>(rec.tasks.size())) + "," +
         std::to_string(rec.infeasible_count());
}

constexpr const char* kEpisodeHeader = "scenario,scheme,seed,episode,total_time_s,mean_task_time_s,infeasible_count";

std::optional<marl::Checkpoint> maybe_checkpoint(const std::vector<std::string>& schemes, const CommandOptions& opts) {
  const bool needs = std::find(schemes.begin(), schemes.end(), "marl") != schemes.end();
  if (!needs) return std::nullopt;
  if (!opts.checkpoint) throw ConfigError("scheme marl: --checkpoint is required");
  return marl::load_checkpoint(*opts.checkpoint);
}

}  // namespace

std::string episode_json(const EpisodeRecord& rec, const std::string& scenario, const std::string& scheme,
                         std::uint64_t seed, std::size_t episode, bool include_receipts) {
  json workers = json::array();
  for (const auto& w : rec.initial_world.workers) {
    json wj = kinematics_json(w.kinematics);
    wj["beta"] = w.profile.beta;
    wj["alpha"] = w.profile.alpha;
    workers.push_back(std::move(wj));
  }
  json tasks = json::array();
  for (std::size_t j = 0; j < rec.tasks.size(); ++j) {
    const auto& t = rec.tasks[j];
    json tj = {{"index", t.index},
               {"dispatch_time_s", t.dispatch_time},
               {"completion_time_s", t.completion_time},
               {"loads", rec.loads[j].loads},
               {"actions", rec.actions[j]},
               {"reward", rec.rewards[j]},
               {"feasible", t.feasible},
               {"clamped", static_cast<bool>(rec.clamped[j])},
               {"rows_received", t.rows_received_at_completion}};
    if (t.decode_error) tj["decode_error"] = *t.decode_error;
    if (include_receipts) {
      json receipts = json::array();
      for (const auto& r : t.receipts) receipts.push_back({r.worker, r.batch, r.rows, r.arrival});
      tj["receipts"] = std::move(receipts);
    }
    tasks.push_back(std::move(tj));
  }
  json j = {{"scenario", scenario},
            {"scheme", scheme},
            {"seed", seed},
            {"episode", episode},
            {"straggler_victim", rec.straggler_victim ? json(*rec.straggler_victim) : json(nullptr)},
            {"initial_world", {{"master", kinematics_json(rec.initial_world.master)}, {"workers", workers}}},
            {"tasks", tasks},
            {"total_time_s", rec.total_time}};
  return j.dump();
}

marl::TrainResult cmd_train(const RunConfig& cfg, const CommandOptions& opts) {
  fs::create_directories(opts.out_dir);
  RunConfig run = cfg;
  run.scenario.seed = opts.seed;
  marl::TrainResult result = marl::train(run.scenario, run.train, RngStream(opts.seed).fork("train"));

  marl::save_checkpoint(opts.out_dir / "checkpoint.json", checkpoint_of(result, run.scenario));
  auto curve = open_output(opts.out_dir / "learning_curve.csv");
  write_metadata(curve, run, opts.seed, "train");
  curve << "iteration,mean_total_reward\n";
  std::vector<double> xs;
  for (std::size_t i = 0; i < result.learning_curve.size(); ++i) {
    curve << i << ',' << format_double(result.learning_curve[i]) << '\n';
    xs.push_back(static_cast<double>(i));
  }
  if (opts.svg && !xs.empty()) {
    write_text(opts.out_dir / "learning_curve.svg",
               svg_line_chart("Training reward (" + run.scenario.name + ")", xs, result.learning_curve, "iteration",
                              "mean total reward"));
  }
  return result;
}

void cmd_evaluate(const RunConfig& cfg, const std::string& scheme, std::size_t episodes, const CommandOptions& opts) {
  if (episodes == 0) throw ConfigError("--episodes: must be positive");
  const auto ckpt = maybe_checkpoint({scheme}, opts);
  fs::create_directories(opts.out_dir);
  const auto policy = make_policy(scheme, cfg, ckpt);
  const auto records = evaluate_policy(cfg, *policy, options_for(scheme, cfg), opts.seed, episodes);

  auto csv = open_output(opts.out_dir / "metrics.csv");
  auto jsonl = open_output(opts.out_dir / "episodes.jsonl");
  write_metadata(csv, cfg, opts.seed, "evaluate");
  csv << kEpisodeHeader << ",total_time_std_s\n";
  std::size_t infeasible = 0;
  double mean_task = 0.0;
  for (std::size_t e = 0; e < records.size(); ++e) {
    csv << episode_row(cfg, scheme, opts.seed, e, records[e]) << ",\n";
    jsonl << episode_json(records[e], cfg.scenario.name, scheme, opts.seed, e, opts.include_receipts) << '\n';
    infeasible += records[e].infeasible_count();
    mean_task += records[e].total_time / static_cast<double>(records[e].tasks.size());
  }
  const Summary s = summarize(total_times(records));
  csv << cfg.scenario.name << ',' << scheme << ',' << opts.seed << ",aggregate," << format_double(s.mean) << ','
      << format_double(mean_task / static_cast<double>(records.size())) << ',' << infeasible << ','
      << format_double(s.std) << '\n';
}

void cmd_compare(const RunConfig& cfg, const std::vector<std::string>& schemes, std::size_t episodes,
                 const CommandOptions& opts) {
  if (schemes.size() < 2) throw ConfigError("--schemes: compare needs at least two schemes");
  if (episodes == 0) throw ConfigError("--episodes: must be positive");
  const auto ckpt = maybe_checkpoint(schemes, opts);
  fs::create_directories(opts.out_dir);

  std::vector<std::vector<double>> totals;
  auto csv = open_output(opts.out_dir / "comparison.csv");
  auto jsonl = open_output(opts.out_dir / "episodes.jsonl");
  write_metadata(csv, cfg, opts.seed, "compare");
  csv << kEpisodeHeader << '\n';
  for (const auto& scheme : schemes) {
    const auto policy = make_policy(scheme, cfg, ckpt);
    const auto records = evaluate_policy(cfg, *policy, options_for(scheme, cfg), opts.seed, episodes);
    for (std::size_t e = 0; e < records.size(); ++e) {
      csv << episode_row(cfg, scheme, opts.seed, e, records[e]) << '\n';
      jsonl << episode_json(records[e], cfg.scenario.name, scheme, opts.seed, e, opts.include_receipts) << '\n';
    }
    totals.push_back(total_times(records));
  }

  auto summary = open_output(opts.out_dir / "comparison_summary.csv");
  write_metadata(summary, cfg, opts.seed, "compare");
  summary << "scenario,scheme,episodes,mean_total_time_s,std_total_time_s,ci95_low_s,ci95_high_s,"
             "paired_diff_vs_"
          << schemes.front() << "_s,paired_diff_ci95_low_s,paired_diff_ci95_high_s\n";
  auto plot = open_output(opts.out_dir / "comparison_plot.csv");
  write_metadata(plot, cfg, opts.seed, "compare");
  plot << "scheme,mean_time_s\n";
  std::vector<double> means;
  for (std::size_t k = 0; k < schemes.size(); ++k) {
    const Summary s = summarize(totals[k]);
    std::vector<double> diff(totals[k].size());
    for (std::size_t e = 0; e < diff.size(); ++e) diff[e] = totals[k][e] - totals[0][e];
    const Summary d = summarize(diff);
    summary << cfg.scenario.name << ',' << schemes[k] << ',' << s.n << ',' << format_double(s.mean) << ','
            << format_double(s.std) << ',' << format_double(s.ci_low) << ',' << format_double(s.ci_high) << ','
            << format_double(d.mean) << ',' << format_double(d.ci_low) << ',' << format_double(d.ci_high) << '\n';
    plot << schemes[k] << ',' << format_double(s.mean) << '\n';
    means.push_back(s.mean);
  }
  if (opts.svg) {
    write_text(opts.out_dir / "comparison.svg",
               svg_bar_chart("Mean total completion time (" + cfg.scenario.name + ")", schemes, means, "seconds"));
  }
}

void cmd_sweep_batch(const RunConfig& cfg, const std::string& scheme, const std::vector<std::int64_t>& batch_sizes,
                     std::size_t episodes, const CommandOptions& opts) {
  if (batch_sizes.empty()) throw ConfigError("--batch-sizes: at least one batch size is required");
  if (episodes == 0) throw ConfigError("--episodes: must be positive");
  for (auto b : batch_sizes) {
    if (b < 1) throw ConfigError("--batch-sizes: batch sizes must be at least 1");
  }
  const auto ckpt = maybe_checkpoint({scheme}, opts);
  fs::create_directories(opts.out_dir);
  const auto policy = make_policy(scheme, cfg, ckpt);

  auto csv = open_output(opts.out_dir / "sweep.csv");
  write_metadata(csv, cfg, opts.seed, "sweep-batch");
  csv << "scenario,scheme,seed,batch_size,episodes,mean_total_time_s,std_total_time_s,ci95_low_s,ci95_high_s\n";
  std::vector<double> xs;
  std::vector<double> ys;
  for (auto b : batch_sizes) {
    RunConfig run = cfg;
    (scheme == "marl" ? run.scenario.batch_size : run.scenario.baseline_batch_size) = b;
    const Summary s = summarize(total_times(evaluate_policy(run, *policy, options_for(scheme, run), opts.seed, episodes)));
    csv << cfg.scenario.name << ',' << scheme << ',' << opts.seed << ',' << b << ',' << episodes << ','
        << format_double(s.mean) << ',' << format_double(s.std) << ',' << format_double(s.ci_low) << ','
        << format_double(s.ci_high) << '\n';
    xs.push_back(static_cast<double>(b));
    ys.push_back(s.mean);
  }
  if (opts.svg) {
    write_text(opts.out_dir / "sweep.svg",
               svg_line_chart("Total completion time vs batch size (" + scheme + ")", xs, ys, "batch size", "seconds"));
  }
}

}  // namespace mahc
