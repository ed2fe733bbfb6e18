#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mahc/config.hpp"
#include "mahc/episode.hpp"
#include "mahc/marl/checkpoint.hpp"
#include "mahc/marl/trainer.hpp"

namespace mahc {

std::vector<std::string> scheme_names();

/// Builds the allocation policy for a scheme; "marl" needs a checkpoint.
std::unique_ptr<AllocationPolicy> make_policy(const std::string& scheme, const RunConfig& cfg,
                                              const std::optional<marl::Checkpoint>& checkpoint);

/// Batch size and reward settings a scheme runs with under `cfg`.
EpisodeOptions options_for(const std::string& scheme, const RunConfig& cfg);

/// Stream for evaluation episode `episode`; shared by every scheme so
/// comparisons are paired.
RngStream evaluation_rng(std::uint64_t seed, std::size_t episode);

std::vector<EpisodeRecord> evaluate_policy(const RunConfig& cfg, const AllocationPolicy& policy,
                                           const EpisodeOptions& options, std::uint64_t seed, std::size_t episodes);

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Mean with a 95% normal-approximation interval.
Summary summarize(const std::vector<double>& values);
std::vector<double> total_times(const std::vector<EpisodeRecord>& records);

marl::Checkpoint checkpoint_of(const marl::TrainResult& result, const ScenarioConfig& scenario);

/// Writes one EpisodeRecord as a JSON object on a single line.
std::string episode_json(const EpisodeRecord& rec, const std::string& scenario, const std::string& scheme,
                         std::uint64_t seed, std::size_t episode, bool include_receipts);

struct CommandOptions {
  std::uint64_t seed = 1;
  std::filesystem::path out_dir = ".";
  std::optional<std::filesystem::path> checkpoint;
  bool include_receipts = false;
  bool svg = true;
};

/// learning_curve.csv (iteration, mean_total_reward) and checkpoint.json.
marl::TrainResult cmd_train(const RunConfig& cfg, const CommandOptions& opts);
/// metrics.csv: one row per episode plus an aggregate row; episodes.jsonl.
void cmd_evaluate(const RunConfig& cfg, const std::string& scheme, std::size_t episodes, const CommandOptions& opts);
/// comparison.csv, comparison_summary.csv, comparison_plot.csv, episodes.jsonl.
void cmd_compare(const RunConfig& cfg, const std::vector<std::string>& schemes, std::size_t episodes,
                 const CommandOptions& opts);
/// sweep.csv: one row per batch size with paired episodes.
void cmd_sweep_batch(const RunConfig& cfg, const std::string& scheme, const std::vector<std::int64_t>& batch_sizes,
                     std::size_t episodes, const CommandOptions& opts);

}  // namespace mahc
