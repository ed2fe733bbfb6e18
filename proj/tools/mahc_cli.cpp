#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "mahc/config.hpp"
#include "mahc/experiments.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> straggler;
  std::string checkpoint;
  std::string out = ".";
  bool receipts = false;
  bool no_svg = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Run configuration file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Seed (defaults to scenario.seed)");
  cmd->add_option("--straggler", f.straggler, "Inject one straggler per episode")->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_flag("--no-svg", f.no_svg, "Skip SVG chart output");
}

mahc::RunConfig resolve(const CommonFlags& f, mahc::CommandOptions& opts) {
  mahc::RunConfig cfg = mahc::load_config(f.config);
  if (f.straggler) cfg.scenario.straggler_enabled = *f.straggler == "on";
  if (f.seed) cfg.scenario.seed = *f.seed;
  opts.seed = cfg.scenario.seed;
  opts.out_dir = f.out;
  opts.include_receipts = f.receipts;
  opts.svg = !f.no_svg;
  if (!f.checkpoint.empty()) opts.checkpoint = f.checkpoint;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coded distributed matrix-vector multiplication over mobile workers with learned load allocation"};
  app.require_subcommand(1);

  CommonFlags train_flags;
  auto* train = app.add_subcommand("train", "Train MADDPG allocation policies");
  add_common(train, train_flags);

  CommonFlags eval_flags;
  std::string eval_scheme;
  std::optional<std::size_t> eval_episodes;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one allocation scheme");
  add_common(evaluate, eval_flags);
  evaluate->add_option("--scheme", eval_scheme, "uniform|load-balanced|hcmm|marl")->required();
  evaluate->add_option("--episodes", eval_episodes, "Episodes (defaults to eval.episodes)");
  evaluate->add_option("--checkpoint", eval_flags.checkpoint, "Checkpoint for the marl scheme");
  evaluate->add_flag("--receipts", eval_flags.receipts, "Log every result arrival in episodes.jsonl");

  CommonFlags cmp_flags;
  std::vector<std::string> cmp_schemes;
  std::optional<std::size_t> cmp_episodes;
  auto* compare = app.add_subcommand("compare", "Paired comparison of several schemes");
  add_common(compare, cmp_flags);
  compare->add_option("--schemes,--scheme", cmp_schemes, "Schemes to compare")->required()->delimiter(',');
  compare->add_option("--episodes", cmp_episodes, "Episodes (defaults to eval.episodes)");
  compare->add_option("--checkpoint", cmp_flags.checkpoint, "Checkpoint for the marl scheme");
  compare->add_flag("--receipts", cmp_flags.receipts, "Log every result arrival in episodes.jsonl");

  CommonFlags sweep_flags;
  std::string sweep_scheme = "marl";
  std::vector<std::int64_t> batch_sizes;
  std::optional<std::size_t> sweep_episodes;
  auto* sweep = app.add_subcommand("sweep-batch", "Completion time as a function of batch size");
  add_common(sweep, sweep_flags);
  sweep->add_option("--scheme", sweep_scheme, "Scheme to sweep");
  sweep->add_option("--batch-sizes", batch_sizes, "Batch sizes")->required()->delimiter(',');
  sweep->add_option("--episodes", sweep_episodes, "Episodes (defaults to eval.episodes)");
  sweep->add_option("--checkpoint", sweep_flags.checkpoint, "Checkpoint for the marl scheme");

  CLI11_PARSE(app, argc, argv);

  try {
    mahc::CommandOptions opts;
    if (*train) {
      const auto cfg = resolve(train_flags, opts);
      const auto result = mahc::cmd_train(cfg, opts);
      std::cout << "trained " << result.learning_curve.size() << " iterations; final mean total reward "
                << (result.learning_curve.empty() ? 0.0 : result.learning_curve.back()) << "\n";
    } else if (*evaluate) {
      const auto cfg = resolve(eval_flags, opts);
      mahc::cmd_evaluate(cfg, eval_scheme, eval_episodes.value_or(cfg.eval_episodes), opts);
    } else if (*compare) {
      const auto cfg = resolve(cmp_flags, opts);
      mahc::cmd_compare(cfg, cmp_schemes, cmp_episodes.value_or(cfg.eval_episodes), opts);
    } else if (*sweep) {
      const auto cfg = resolve(sweep_flags, opts);
      mahc::cmd_sweep_batch(cfg, sweep_scheme, batch_sizes, sweep_episodes.value_or(cfg.eval_episodes), opts);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
