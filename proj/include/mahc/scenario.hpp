#pragma once

#include <cstdint>
#include <string>

#include "mahc/envmodels.hpp"

namespace mahc {

enum class AlphaRule {
  /// alpha_i = 1 / beta_i
  InverseBeta,
  Fixed,
};

/// Everything needed to sample and simulate an episode.
struct ScenarioConfig {
  std::string name = "custom";
  std::size_t n_workers = 0;
  std::int64_t p = 0;
  std::int64_t m = 0;
  std::size_t k_tasks = 0;

  /// Initial positions are uniform in [-position_range, position_range]^2.
  double position_range = 100.0;
  /// Velocities are uniform in [-velocity_range, velocity_range]^2, in m/s.
  double velocity_range = 10.0;
  double beta_min = 1e4;
  double beta_max = 1e5;
  AlphaRule alpha_rule = AlphaRule::InverseBeta;
  double alpha_fixed = 1e-4;
  bool master_moves = true;

  CommConfig comm;

  bool straggler_enabled = false;
  double slowdown_factor = 10.0;

  /// Batch size of the learned (coded, batch-processing) scheme.
  std::int64_t batch_size = 1;
  /// Batch size of the baseline schemes; 0 returns each load in one message.
  std::int64_t baseline_batch_size = 0;

  std::uint64_t seed = 1;
  /// Materialize A, G, A_hat and decode every task.
  bool verify = false;

  void validate() const;
};

}  // namespace mahc
