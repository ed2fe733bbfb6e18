#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mahc/marl/maddpg.hpp"
#include "mahc/scenario.hpp"

namespace mahc {

/// Fully resolved run configuration.
struct RunConfig {
  ScenarioConfig scenario;
  marl::TrainConfig train;
  std::size_t eval_episodes = 20;

  /// Sorted `key = value` dump of every resolved setting.
  std::string canonical() const;
  std::uint64_t hash() const;
};

/// Named presets: scenario1..scenario3 (full scale), desk, desk3.
ScenarioConfig scenario_preset(const std::string& name);
std::vector<std::string> preset_names();

/// Parses the sectioned key-value format:
///
///     # comment
///     preset = "scenario1"
///     [scenario]
///     rows = 100
///     [comm]
///     noise_std_db = 0.0
///
/// Values are double-quoted strings, numbers or true/false. Unknown keys,
/// duplicate keys and type mismatches are errors naming the key path. Without
/// a preset, scenario.workers/rows/cols/tasks are required.
RunConfig parse_config(std::string_view text, const std::string& origin = "<string>");
RunConfig load_config(const std::filesystem::path& path);

}  // namespace mahc
