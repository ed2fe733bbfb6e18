#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mahc/marl/formulation.hpp"
#include "mahc/marl/mlp.hpp"

namespace mahc::marl {

inline constexpr int kCheckpointVersion = 1;

/// Trained networks plus the state normalization they were trained with.
struct Checkpoint {
  std::size_t n_workers = 0;
  StateScales scales;
  std::vector<Mlp> actors;
  std::vector<Mlp> critics;
};

/// JSON container: {"format", "version", "n_workers", "state_scales",
/// "agents": [{"actor": net, "critic": net}]}; each net lists layers with
/// "in", "out", "activation", row-major "weight" and "bias".
std::string checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace mahc::marl
