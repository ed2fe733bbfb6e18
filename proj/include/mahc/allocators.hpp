#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mahc/episode.hpp"
#include "mahc/marl/formulation.hpp"
#include "mahc/marl/mlp.hpp"

namespace mahc {

/// Equal split; the first (p mod N) workers take one extra row.
LoadAllocation uniform_alloc(std::int64_t p, std::size_t n_workers);

/// Loads proportional to beta / (alpha beta + 1), rounded by largest remainder to sum to p.
LoadAllocation load_balanced_alloc(std::int64_t p, std::span<const ComputeProfile> profiles);

/// Positive root lambda of exp(beta lambda) = exp(alpha beta) (beta lambda + 1).
///
/// Solved for z = beta * lambda by bisection on z - alpha beta - ln(1 + z),
/// which is negative at 0 and strictly increasing, so the bracket [0, hi] is
/// grown geometrically until the sign changes.
double solve_hcmm_lambda(const ComputeProfile& profile);

struct HcmmSolution {
  std::vector<double> lambda;
  double h = 0.0;
  /// p / (h lambda_i) before rounding.
  std::vector<double> real_loads;
  LoadAllocation loads;
};

HcmmSolution solve_hcmm(std::int64_t p, std::span<const ComputeProfile> profiles);
LoadAllocation hcmm_alloc(std::int64_t p, std::span<const ComputeProfile> profiles);

/// clamp(round(p * output_i), 0, p) for each actor's output on its own state.
LoadAllocation policy_alloc(std::span<const marl::Mlp> actors, const marl::JointState& normalized_states,
                            std::int64_t p);

class UniformPolicy final : public AllocationPolicy {
 public:
  std::string name() const override { return "uniform"; }
  CodingMode coding() const override { return CodingMode::Uncoded; }
  AllocationDecision allocate(const AllocationRequest& req, RngStream& rng) const override;
};

class LoadBalancedPolicy final : public AllocationPolicy {
 public:
  std::string name() const override { return "load-balanced"; }
  CodingMode coding() const override { return CodingMode::Uncoded; }
  AllocationDecision allocate(const AllocationRequest& req, RngStream& rng) const override;
};

class HcmmPolicy final : public AllocationPolicy {
 public:
  std::string name() const override { return "hcmm"; }
  CodingMode coding() const override { return CodingMode::Coded; }
  AllocationDecision allocate(const AllocationRequest& req, RngStream& rng) const override;
};

/// Decentralized allocation from trained actors, optionally with Gaussian
/// exploration noise on the [0, 1] action (clipped back into range).
class ActorPolicy final : public AllocationPolicy {
 public:
  ActorPolicy(std::shared_ptr<const std::vector<marl::Mlp>> actors, marl::StateScales scales,
              double noise_std = 0.0);

  std::string name() const override { return "marl"; }
  CodingMode coding() const override { return CodingMode::Coded; }
  AllocationDecision allocate(const AllocationRequest& req, RngStream& rng) const override;

 private:
  std::shared_ptr<const std::vector<marl::Mlp>> actors_;
  marl::StateScales scales_;
  double noise_std_;
};

std::vector<ComputeProfile> profiles_of(const WorldState& world);

}  // namespace mahc
