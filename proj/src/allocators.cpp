#include "mahc/allocators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mahc/errors.hpp"

namespace mahc {

namespace {

std::vector<double> as_fractions(const LoadAllocation& a, std::int64_t p) {
  std::vector<double> f;
  f.reserve(a.loads.size());
  for (auto l : a.loads) f.push_back(static_cast<double>(l) / static_cast<double>(p));
  return f;
}

void require_profiles(std::span<const ComputeProfile> profiles) {
  if (profiles.empty()) throw InvalidInput("allocator: no workers");
  for (const auto& pr : profiles) {
    if (!(pr.alpha > 0.0) || !(pr.beta > 0.0)) throw InvalidInput("allocator: alpha and beta must be positive");
  }
}

}  // namespace

std::vector<ComputeProfile> profiles_of(const WorldState& world) {
  std::vector<ComputeProfile> out;
  out.reserve(world.n_workers());
  for (const auto& w : world.workers) out.push_back(w.profile);
  return out;
}

LoadAllocation uniform_alloc(std::int64_t p, std::size_t n_workers) {
  if (n_workers == 0) throw InvalidInput("uniform_alloc: no workers");
  if (p < 1) throw InvalidInput("uniform_alloc: p must be positive");
  const auto n = static_cast<std::int64_t>(n_workers);
  LoadAllocation a;
  a.loads.assign(n_workers, p / n);
  for (std::int64_t i = 0; i < p % n; ++i) ++a.loads[static_cast<std::size_t>(i)];
  return a;
}

LoadAllocation load_balanced_alloc(std::int64_t p, std::span<const ComputeProfile> profiles) {
  require_profiles(profiles);
  std::vector<double> w;
  w.reserve(profiles.size());
  for (const auto& pr : profiles) w.push_back(pr.beta / (pr.alpha * pr.beta + 1.0));
  const double total = std::accumulate(w.begin(), w.end(), 0.0);

  LoadAllocation a;
  std::vector<double> remainder;
  std::int64_t assigned = 0;
  for (double wi : w) {
    const double real = static_cast<double>(p) * wi / total;
    const auto floor = static_cast<std::int64_t>(std::floor(real));
    a.loads.push_back(floor);
    remainder.push_back(real - static_cast<double>(floor));
    assigned += floor;
  }
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return remainder[x] > remainder[y]; });
  for (std::size_t k = 0; assigned < p; ++k, ++assigned) ++a.loads[order[k % order.size()]];
  return a;
}

double solve_hcmm_lambda(const ComputeProfile& profile) {
  if (!(profile.alpha > 0.0) || !(profile.beta > 0.0)) {
    throw InvalidInput("solve_hcmm_lambda: alpha and beta must be positive");
  }
  const double ab = profile.alpha * profile.beta;
  auto g = [ab](double z) { return z - ab - std::log1p(z); };

  double lo = 0.0;
  double hi = 1.0;
  for (int grow = 0; g(hi) <= 0.0; ++grow) {
    if (grow > 2000 || !std::isfinite(hi)) throw SolverError("solve_hcmm_lambda: failed to bracket the root");
    lo = hi;
    hi *= 2.0;
  }
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 2000; ++it) {
    z = 0.5 * (lo + hi);
    const double gz = g(z);
    if (std::abs(gz) <= 1e-12 || z == lo || z == hi) break;
    (gz < 0.0 ? lo : hi) = z;
  }
  if (!(z > 0.0)) throw SolverError("solve_hcmm_lambda: root collapsed to zero");
  return z / profile.beta;
}

HcmmSolution solve_hcmm(std::int64_t p, std::span<const ComputeProfile> profiles) {
  require_profiles(profiles);
  if (p < 1) throw InvalidInput("hcmm_alloc: p must be positive");
  HcmmSolution s;
  for (const auto& pr : profiles) {
    const double lambda = solve_hcmm_lambda(pr);
    s.lambda.push_back(lambda);
    s.h += pr.beta / (1.0 + pr.beta * lambda);
  }
  for (double lambda : s.lambda) {
    const double real = static_cast<double>(p) / (s.h * lambda);
    s.real_loads.push_back(real);
    s.loads.loads.push_back(std::min<std::int64_t>(static_cast<std::int64_t>(std::ceil(real)), p));
  }
  // Rounding and the cap can only matter in degenerate profiles.
  // Bump the largest load that is still below the cap.
  auto& loads = s.loads.loads;
  while (s.loads.total() < p) {
    auto best = loads.end();
    for (auto it = loads.begin(); it != loads.end(); ++it) {
      if (*it < p && (best == loads.end() || *it > *best)) best = it;
    }
    ++*best;
  }
  return s;
}

LoadAllocation hcmm_alloc(std::int64_t p, std::span<const ComputeProfile> profiles) { return solve_hcmm(p, profiles).loads; }

LoadAllocation policy_alloc(std::span<const marl::Mlp> actors, const marl::JointState& normalized_states,
                            std::int64_t p) {
  if (actors.size() != normalized_states.size()) {
    throw InvalidInput("policy_alloc: " + std::to_string(actors.size()) + " actors for " +
                       std::to_string(normalized_states.size()) + " states");
  }
  LoadAllocation a;
  for (std::size_t i = 0; i < actors.size(); ++i) {
    if (normalized_states[i].size() != actors[i].input_dim()) throw InvalidInput("policy_alloc: state dimension mismatch");
    const double out = actors[i].forward(normalized_states[i])(0, 0);
    a.loads.push_back(std::clamp<std::int64_t>(std::llround(static_cast<double>(p) * out), 0, p));
  }
  return a;
}

AllocationDecision UniformPolicy::allocate(const AllocationRequest& req, RngStream&) const {
  LoadAllocation a = uniform_alloc(req.p, req.world.n_workers());
  auto f = as_fractions(a, req.p);
  return {std::move(a), std::move(f)};
}

AllocationDecision LoadBalancedPolicy::allocate(const AllocationRequest& req, RngStream&) const {
  const auto profiles = profiles_of(req.world);
  LoadAllocation a = load_balanced_alloc(req.p, profiles);
  auto f = as_fractions(a, req.p);
  return {std::move(a), std::move(f)};
}

AllocationDecision HcmmPolicy::allocate(const AllocationRequest& req, RngStream&) const {
  const auto profiles = profiles_of(req.world);
  LoadAllocation a = hcmm_alloc(req.p, profiles);
  auto f = as_fractions(a, req.p);
  return {std::move(a), std::move(f)};
}

ActorPolicy::ActorPolicy(std::shared_ptr<const std::vector<marl::Mlp>> actors, marl::StateScales scales,
                         double noise_std)
    : actors_(std::move(actors)), scales_(scales), noise_std_(noise_std) {
  if (!actors_ || actors_->empty()) throw InvalidInput("ActorPolicy: no actors");
}

AllocationDecision ActorPolicy::allocate(const AllocationRequest& req, RngStream& rng) const {
  const std::size_t n = req.joint_state.size();
  if (n != actors_->size()) throw InvalidInput("ActorPolicy: actor count does not match worker count");
  AllocationDecision d;
  for (std::size_t i = 0; i < n; ++i) {
    const auto s = marl::normalize_state(req.joint_state[i], n, scales_);
    const auto& actor = (*actors_)[i];
    if (s.size() != actor.input_dim()) throw InvalidInput("ActorPolicy: state dimension mismatch");
    double a = actor.forward(s)(0, 0);
    if (noise_std_ > 0.0) a = std::clamp(a + sample_gaussian(0.0, noise_std_, rng), 0.0, 1.0);
    d.actions.push_back(a);
    d.loads.loads.push_back(std::clamp<std::int64_t>(std::llround(static_cast<double>(req.p) * a), 0, req.p));
  }
  return d;
}

}  // namespace mahc
