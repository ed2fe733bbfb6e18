#pragma once

#include <cstdint>
#include <string_view>

namespace mahc {

/// Counter-based random stream keyed by (seed, stream id).
///
/// Draw k of a stream is a SplitMix64 finalizer applied to
/// key + (k + 1) * golden-ratio increment, so the sequence depends only on the
/// key and integer arithmetic. `fork` derives an independent child key, which
/// lets every (episode, task, worker, batch) event own a reproducible substream
/// regardless of the order in which other events consume randomness.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 bits of resolution.
  double next_double();

  RngStream fork(std::uint64_t child_id) const;
  RngStream fork(std::string_view label) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;
/// FNV-1a, used for labels and config hashes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

double sample_uniform(double lo, double hi, RngStream& rng);
/// Box-Muller from two uniform draws; std == 0 returns mean without drawing.
double sample_gaussian(double mean, double std, RngStream& rng);
/// Uniform integer in [0, n).
std::uint64_t sample_index(std::uint64_t n, RngStream& rng);

}  // namespace mahc
