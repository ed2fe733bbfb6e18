#include "mahc/rng.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mahc/errors.hpp"

namespace mahc {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(splitmix64(splitmix64(seed) ^ (stream_id * kGolden + 1))) {}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return splitmix64(key_ + counter_ * kGolden);
}

double RngStream::next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

RngStream RngStream::fork(std::uint64_t child_id) const { return RngStream(key_, child_id); }

RngStream RngStream::fork(std::string_view label) const { return fork(fnv1a64(label)); }

double sample_uniform(double lo, double hi, RngStream& rng) {
  if (!(lo <= hi)) {
    throw InvalidInput("sample_uniform: lo " + std::to_string(lo) + " exceeds hi " + std::to_string(hi));
  }
  if (lo == hi) return lo;
  const double v = lo + (hi - lo) * rng.next_double();
  return v < hi ? v : lo;
}

double sample_gaussian(double mean, double std, RngStream& rng) {
  if (!(std >= 0.0)) throw InvalidInput("sample_gaussian: negative std " + std::to_string(std));
  if (std == 0.0) return mean;
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - rng.next_double();
  const double u2 = rng.next_double();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + std * z;
}

std::uint64_t sample_index(std::uint64_t n, RngStream& rng) {
  if (n == 0) throw InvalidInput("sample_index: empty range");
  // Lemire-style multiply-shift; bias is below 2^-64 * n and irrelevant here.
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng.next_u64()) * n) >> 64);
}

}  // namespace mahc
