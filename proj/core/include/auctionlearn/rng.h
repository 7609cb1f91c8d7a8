#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace auctionlearn {

// 64-bit Mersenne Twister with a portable uniform transform, so draws are
// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; decorrelates nearby seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream for bidder `index` of a run: master seed plus a fixed per-bidder
// offset, so adding bidders never reshuffles existing bidders' draws.
constexpr std::uint64_t bidder_stream_seed(std::uint64_t master, std::size_t index) {
  return mix_seed(master + 0x100000001b3ULL * (static_cast<std::uint64_t>(index) + 1));
}

}  // namespace auctionlearn
