#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace normsim {

// SplitMix64 finalizer. Used to derive independent, reproducible seeds from a
// (base seed, counter) pair without any shared state.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of replication `index` under `base`. Counter based, so runs can be
// generated in any order or on any thread.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(mix64(base) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

// Named sub-streams of one run.
enum class StreamId : std::uint64_t {
  kLandscape = 1,
  kInitialConfig = 2,
  kAgentBase = 1000,  // agent p uses kAgentBase + p
};

constexpr std::uint64_t substream_seed(std::uint64_t run_seed, std::uint64_t stream) noexcept {
  return mix64(run_seed ^ mix64(stream * 0xd6e8feb86659fd93ULL));
}

// Thin wrapper over mt19937_64. The distributions are written out here
// instead of using <random>'s, whose algorithms are implementation-defined;
// traces must be bitwise identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, bound), unbiased (rejection sampling).
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  // Standard normal variate via Box-Muller (one value per call).
  double standard_normal() {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace normsim
