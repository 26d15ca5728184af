#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace ppsim {

// Child seed `index` of a master seed. Equals the index-th output of a
// SplitMix64 stream started at `master`, so sub-streams derived from one
// master are decorrelated from it and from each other. All reproducible
// runs derive their source/mux/trial seeds through this single function.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// Fixed derivation slots. A study derives one child per role so that a
// single master seed pins every stream in the run.
namespace seed_role {
inline constexpr std::uint64_t kSourceF = 0;
inline constexpr std::uint64_t kSourceB = 1;
inline constexpr std::uint64_t kMux = 2;
// Per-case masters start at kCaseBase + case_index; per-trial masters are
// derived from the case master by trial index.
inline constexpr std::uint64_t kCaseBase = 16;
}  // namespace seed_role

// xoshiro256** seeded through SplitMix64 state expansion. The algorithm is
// fixed here (not delegated to <random>) so emitted sequences are identical
// across platforms and standard-library implementations.
class SeededGenerator {
 public:
  explicit SeededGenerator(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit();

  // One Bernoulli(p) draw, 1 with probability p. p is assumed in [0, 1];
  // stream-level entry points validate it.
  std::uint8_t bernoulli(double p);

  // Index draw against a cumulative weight vector (back() == 1).
  std::uint32_t categorical(std::span<const double> cumulative);

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

}  // namespace ppsim
