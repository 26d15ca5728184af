#include "ppsim/rng.hpp"

namespace ppsim {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // SplitMix64 output at position `index` of the stream seeded by `master`.
  return mix64(master + kGamma * (index + 1));
}

SeededGenerator::SeededGenerator(std::uint64_t seed) : seed_(seed) {
  for (std::size_t i = 0; i < state_.size(); ++i) {
    state_[i] = derive_seed(seed, i);
  }
  // xoshiro must not start from the all-zero state.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
    state_[0] = kGamma;
  }
}

std::uint64_t SeededGenerator::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double SeededGenerator::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint8_t SeededGenerator::bernoulli(double p) {
  return next_unit() < p ? 1 : 0;
}

std::uint32_t SeededGenerator::categorical(std::span<const double> cumulative) {
  const double u = next_unit();
  for (std::uint32_t j = 0; j + 1 < cumulative.size(); ++j) {
    if (u < cumulative[j]) {
      return j;
    }
  }
  return static_cast<std::uint32_t>(cumulative.size() - 1);
}

}  // namespace ppsim
