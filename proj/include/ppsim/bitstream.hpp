#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ppsim/rng.hpp"

namespace ppsim {

// 1 = power packet present in the interval, 0 = absent.
using Bit = std::uint8_t;

// Exact packet density of a stream: ones / length as an integer pair, so
// long runs decode without floating-point accumulation error.
struct Density {
  std::uint64_t ones = 0;
  std::uint64_t length = 0;

  double ratio() const {
    return static_cast<double>(ones) / static_cast<double>(length);
  }
};

// Finite 0/1 sequence in the unipolar stochastic-number encoding: the
// stream's 1-density is the value it represents. nominal_p records the
// generating probability when the stream came from a Bernoulli draw; it is
// metadata and does not participate in equality.
class BitStream {
 public:
  BitStream() = default;
  explicit BitStream(std::vector<Bit> bits,
                     std::optional<double> nominal_p = std::nullopt);

  // Parses a string of '0'/'1' characters.
  static BitStream from_string(std::string_view text);
  std::string to_string() const;

  // Packed binary form, MSB-first within each byte. Bit count is carried
  // separately (golden files store it alongside).
  std::vector<std::uint8_t> pack() const;
  static BitStream unpack(std::span<const std::uint8_t> bytes,
                          std::size_t n_bits);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  Bit operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<Bit>& bits() const { return bits_; }
  void push_back(Bit b);
  void reserve(std::size_t n) { bits_.reserve(n); }

  // Empirical value: exact ones/length. Throws on an empty stream.
  Density value() const;

  std::optional<double> nominal_p() const { return nominal_p_; }

  friend bool operator==(const BitStream& a, const BitStream& b) {
    return a.bits_ == b.bits_;
  }

 private:
  std::vector<Bit> bits_;
  std::optional<double> nominal_p_;
};

// Length-n stream with independent Bernoulli(p) bits. Deterministic given
// the generator's seed. Throws std::invalid_argument for p outside [0, 1].
BitStream bernoulli_stream(double p, std::size_t n, SeededGenerator& gen);

// Bitwise AND; realizes multiplication of the represented values for
// independent inputs. Lengths must match.
BitStream and_multiply(const BitStream& a, const BitStream& b);

// Multiplexer: out[i] = sel[i] ? a[i] : b[i], i.e. (a & sel) | (b & ~sel).
// Realizes the weighted addition p_a*p_sel + p_b*(1 - p_sel).
BitStream mux_add(const BitStream& a, const BitStream& b,
                  const BitStream& sel);

// AND across all inputs (>= 2 streams, equal lengths).
BitStream and_multiply_n(std::span<const BitStream> streams);

// Categorical selector stream over k alternatives. weights must have k >= 2
// non-negative entries summing to 1 within 1e-12.
std::vector<std::uint32_t> categorical_stream(std::span<const double> weights,
                                              std::size_t n,
                                              SeededGenerator& gen);

// k-ary multiplexer: out[i] = streams[selector[i]][i].
BitStream mux_add_n(std::span<const BitStream> streams,
                    std::span<const std::uint32_t> selector);

// Convenience form that draws the categorical selector from `weights`.
BitStream mux_add_n(std::span<const BitStream> streams,
                    std::span<const double> weights, SeededGenerator& gen);

}  // namespace ppsim
