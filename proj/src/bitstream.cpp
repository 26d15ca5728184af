#include "ppsim/bitstream.hpp"

#include <cmath>
#include <stdexcept>

namespace ppsim {

namespace {

void check_bit(Bit b) {
  if (b != 0 && b != 1) {
    throw std::invalid_argument("bit value must be 0 or 1");
  }
}

void check_same_length(std::size_t a, std::size_t b) {
  if (a != b) {
    throw std::invalid_argument("bitstream length mismatch");
  }
}

}  // namespace

BitStream::BitStream(std::vector<Bit> bits, std::optional<double> nominal_p)
    : bits_(std::move(bits)), nominal_p_(nominal_p) {
  for (Bit b : bits_) {
    check_bit(b);
  }
  if (nominal_p_ && (*nominal_p_ < 0.0 || *nominal_p_ > 1.0)) {
    throw std::invalid_argument("nominal probability outside [0, 1]");
  }
}

BitStream BitStream::from_string(std::string_view text) {
  std::vector<Bit> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c == '0') {
      bits.push_back(0);
    } else if (c == '1') {
      bits.push_back(1);
    } else {
      throw std::invalid_argument("bitstream string may contain only 0 and 1");
    }
  }
  return BitStream(std::move(bits));
}

std::string BitStream::to_string() const {
  std::string out;
  out.reserve(bits_.size());
  for (Bit b : bits_) {
    out.push_back(b ? '1' : '0');
  }
  return out;
}

std::vector<std::uint8_t> BitStream::pack() const {
  std::vector<std::uint8_t> bytes((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) {
      bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
  }
  return bytes;
}

BitStream BitStream::unpack(std::span<const std::uint8_t> bytes,
                            std::size_t n_bits) {
  if (bytes.size() != (n_bits + 7) / 8) {
    throw std::invalid_argument("packed byte count does not match bit count");
  }
  std::vector<Bit> bits;
  bits.reserve(n_bits);
  for (std::size_t i = 0; i < n_bits; ++i) {
    bits.push_back((bytes[i / 8] >> (7 - i % 8)) & 1u);
  }
  return BitStream(std::move(bits));
}

void BitStream::push_back(Bit b) {
  check_bit(b);
  bits_.push_back(b);
}

Density BitStream::value() const {
  if (bits_.empty()) {
    throw std::invalid_argument("value of an empty bitstream is undefined");
  }
  Density d;
  d.length = bits_.size();
  for (Bit b : bits_) {
    d.ones += b;
  }
  return d;
}

BitStream bernoulli_stream(double p, std::size_t n, SeededGenerator& gen) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("Bernoulli probability outside [0, 1]");
  }
  std::vector<Bit> bits;
  bits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    bits.push_back(gen.bernoulli(p));
  }
  return BitStream(std::move(bits), p);
}

BitStream and_multiply(const BitStream& a, const BitStream& b) {
  check_same_length(a.size(), b.size());
  std::vector<Bit> bits;
  bits.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    bits.push_back(a[i] & b[i]);
  }
  std::optional<double> nominal;
  if (a.nominal_p() && b.nominal_p()) {
    nominal = *a.nominal_p() * *b.nominal_p();
  }
  return BitStream(std::move(bits), nominal);
}

BitStream mux_add(const BitStream& a, const BitStream& b,
                  const BitStream& sel) {
  check_same_length(a.size(), b.size());
  check_same_length(a.size(), sel.size());
  std::vector<Bit> bits;
  bits.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    bits.push_back(sel[i] ? a[i] : b[i]);
  }
  std::optional<double> nominal;
  if (a.nominal_p() && b.nominal_p() && sel.nominal_p()) {
    const double ps = *sel.nominal_p();
    nominal = *a.nominal_p() * ps + *b.nominal_p() * (1.0 - ps);
  }
  return BitStream(std::move(bits), nominal);
}

BitStream and_multiply_n(std::span<const BitStream> streams) {
  if (streams.size() < 2) {
    throw std::invalid_argument("and_multiply_n needs at least two streams");
  }
  const std::size_t n = streams.front().size();
  for (const BitStream& s : streams) {
    check_same_length(n, s.size());
  }
  std::vector<Bit> bits;
  bits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Bit acc = 1;
    for (const BitStream& s : streams) {
      acc &= s[i];
    }
    bits.push_back(acc);
  }
  std::optional<double> nominal = 1.0;
  for (const BitStream& s : streams) {
    if (!s.nominal_p()) {
      nominal.reset();
      break;
    }
    *nominal *= *s.nominal_p();
  }
  return BitStream(std::move(bits), nominal);
}

std::vector<std::uint32_t> categorical_stream(std::span<const double> weights,
                                              std::size_t n,
                                              SeededGenerator& gen) {
  if (weights.size() < 2) {
    throw std::invalid_argument("categorical selector needs k >= 2 weights");
  }
  double sum = 0.0;
  std::vector<double> cumulative;
  cumulative.reserve(weights.size());
  for (double w : weights) {
    if (w < 0.0) {
      throw std::invalid_argument("categorical weight must be non-negative");
    }
    sum += w;
    cumulative.push_back(sum);
  }
  if (std::fabs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("categorical weights must sum to 1");
  }
  cumulative.back() = 1.0;
  std::vector<std::uint32_t> selector;
  selector.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    selector.push_back(gen.categorical(cumulative));
  }
  return selector;
}

BitStream mux_add_n(std::span<const BitStream> streams,
                    std::span<const std::uint32_t> selector) {
  if (streams.size() < 2) {
    throw std::invalid_argument("mux_add_n needs at least two streams");
  }
  const std::size_t n = streams.front().size();
  for (const BitStream& s : streams) {
    check_same_length(n, s.size());
  }
  check_same_length(n, selector.size());
  std::vector<Bit> bits;
  bits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (selector[i] >= streams.size()) {
      throw std::invalid_argument("selector index out of range");
    }
    bits.push_back(streams[selector[i]][i]);
  }
  return BitStream(std::move(bits));
}

BitStream mux_add_n(std::span<const BitStream> streams,
                    std::span<const double> weights, SeededGenerator& gen) {
  if (weights.size() != streams.size()) {
    throw std::invalid_argument("one weight per stream required");
  }
  const std::size_t n = streams.empty() ? 0 : streams.front().size();
  const auto selector = categorical_stream(weights, n, gen);
  BitStream out = mux_add_n(streams, selector);
  std::optional<double> nominal = 0.0;
  for (std::size_t j = 0; j < streams.size(); ++j) {
    if (!streams[j].nominal_p()) {
      nominal.reset();
      break;
    }
    *nominal += weights[j] * *streams[j].nominal_p();
  }
  if (nominal) {
    return BitStream(out.bits(), nominal);
  }
  return out;
}

}  // namespace ppsim
