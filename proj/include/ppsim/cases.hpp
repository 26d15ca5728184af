#pragma once

#include <cstdint>
#include <span>

#include "ppsim/router.hpp"

namespace ppsim {

// One verification setup: operation plus the two source probabilities.
struct CaseSetup {
  OpKind op = OpKind::Multiplication;
  double p_f = 0.0;
  double p_b = 0.0;
};

// The 16 standard verification cases: indices 0..7 multiplication,
// 8..15 addition, over a shared grid of (p_f, p_b) pairs.
std::span<const CaseSetup> verification_cases();

// Normalized output target: p_f * p_b for multiplication and
// (p_f + p_b) / 2 for addition (equally weighted mux).
double case_target(const CaseSetup& setup);

// Master seed used by the CLI and the default studies when none is given.
inline constexpr std::uint64_t kDefaultMasterSeed = 13;

}  // namespace ppsim
