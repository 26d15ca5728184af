#pragma once

// Exact rational arithmetic for test oracles.

#include <boost/rational.hpp>
#include <cstdint>

namespace ppsim_test {

using Rat = boost::rational<long long>;

// Expected output bit value of a two-input logic stage, enumerated over the
// eight joint outcomes of independent (s1, s2, mux). `bit` maps one outcome
// to {0, 1}.
template <typename BitFn>
Rat joint_expectation(Rat p1, Rat p2, Rat pm, BitFn bit) {
  Rat total(0);
  for (int s1 = 0; s1 <= 1; ++s1) {
    for (int s2 = 0; s2 <= 1; ++s2) {
      for (int m = 0; m <= 1; ++m) {
        const Rat prob = (s1 ? p1 : Rat(1) - p1) * (s2 ? p2 : Rat(1) - p2) *
                         (m ? pm : Rat(1) - pm);
        total += prob * Rat(bit(s1, s2, m));
      }
    }
  }
  return total;
}

}  // namespace ppsim_test
