#pragma once

#include <cstdint>
#include <vector>

#include "ppsim/cases.hpp"
#include "ppsim/power.hpp"
#include "ppsim/router.hpp"

namespace ppsim {

struct CaseRunOutcome {
  CaseSetup setup;
  std::size_t n_slots = 0;
  std::vector<SlotTrace> traces;
  PowerChannels channels;
  double average_w = 0.0;
  double base_w = 0.0;
  double normalized_average = 0.0;
  double target = 0.0;
};

// One fixed-seed verification run: simulate the case for `duration_s`,
// synthesize waveforms, and average the load power over the whole run.
// Source and mux seeds are derived from `master_seed` by role; the
// normalization base comes from a separate all-on run of equal duration.
CaseRunOutcome run_case(const CaseSetup& setup, double duration_s,
                        std::uint64_t master_seed,
                        const ElectricalParams& params = {},
                        const BufferConfig& buffer = {},
                        const WaveformModel& waveform = {});

}  // namespace ppsim
