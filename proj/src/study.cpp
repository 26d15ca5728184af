#include "ppsim/study.hpp"

#include <cmath>
#include <stdexcept>

namespace ppsim {

CaseRunOutcome run_case(const CaseSetup& setup, double duration_s,
                        std::uint64_t master_seed,
                        const ElectricalParams& params,
                        const BufferConfig& buffer,
                        const WaveformModel& waveform) {
  params.validate();
  const auto n_slots =
      static_cast<std::size_t>(std::llround(duration_s * params.clock_hz));
  if (n_slots == 0) {
    throw std::invalid_argument("duration shorter than one slot");
  }

  SeededGenerator gen_f(derive_seed(master_seed, seed_role::kSourceF));
  SeededGenerator gen_b(derive_seed(master_seed, seed_role::kSourceB));
  Router router({setup.op, 0.5}, buffer,
                derive_seed(master_seed, seed_role::kMux));

  CaseRunOutcome out;
  out.setup = setup;
  out.n_slots = n_slots;
  const BitStream f = bernoulli_stream(setup.p_f, n_slots, gen_f);
  const BitStream b = bernoulli_stream(setup.p_b, n_slots, gen_b);
  RunResult run = router.run_sequence(f, b);
  out.traces = std::move(run.traces);
  out.channels = synthesize_waveform(out.traces, params, waveform);
  out.average_w = out.channels.load.mean();
  out.base_w = normalization_base_power(params, duration_s, waveform);
  out.normalized_average = out.average_w / out.base_w;
  out.target = case_target(setup);
  return out;
}

}  // namespace ppsim
