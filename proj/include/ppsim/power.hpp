#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ppsim/router.hpp"

namespace ppsim {

// Electrical setup of the source/router/load circuit. One slot lasts one
// controller clock period and holds the two half-intervals f and b.
struct ElectricalParams {
  double v_source = 10.0;   // volts
  double r_load = 20.0;     // ohms
  double clock_hz = 25000.0;

  double slot_s() const { return 1.0 / clock_hz; }
  double p_unit() const { return v_source * v_source / r_load; }

  void validate() const;
};

enum class WaveformKind { IdealRect, RCBuffer };

// Waveform synthesis model. IdealRect emits constant unit-power pulses at
// half-interval resolution. RCBuffer tracks the buffer capacitor voltage:
// charging relaxes it toward v_source with time constant r_charge*c_buffer,
// discharging into the load decays the delivered power as
// (v0^2/r_load)*exp(-2t/(r_load*c_buffer)). Defaults are calibrated so the
// buffer recharges within one interval and sags only a few percent per
// discharge, keeping long-run averages of the two models within 2%.
struct WaveformModel {
  WaveformKind kind = WaveformKind::IdealRect;
  double c_buffer = 1e-4;   // farads
  double r_charge = 0.02;   // ohms
  double sample_dt = 1e-6;  // seconds, RCBuffer only

  void validate(const ElectricalParams& params) const;
};

// Uniformly sampled power trace. Samples are watts, or a dimensionless
// ratio after normalization.
struct PowerSeries {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> samples;
  bool normalized = false;
  double base_power = 0.0;

  double mean() const;
};

// The four measured flows: input on path f (buffer charging), input on
// path b (direct), buffer output, direct output. load = out_f + out_b is
// the power delivered to the load.
struct PowerChannels {
  PowerSeries in_f;
  PowerSeries in_b;
  PowerSeries out_f;
  PowerSeries out_b;
  PowerSeries load;
};

// Maps a contiguous slot trace to electrical waveforms. Throws if the
// traces are not consecutive slots.
PowerChannels synthesize_waveform(std::span<const SlotTrace> traces,
                                  const ElectricalParams& params,
                                  const WaveformModel& model);

// Non-overlapping (tumbling) window means. The window is rounded to an
// integer number of samples; a trailing partial window is dropped.
PowerSeries average_power(const PowerSeries& series, double window_s);

// Trailing moving average over a window rounded to an integer number of
// samples; windows grow from one sample at the start of the series.
PowerSeries moving_average(const PowerSeries& series, double window_s);

// Divides samples by `base` (> 0) and records it.
PowerSeries normalize(const PowerSeries& series, double base);

// Average load power of a run with both sources always on, which defines
// the base value for normalized outputs. Synthesized with IdealRect unless
// a model is given.
double normalization_base_power(const ElectricalParams& params,
                                double duration_s = 0.4,
                                const WaveformModel& model = {});

}  // namespace ppsim
