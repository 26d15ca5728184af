#include "ppsim/power.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ppsim {

void ElectricalParams::validate() const {
  if (!(v_source > 0.0) || !(r_load > 0.0) || !(clock_hz > 0.0)) {
    throw std::invalid_argument("electrical parameters must be positive");
  }
}

void WaveformModel::validate(const ElectricalParams& params) const {
  if (kind == WaveformKind::IdealRect) {
    return;
  }
  if (!(c_buffer > 0.0) || !(r_charge > 0.0) || !(sample_dt > 0.0)) {
    throw std::invalid_argument("waveform parameters must be positive");
  }
  if (sample_dt > params.slot_s() / 20.0) {
    throw std::invalid_argument("RC sampling step must be <= slot/20");
  }
}

double PowerSeries::mean() const {
  if (samples.empty()) {
    throw std::invalid_argument("mean of an empty power series is undefined");
  }
  const double sum = std::accumulate(samples.begin(), samples.end(), 0.0);
  return sum / static_cast<double>(samples.size());
}

namespace {

void check_contiguous(std::span<const SlotTrace> traces) {
  for (std::size_t i = 1; i < traces.size(); ++i) {
    if (traces[i].slot != traces[i - 1].slot + 1) {
      throw std::invalid_argument("slot traces are not contiguous");
    }
  }
}

PowerChannels synthesize_rect(std::span<const SlotTrace> traces,
                              const ElectricalParams& params) {
  const double half = params.slot_s() / 2.0;
  const double p_unit = params.p_unit();
  const std::size_t n = traces.size();
  const double t0 = n ? static_cast<double>(traces.front().slot) * params.slot_s() : 0.0;

  PowerChannels ch;
  for (PowerSeries* s : {&ch.in_f, &ch.in_b, &ch.out_f, &ch.out_b, &ch.load}) {
    s->t0 = t0;
    s->dt = half;
    s->samples.assign(2 * n, 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const SlotTrace& tr = traces[i];
    const std::size_t f = 2 * i;
    const std::size_t b = 2 * i + 1;
    if (tr.signals.rt1_f) {
      ch.in_f.samples[f] = p_unit;
    }
    if (tr.out_f) {
      ch.out_f.samples[f] = p_unit;
    }
    if (tr.signals.rt3_b) {
      ch.in_b.samples[b] = p_unit;
      ch.out_b.samples[b] = p_unit;
    }
    if (tr.signals.rt2_b && tr.out_b) {
      ch.out_f.samples[b] = p_unit;
    }
    ch.load.samples[f] = ch.out_f.samples[f];
    ch.load.samples[b] = ch.out_f.samples[b] + ch.out_b.samples[b];
  }
  return ch;
}

PowerChannels synthesize_rc(std::span<const SlotTrace> traces,
                            const ElectricalParams& params,
                            const WaveformModel& model) {
  const double half = params.slot_s() / 2.0;
  const double p_unit = params.p_unit();
  const std::size_t n_sub =
      static_cast<std::size_t>(std::llround(half / model.sample_dt));
  const double dt = half / static_cast<double>(n_sub);
  const std::size_t n = traces.size();
  const double t0 = n ? static_cast<double>(traces.front().slot) * params.slot_s() : 0.0;

  PowerChannels ch;
  for (PowerSeries* s : {&ch.in_f, &ch.in_b, &ch.out_f, &ch.out_b, &ch.load}) {
    s->t0 = t0;
    s->dt = dt;
    s->samples.assign(2 * n * n_sub, 0.0);
  }

  // Buffer capacitor voltage, carried across slots. Starts full.
  double v = params.v_source;

  // Advances the capacitor through one half-interval with the given
  // connections, sampling source-side and load-side power at sub-step
  // starts. The combined charge+discharge case follows the exact
  // single-pole solution; the pure cases reduce to relaxation toward
  // v_source and to the exponential discharge through the load.
  const auto run_half = [&](bool charging, bool discharging,
                            std::size_t offset) {
    double v_eq = v;
    double tau = 0.0;
    if (charging && discharging) {
      const double r_par = model.r_charge * params.r_load /
                           (model.r_charge + params.r_load);
      tau = r_par * model.c_buffer;
      v_eq = params.v_source * params.r_load /
             (model.r_charge + params.r_load);
    } else if (charging) {
      tau = model.r_charge * model.c_buffer;
      v_eq = params.v_source;
    } else if (discharging) {
      tau = params.r_load * model.c_buffer;
      v_eq = 0.0;
    }
    const double decay = tau > 0.0 ? std::exp(-dt / tau) : 1.0;
    for (std::size_t s = 0; s < n_sub; ++s) {
      if (charging) {
        ch.in_f.samples[offset + s] =
            params.v_source * (params.v_source - v) / model.r_charge;
      }
      if (discharging) {
        ch.out_f.samples[offset + s] = v * v / params.r_load;
      }
      if (charging || discharging) {
        v = v_eq + (v - v_eq) * decay;
      }
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    const SlotTrace& tr = traces[i];
    const std::size_t f_off = (2 * i) * n_sub;
    const std::size_t b_off = (2 * i + 1) * n_sub;

    run_half(tr.signals.rt1_f != 0, tr.out_f != 0, f_off);

    // b interval: the direct path bypasses the buffer and sees the constant
    // source voltage, so its pulses are identical in every slot.
    if (tr.signals.rt3_b) {
      for (std::size_t s = 0; s < n_sub; ++s) {
        ch.in_b.samples[b_off + s] = p_unit;
        ch.out_b.samples[b_off + s] = p_unit;
      }
    } else {
      run_half(false, tr.signals.rt2_b != 0 && tr.out_b != 0, b_off);
    }
  }
  for (std::size_t i = 0; i < ch.load.samples.size(); ++i) {
    ch.load.samples[i] = ch.out_f.samples[i] + ch.out_b.samples[i];
  }
  return ch;
}

}  // namespace

PowerChannels synthesize_waveform(std::span<const SlotTrace> traces,
                                  const ElectricalParams& params,
                                  const WaveformModel& model) {
  params.validate();
  model.validate(params);
  check_contiguous(traces);
  if (model.kind == WaveformKind::IdealRect) {
    return synthesize_rect(traces, params);
  }
  return synthesize_rc(traces, params, model);
}

PowerSeries average_power(const PowerSeries& series, double window_s) {
  if (series.samples.empty() || !(series.dt > 0.0)) {
    throw std::invalid_argument("cannot average an empty power series");
  }
  if (window_s < series.dt) {
    throw std::invalid_argument("averaging window shorter than one sample");
  }
  const std::size_t w =
      static_cast<std::size_t>(std::llround(window_s / series.dt));
  PowerSeries out;
  out.t0 = series.t0;
  out.dt = static_cast<double>(w) * series.dt;
  out.normalized = series.normalized;
  out.base_power = series.base_power;
  const std::size_t n_windows = series.samples.size() / w;
  out.samples.reserve(n_windows);
  for (std::size_t i = 0; i < n_windows; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < w; ++j) {
      sum += series.samples[i * w + j];
    }
    out.samples.push_back(sum / static_cast<double>(w));
  }
  return out;
}

PowerSeries moving_average(const PowerSeries& series, double window_s) {
  if (series.samples.empty() || !(series.dt > 0.0)) {
    throw std::invalid_argument("cannot average an empty power series");
  }
  if (window_s < series.dt) {
    throw std::invalid_argument("averaging window shorter than one sample");
  }
  const std::size_t w =
      static_cast<std::size_t>(std::llround(window_s / series.dt));
  PowerSeries out;
  out.t0 = series.t0;
  out.dt = series.dt;
  out.normalized = series.normalized;
  out.base_power = series.base_power;
  out.samples.resize(series.samples.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    sum += series.samples[i];
    if (i >= w) {
      sum -= series.samples[i - w];
    }
    const std::size_t span = i + 1 < w ? i + 1 : w;
    out.samples[i] = sum / static_cast<double>(span);
  }
  return out;
}

PowerSeries normalize(const PowerSeries& series, double base) {
  if (!(base > 0.0)) {
    throw std::invalid_argument("normalization base must be positive");
  }
  PowerSeries out = series;
  for (double& s : out.samples) {
    s /= base;
  }
  out.normalized = true;
  out.base_power = base;
  return out;
}

double normalization_base_power(const ElectricalParams& params,
                                double duration_s, const WaveformModel& model) {
  params.validate();
  const auto n_slots =
      static_cast<std::size_t>(std::llround(duration_s * params.clock_hz));
  if (n_slots == 0) {
    throw std::invalid_argument("base run duration shorter than one slot");
  }
  BitStream ones(std::vector<Bit>(n_slots, 1), 1.0);
  Router router({OpKind::Multiplication, 0.5}, {}, 0);
  const RunResult run = router.run_sequence(ones, ones);
  return synthesize_waveform(run.traces, params, model).load.mean();
}

}  // namespace ppsim
