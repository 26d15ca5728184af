#include "ppsim/router.hpp"

namespace ppsim {

Buffer::Buffer(BufferConfig cfg) : cfg_(cfg), charge_(cfg.initial_charge) {
  if (cfg_.capacity && cfg_.initial_charge > *cfg_.capacity) {
    throw std::invalid_argument("initial buffer charge exceeds capacity");
  }
}

bool Buffer::store_unit() {
  if (cfg_.kind == BufferKind::QuantizedLedger && cfg_.capacity &&
      charge_ >= *cfg_.capacity) {
    ++overflow_discards_;
    return false;
  }
  ++charge_;
  ++total_charges_;
  return true;
}

bool Buffer::draw_unit() {
  if (cfg_.kind == BufferKind::QuantizedLedger) {
    if (charge_ == 0) {
      return false;
    }
    --charge_;
    ++total_outputs_;
    return true;
  }
  // IdealReservoir: always supplies; ledger is diagnostic only.
  if (charge_ > 0) {
    --charge_;
  }
  ++total_outputs_;
  return true;
}

SimulationFault::SimulationFault(std::uint64_t slot, char interval)
    : std::runtime_error("buffer starved at slot " + std::to_string(slot) +
                         ", interval " + std::string(1, interval)),
      slot_(slot),
      interval_(interval) {}

Bit compute_result(const OperationMode& mode, Bit in_f, Bit in_b, Bit mux) {
  if (mode.kind == OpKind::Multiplication) {
    return in_f & in_b;
  }
  return mux ? in_f : in_b;
}

Router::Router(OperationMode mode, BufferConfig buffer, std::uint64_t mux_seed)
    : mode_(mode), buffer_(buffer), mux_gen_(mux_seed) {
  check_mode(mode_);
}

void Router::check_mode(const OperationMode& mode) const {
  if (!(mode.p_mux >= 0.0 && mode.p_mux <= 1.0)) {
    throw std::invalid_argument("p_mux outside [0, 1]");
  }
}

void Router::set_mode(OperationMode mode) {
  check_mode(mode);
  mode_ = mode;
}

SlotTrace Router::step_slot(const SlotInputs& in) {
  SlotTrace tr;
  tr.slot = slot_index_;
  tr.inputs = in;
  tr.buffer_before = buffer_.charge();

  // Interval f: replay the previous result from the buffer, and charge the
  // buffer if a packet arrives.
  tr.signals.rt2_f = prev_result_;
  if (prev_result_) {
    if (buffer_.draw_unit()) {
      tr.out_f = 1;
    } else if (buffer_.config().starvation == StarvationPolicy::Error) {
      throw SimulationFault(slot_index_, 'f');
    } else {
      tr.starved_f = true;
    }
  }
  if (in.in_f) {
    tr.signals.rt1_f = 1;
    buffer_.store_unit();  // discarded (and counted) when full
  }

  tr.result = compute_result(mode_, in.in_f, in.in_b, in.mux);

  // Interval b: direct path when the b packet exists, buffer otherwise. A
  // b packet with result 0 is rejected, not stored (path b bypasses the
  // buffer).
  if (tr.result) {
    if (in.in_b) {
      tr.signals.rt3_b = 1;
      tr.out_b = 1;
    } else {
      tr.signals.rt2_b = 1;
      if (buffer_.draw_unit()) {
        tr.out_b = 1;
      } else if (buffer_.config().starvation == StarvationPolicy::Error) {
        throw SimulationFault(slot_index_, 'b');
      } else {
        tr.starved_b = true;
      }
    }
  }

  tr.buffer_after = buffer_.charge();
  prev_result_ = tr.result;
  ++slot_index_;
  return tr;
}

SlotTrace Router::step(Bit in_f, Bit in_b) {
  SlotInputs in;
  in.in_f = in_f;
  in.in_b = in_b;
  in.mux = mode_.kind == OpKind::Addition ? mux_gen_.bernoulli(mode_.p_mux) : 0;
  return step_slot(in);
}

RunResult Router::run_sequence(const BitStream& in_f_stream,
                               const BitStream& in_b_stream) {
  if (in_f_stream.size() != in_b_stream.size()) {
    throw std::invalid_argument("input stream length mismatch");
  }
  RunResult result;
  result.traces.reserve(in_f_stream.size());
  result.out_intervals.reserve(2 * in_f_stream.size());
  for (std::size_t t = 0; t < in_f_stream.size(); ++t) {
    const SlotTrace tr = step(in_f_stream[t], in_b_stream[t]);
    result.out_intervals.push_back(tr.out_f);
    result.out_intervals.push_back(tr.out_b);
    result.traces.push_back(tr);
  }
  return result;
}

}  // namespace ppsim
