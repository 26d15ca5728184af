#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ppsim/bitstream.hpp"
#include "ppsim/rng.hpp"

namespace ppsim {

enum class OpKind { Multiplication, Addition };

// Operation performed on the two slot inputs. p_mux is the selector
// probability of the Addition multiplexer and is ignored by Multiplication.
struct OperationMode {
  OpKind kind = OpKind::Multiplication;
  double p_mux = 0.5;
};

// One slot carries two consecutive intervals, f then b, with one binary
// operand arriving per interval. mux is the internal selector draw and is
// only meaningful in Addition mode.
struct SlotInputs {
  Bit in_f = 0;
  Bit in_b = 0;
  Bit mux = 0;
};

// Gate signals. rt1_f charges the buffer from the f input, rt2 discharges
// the buffer to the load (at f for the previous result, at b when the
// result is 1 without a b packet), rt3_b connects the b input directly to
// the load.
struct SwitchSignals {
  Bit rt1_f = 0;
  Bit rt2_f = 0;
  Bit rt2_b = 0;
  Bit rt3_b = 0;
};

enum class BufferKind { IdealReservoir, QuantizedLedger };
enum class StarvationPolicy { Error, EmitZero };

struct BufferConfig {
  BufferKind kind = BufferKind::IdealReservoir;
  // Unit = energy of one half-slot pulse. nullopt capacity = unbounded.
  std::optional<std::uint64_t> capacity;
  std::uint64_t initial_charge = 0;
  StarvationPolicy starvation = StarvationPolicy::EmitZero;
};

// Storage element between the input and output ports. QuantizedLedger does
// strict unit accounting: a full ledger discards further charges, an empty
// one starves the output per policy. IdealReservoir supplies output
// unconditionally; it keeps the same ledger (floored at zero) purely so
// traces stay comparable between the two models.
class Buffer {
 public:
  explicit Buffer(BufferConfig cfg);

  const BufferConfig& config() const { return cfg_; }
  std::uint64_t charge() const { return charge_; }
  std::uint64_t overflow_discards() const { return overflow_discards_; }
  std::uint64_t total_charges() const { return total_charges_; }
  std::uint64_t total_outputs() const { return total_outputs_; }

  // Stores one half-slot unit. Returns false if the unit was discarded
  // because the ledger is at capacity.
  bool store_unit();

  // Draws one half-slot unit for output. Returns false on starvation
  // (QuantizedLedger empty); the caller applies the starvation policy.
  bool draw_unit();

 private:
  BufferConfig cfg_;
  std::uint64_t charge_;
  std::uint64_t overflow_discards_ = 0;
  std::uint64_t total_charges_ = 0;
  std::uint64_t total_outputs_ = 0;
};

// Full per-slot record; immutable once emitted.
struct SlotTrace {
  std::uint64_t slot = 0;
  SlotInputs inputs;
  Bit result = 0;
  SwitchSignals signals;
  Bit out_f = 0;
  Bit out_b = 0;
  std::uint64_t buffer_before = 0;
  std::uint64_t buffer_after = 0;
  bool starved_f = false;
  bool starved_b = false;
};

// Raised when a QuantizedLedger with StarvationPolicy::Error runs dry.
class SimulationFault : public std::runtime_error {
 public:
  SimulationFault(std::uint64_t slot, char interval);
  std::uint64_t slot() const { return slot_; }
  char interval() const { return interval_; }

 private:
  std::uint64_t slot_;
  char interval_;
};

// Slot result: in_f AND in_b for Multiplication, the mux selection
// (in_f if mux else in_b) for Addition.
Bit compute_result(const OperationMode& mode, Bit in_f, Bit in_b, Bit mux);

struct RunResult {
  std::vector<SlotTrace> traces;
  // Interval-level output, length 2n: [2t] = out_f(t), [2t+1] = out_b(t).
  BitStream out_intervals;
};

// Two-interval slot state machine of one router. Strictly sequential: the
// f-interval output replays the preceding slot's result from the buffer,
// the b-interval output applies the current result (direct path if a b
// packet exists, buffer otherwise). Run distinct instances in parallel if
// needed; a single instance is not thread-safe.
class Router {
 public:
  Router(OperationMode mode, BufferConfig buffer, std::uint64_t mux_seed);

  const OperationMode& mode() const { return mode_; }
  // Changes the operation for subsequent slots. Buffer charge and the
  // previous result carry over.
  void set_mode(OperationMode mode);

  Bit prev_result() const { return prev_result_; }
  const Buffer& buffer() const { return buffer_; }
  std::uint64_t slots_stepped() const { return slot_index_; }

  // Advances one slot with a caller-supplied mux bit.
  SlotTrace step_slot(const SlotInputs& in);

  // Advances one slot, drawing the mux bit internally (one draw per slot,
  // Addition mode only; Multiplication does not consume the generator).
  SlotTrace step(Bit in_f, Bit in_b);

  // Runs one slot per input bit pair. Streams must have equal length.
  RunResult run_sequence(const BitStream& in_f_stream,
                         const BitStream& in_b_stream);

 private:
  void check_mode(const OperationMode& mode) const;

  OperationMode mode_;
  Bit prev_result_ = 0;  // no output before the first computed result
  Buffer buffer_;
  SeededGenerator mux_gen_;
  std::uint64_t slot_index_ = 0;
};

}  // namespace ppsim
