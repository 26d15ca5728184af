#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ppsim/bitstream.hpp"
#include "ppsim/router.hpp"

namespace ppsim {

// Node kinds of a slot-synchronous network. A source emits one Bernoulli
// draw per slot, visible at whichever interval its consumer reads. A
// router reads its f input at interval f and its b input at interval b of
// the same slot; reading an upstream router therefore consumes that
// router's (out_f, out_b) pair. The load records the terminal stream.
struct SourceSpec {
  double p = 0.0;
  std::uint64_t seed = 0;
};

struct RouterSpec {
  OperationMode mode;
  BufferConfig buffer;
  std::uint64_t seed = 0;
  std::string f_from;
  std::string b_from;
};

struct LoadSpec {
  std::string from;
};

struct NodeSpec {
  std::string id;
  std::variant<SourceSpec, RouterSpec, LoadSpec> kind;
};

struct NetworkRun {
  std::size_t n_slots = 0;
  std::map<std::string, std::vector<SlotTrace>> router_traces;
  // Interval-level output per router, length 2 * n_slots.
  std::map<std::string, BitStream> router_intervals;
  // Per-slot draws of each source.
  std::map<std::string, BitStream> source_draws;
  // Stream received by the load: interval-level when fed by a router,
  // per-slot when fed directly by a source.
  BitStream terminal;
};

// Executable network built from validated node specs. Wiring must be
// acyclic, every router needs both feeds, and exactly one load terminates
// the graph.
class Network {
 public:
  static Network build(std::span<const NodeSpec> specs);

  // Slot-synchronous evaluation in topological order.
  NetworkRun run(std::size_t n_slots);

 private:
  Network() = default;

  std::vector<NodeSpec> specs_;
  std::vector<std::size_t> topo_order_;  // indices into specs_
  std::size_t load_index_ = 0;
  std::map<std::string, std::size_t> index_of_;
};

}  // namespace ppsim
