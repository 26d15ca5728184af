#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ppsim/power.hpp"
#include "ppsim/router.hpp"

namespace ppsim {

// Raised when a schedule contains a target no operation can realize.
class InfeasiblePlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScheduleStep {
  double p_tar = 0.0;
  double hold_s = 1.0;
};

enum class PlanPolicy {
  // Pick the operation whose internal probability is smaller (least burden
  // on the local source); ties go to Addition.
  MinimizeInternal,
  PreferMultiplication,
  PreferAddition,
};

struct ManagementConfig {
  double p_ext = 0.0;                // constant external supply probability
  std::vector<ScheduleStep> schedule;
  double moving_avg_s = 0.1;
  PlanPolicy policy = PlanPolicy::MinimizeInternal;
};

enum class PlanChoice { Multiplication, Addition, Infeasible };

// Planning result for one target. p_int is the internal source probability
// that makes the chosen operation hit p_tar; NaN when infeasible.
struct PlanStep {
  double p_tar = 0.0;
  bool feasible_mul = false;
  bool feasible_add = false;
  PlanChoice chosen = PlanChoice::Infeasible;
  double p_int = 0.0;
};

struct Feasibility {
  bool mul = false;
  bool add = false;
};

// Multiplication can realize p_tar in [0, p_ext] (p_int = p_tar / p_ext);
// Addition covers [p_ext/2, (1 + p_ext)/2] (p_int = 2*p_tar - p_ext).
Feasibility feasible_ops(double p_tar, double p_ext);

// Chooses an operation per the policy and computes p_int. Returns an
// Infeasible step (no clamping) when neither operation covers the target.
PlanStep plan_internal(double p_tar, double p_ext,
                       PlanPolicy policy = PlanPolicy::MinimizeInternal);

struct ManagementRun {
  std::vector<PlanStep> plan;           // one per schedule segment
  std::vector<std::uint64_t> segment_start_slot;
  PowerSeries target;                   // step series on the output grid
  PowerSeries output_raw;               // normalized load power
  PowerSeries output_avg;               // moving-average of output_raw
  double base_power = 0.0;
};

// Runs the two-subsystem scenario: the external stream Bernoulli(p_ext)
// feeds input f, the internal stream Bernoulli(p_int) feeds input b, and
// the router runs each segment in its planned mode. Mode and stream
// switches happen at slot boundaries; buffer charge and the previous
// result carry across segments. Throws InfeasiblePlanError before any
// simulation if a segment is infeasible.
ManagementRun run_management(const ManagementConfig& config,
                             std::uint64_t master_seed,
                             const ElectricalParams& params = {},
                             const BufferConfig& buffer = {});

}  // namespace ppsim
