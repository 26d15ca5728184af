#include "ppsim/management.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ppsim {

Feasibility feasible_ops(double p_tar, double p_ext) {
  if (!(p_ext > 0.0) || p_ext > 1.0) {
    throw std::invalid_argument("p_ext must be in (0, 1]");
  }
  if (!(p_tar >= 0.0) || p_tar > 1.0) {
    throw std::invalid_argument("p_tar must be in [0, 1]");
  }
  Feasibility f;
  f.mul = p_tar <= p_ext;
  f.add = p_tar >= p_ext / 2.0 && p_tar <= (1.0 + p_ext) / 2.0;
  return f;
}

PlanStep plan_internal(double p_tar, double p_ext, PlanPolicy policy) {
  const Feasibility f = feasible_ops(p_tar, p_ext);
  PlanStep step;
  step.p_tar = p_tar;
  step.feasible_mul = f.mul;
  step.feasible_add = f.add;
  step.p_int = std::numeric_limits<double>::quiet_NaN();
  if (!f.mul && !f.add) {
    step.chosen = PlanChoice::Infeasible;
    return step;
  }

  const double p_int_mul = p_tar / p_ext;
  const double p_int_add = 2.0 * p_tar - p_ext;
  bool use_mul;
  if (f.mul && f.add) {
    switch (policy) {
      case PlanPolicy::PreferMultiplication:
        use_mul = true;
        break;
      case PlanPolicy::PreferAddition:
        use_mul = false;
        break;
      case PlanPolicy::MinimizeInternal:
      default:
        use_mul = p_int_mul < p_int_add;
        break;
    }
  } else {
    use_mul = f.mul;
  }
  step.chosen = use_mul ? PlanChoice::Multiplication : PlanChoice::Addition;
  step.p_int = use_mul ? p_int_mul : p_int_add;
  return step;
}

ManagementRun run_management(const ManagementConfig& config,
                             std::uint64_t master_seed,
                             const ElectricalParams& params,
                             const BufferConfig& buffer) {
  params.validate();
  if (config.schedule.empty()) {
    throw std::invalid_argument("management schedule is empty");
  }
  if (!(config.moving_avg_s > 0.0)) {
    throw std::invalid_argument("moving average window must be positive");
  }

  ManagementRun run;
  run.plan.reserve(config.schedule.size());
  for (const ScheduleStep& s : config.schedule) {
    const PlanStep step = plan_internal(s.p_tar, config.p_ext, config.policy);
    if (step.chosen == PlanChoice::Infeasible) {
      throw InfeasiblePlanError(
          "no operation can realize p_tar=" + std::to_string(s.p_tar) +
          " with p_ext=" + std::to_string(config.p_ext));
    }
    if (!(s.hold_s * params.clock_hz >= 1.0)) {
      throw std::invalid_argument("schedule hold shorter than one slot");
    }
    run.plan.push_back(step);
  }

  SeededGenerator gen_ext(derive_seed(master_seed, seed_role::kSourceF));
  SeededGenerator gen_int(derive_seed(master_seed, seed_role::kSourceB));
  Router router({OpKind::Multiplication, 0.5}, buffer,
                derive_seed(master_seed, seed_role::kMux));

  std::vector<SlotTrace> traces;
  std::vector<double> target_per_slot;
  for (std::size_t i = 0; i < config.schedule.size(); ++i) {
    const ScheduleStep& s = config.schedule[i];
    const PlanStep& step = run.plan[i];
    const auto hold_slots = static_cast<std::uint64_t>(
        std::llround(s.hold_s * params.clock_hz));
    run.segment_start_slot.push_back(traces.size());
    const OpKind op = step.chosen == PlanChoice::Multiplication
                          ? OpKind::Multiplication
                          : OpKind::Addition;
    router.set_mode({op, 0.5});
    for (std::uint64_t t = 0; t < hold_slots; ++t) {
      const Bit ext = gen_ext.bernoulli(config.p_ext);
      const Bit internal = gen_int.bernoulli(step.p_int);
      traces.push_back(router.step(ext, internal));
      target_per_slot.push_back(s.p_tar);
    }
  }

  run.base_power = normalization_base_power(params);
  const PowerChannels ch = synthesize_waveform(traces, params, {});
  run.output_raw = normalize(ch.load, run.base_power);
  run.output_avg = moving_average(run.output_raw, config.moving_avg_s);

  run.target.t0 = run.output_raw.t0;
  run.target.dt = run.output_raw.dt;
  run.target.normalized = true;
  run.target.base_power = run.base_power;
  run.target.samples.reserve(2 * target_per_slot.size());
  for (double p : target_per_slot) {
    run.target.samples.push_back(p);
    run.target.samples.push_back(p);
  }
  return run;
}

}  // namespace ppsim
