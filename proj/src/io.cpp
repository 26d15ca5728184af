#include "ppsim/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ppsim {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open output file: " + path);
  }
  return out;
}

const char* choice_name(PlanChoice c) {
  switch (c) {
    case PlanChoice::Multiplication:
      return "mul";
    case PlanChoice::Addition:
      return "add";
    default:
      return "infeasible";
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void write_trace_csv(const std::string& path,
                     std::span<const SlotTrace> traces) {
  std::ofstream out = open_out(path);
  out << "slot,in_f,in_b,mux,result,rt1_f,rt2_f,rt2_b,rt3_b,out_f,out_b,"
         "buffer_before,buffer_after\n";
  for (const SlotTrace& tr : traces) {
    out << tr.slot << ',' << int(tr.inputs.in_f) << ',' << int(tr.inputs.in_b)
        << ',' << int(tr.inputs.mux) << ',' << int(tr.result) << ','
        << int(tr.signals.rt1_f) << ',' << int(tr.signals.rt2_f) << ','
        << int(tr.signals.rt2_b) << ',' << int(tr.signals.rt3_b) << ','
        << int(tr.out_f) << ',' << int(tr.out_b) << ',' << tr.buffer_before
        << ',' << tr.buffer_after << '\n';
  }
}

void write_trace_jsonl(const std::string& path,
                       std::span<const SlotTrace> traces) {
  std::ofstream out = open_out(path);
  for (const SlotTrace& tr : traces) {
    nlohmann::json j{{"slot", tr.slot},
                     {"in_f", tr.inputs.in_f},
                     {"in_b", tr.inputs.in_b},
                     {"mux", tr.inputs.mux},
                     {"result", tr.result},
                     {"rt1_f", tr.signals.rt1_f},
                     {"rt2_f", tr.signals.rt2_f},
                     {"rt2_b", tr.signals.rt2_b},
                     {"rt3_b", tr.signals.rt3_b},
                     {"out_f", tr.out_f},
                     {"out_b", tr.out_b},
                     {"buffer_before", tr.buffer_before},
                     {"buffer_after", tr.buffer_after},
                     {"starved_f", tr.starved_f},
                     {"starved_b", tr.starved_b}};
    out << j.dump() << '\n';
  }
}

void write_series_csv(const std::string& path, const PowerSeries& series) {
  std::ofstream out = open_out(path);
  out << "t,watts\n";
  for (std::size_t i = 0; i < series.samples.size(); ++i) {
    const double t = series.t0 + static_cast<double>(i) * series.dt;
    out << format_double(t) << ',' << format_double(series.samples[i]) << '\n';
  }
}

void write_series_json(const std::string& path, const PowerSeries& series) {
  nlohmann::json j{{"t0", series.t0},
                   {"dt", series.dt},
                   {"normalized", series.normalized},
                   {"samples", series.samples}};
  if (series.normalized) {
    j["base_power"] = series.base_power;
  }
  write_json_file(path, j);
}

void write_channels_csv(const std::string& path, const PowerChannels& ch) {
  std::ofstream out = open_out(path);
  out << "t,in_f_w,in_b_w,out_f_w,out_b_w,load_w\n";
  for (std::size_t i = 0; i < ch.load.samples.size(); ++i) {
    const double t = ch.load.t0 + static_cast<double>(i) * ch.load.dt;
    out << format_double(t) << ',' << format_double(ch.in_f.samples[i]) << ','
        << format_double(ch.in_b.samples[i]) << ','
        << format_double(ch.out_f.samples[i]) << ','
        << format_double(ch.out_b.samples[i]) << ','
        << format_double(ch.load.samples[i]) << '\n';
  }
}

void write_report_csv(const std::string& path,
                      std::span<const CaseReportRow> rows) {
  std::ofstream out = open_out(path);
  out << "case,mean,unbiased_variance,statistic,critical,accepted\n";
  for (const CaseReportRow& row : rows) {
    out << row.case_index << ',' << format_double(row.report.mean) << ','
        << format_double(row.report.variance) << ','
        << format_double(row.report.statistic) << ','
        << format_double(row.report.critical) << ','
        << (row.report.accepted ? 1 : 0) << '\n';
  }
}

void write_trials_csv(const std::string& path,
                      std::span<const TrialResult> trials) {
  std::ofstream out = open_out(path);
  out << "case,trial,seed,sample\n";
  int trial_in_case = 0;
  int last_case = trials.empty() ? 0 : trials.front().case_index;
  for (const TrialResult& tr : trials) {
    if (tr.case_index != last_case) {
      trial_in_case = 0;
      last_case = tr.case_index;
    }
    out << tr.case_index << ',' << trial_in_case++ << ',' << tr.seed << ','
        << format_double(tr.mean_normalized_power) << '\n';
  }
}

void write_plan_csv(const std::string& path, const ManagementRun& run,
                    const ManagementConfig& config) {
  std::ofstream out = open_out(path);
  out << "segment,t_start_s,hold_s,p_tar,feasible_mul,feasible_add,chosen_op,"
         "p_int\n";
  double t_start = 0.0;
  for (std::size_t i = 0; i < run.plan.size(); ++i) {
    const PlanStep& step = run.plan[i];
    out << i << ',' << format_double(t_start) << ','
        << format_double(config.schedule[i].hold_s) << ','
        << format_double(step.p_tar) << ',' << (step.feasible_mul ? 1 : 0)
        << ',' << (step.feasible_add ? 1 : 0) << ','
        << choice_name(step.chosen) << ',' << format_double(step.p_int)
        << '\n';
    t_start += config.schedule[i].hold_s;
  }
}

void write_tracking_csv(const std::string& path, const ManagementRun& run,
                        double stride_s) {
  std::ofstream out = open_out(path);
  out << "t,target,output_avg\n";
  const PowerSeries& avg = run.output_avg;
  std::size_t stride = 1;
  if (stride_s > avg.dt) {
    stride = static_cast<std::size_t>(stride_s / avg.dt);
  }
  for (std::size_t i = 0; i < avg.samples.size(); i += stride) {
    const double t = avg.t0 + static_cast<double>(i) * avg.dt;
    out << format_double(t) << ',' << format_double(run.target.samples[i])
        << ',' << format_double(avg.samples[i]) << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
}

void write_json_file(const std::string& path, const nlohmann::json& doc) {
  std::ofstream out = open_out(path);
  out << doc.dump(2) << '\n';
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_digest(const nlohmann::json& resolved) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(resolved.dump())));
  return buf;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  nlohmann::json j{{"command", manifest.command},
                   {"version", manifest.version},
                   {"master_seed", manifest.master_seed},
                   {"config_digest", manifest.config_digest},
                   {"outputs", manifest.outputs}};
  write_json_file(path, j);
}

}  // namespace ppsim
