// Command-line front end: fixed-seed case runs, multi-seed statistical
// studies, the two-subsystem management scenario, and configured networks.
// All artifacts are deterministic functions of the master seed and the
// resolved configuration.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ppsim/cases.hpp"
#include "ppsim/config.hpp"
#include "ppsim/io.hpp"
#include "ppsim/management.hpp"
#include "ppsim/network.hpp"
#include "ppsim/power.hpp"
#include "ppsim/stats.hpp"
#include "ppsim/study.hpp"
#include "ppsim/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSimFault = 3;
constexpr int kExitInfeasible = 4;

json electrical_to_json(const ppsim::ElectricalParams& p) {
  return {{"v_source", p.v_source},
          {"r_load", p.r_load},
          {"clock_hz", p.clock_hz}};
}

json buffer_to_json(const ppsim::BufferConfig& b) {
  json j{{"kind", b.kind == ppsim::BufferKind::IdealReservoir ? "ideal"
                                                              : "ledger"},
         {"initial_charge", b.initial_charge},
         {"starvation",
          b.starvation == ppsim::StarvationPolicy::Error ? "error" : "zero"}};
  if (b.capacity) {
    j["capacity"] = *b.capacity;
  }
  return j;
}

json waveform_to_json(const ppsim::WaveformModel& w) {
  json j{{"kind",
          w.kind == ppsim::WaveformKind::IdealRect ? "rect" : "rc"}};
  if (w.kind == ppsim::WaveformKind::RCBuffer) {
    j["c_buffer"] = w.c_buffer;
    j["r_charge"] = w.r_charge;
    j["sample_dt"] = w.sample_dt;
  }
  return j;
}

void finish_manifest(const fs::path& out_dir, const std::string& command,
                     std::uint64_t seed, const json& resolved,
                     std::vector<std::string> outputs) {
  ppsim::RunManifest manifest;
  manifest.command = command;
  manifest.version = std::string(ppsim::kVersion);
  manifest.master_seed = seed;
  manifest.config_digest = ppsim::config_digest(resolved);
  manifest.outputs = std::move(outputs);
  ppsim::write_manifest((out_dir / "manifest.json").string(), manifest);
}

struct CaseOpts {
  int case_index = -1;
  std::string mode;
  double p_f = -1.0;
  double p_b = -1.0;
  double duration_s = 0.4;
  std::uint64_t seed = ppsim::kDefaultMasterSeed;
  std::string buffer = "ideal";
  std::string waveform = "rect";
  std::string config_path;
  std::string out = "out";
};

int run_case_cmd(const CaseOpts& opts) {
  ppsim::TextConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = ppsim::load_config(opts.config_path);
  }
  const ppsim::ElectricalParams params = ppsim::electrical_from(cfg);
  ppsim::BufferConfig buffer = ppsim::buffer_from(cfg);
  buffer.kind = ppsim::buffer_kind_from_name(opts.buffer);
  ppsim::WaveformModel waveform = ppsim::waveform_from(cfg);
  waveform.kind = ppsim::waveform_kind_from_name(opts.waveform);

  ppsim::CaseSetup setup;
  if (opts.case_index >= 0) {
    const auto cases = ppsim::verification_cases();
    if (opts.case_index >= static_cast<int>(cases.size())) {
      throw ppsim::ConfigError("case index must be 0..15");
    }
    setup = cases[static_cast<std::size_t>(opts.case_index)];
  } else {
    if (opts.mode.empty() || opts.p_f < 0.0 || opts.p_b < 0.0) {
      throw ppsim::ConfigError(
          "give either --case or all of --mode, --pf, --pb");
    }
    if (opts.mode == "mul") {
      setup.op = ppsim::OpKind::Multiplication;
    } else if (opts.mode == "add") {
      setup.op = ppsim::OpKind::Addition;
    } else {
      throw ppsim::ConfigError("mode must be mul or add");
    }
    setup.p_f = opts.p_f;
    setup.p_b = opts.p_b;
  }

  const ppsim::CaseRunOutcome outcome = ppsim::run_case(
      setup, opts.duration_s, opts.seed, params, buffer, waveform);

  const fs::path out_dir(opts.out);
  fs::create_directories(out_dir);
  ppsim::write_trace_csv((out_dir / "trace.csv").string(), outcome.traces);
  ppsim::write_trace_jsonl((out_dir / "trace.jsonl").string(), outcome.traces);
  ppsim::write_series_csv((out_dir / "load.csv").string(),
                          outcome.channels.load);
  ppsim::write_series_json((out_dir / "load.json").string(),
                           outcome.channels.load);
  ppsim::write_channels_csv((out_dir / "channels.csv").string(),
                            outcome.channels);

  const json summary{
      {"command", "case"},
      {"case_index", opts.case_index},
      {"mode",
       setup.op == ppsim::OpKind::Multiplication ? "mul" : "add"},
      {"p_f", setup.p_f},
      {"p_b", setup.p_b},
      {"duration_s", opts.duration_s},
      {"n_slots", outcome.n_slots},
      {"master_seed", opts.seed},
      {"average_w", outcome.average_w},
      {"base_w", outcome.base_w},
      {"normalized_average", outcome.normalized_average},
      {"target", outcome.target},
      {"deviation", outcome.normalized_average - outcome.target}};
  ppsim::write_json_file((out_dir / "summary.json").string(), summary);

  const json resolved{{"command", "case"},
                      {"case_index", opts.case_index},
                      {"mode", setup.op == ppsim::OpKind::Multiplication
                                   ? "mul"
                                   : "add"},
                      {"p_f", setup.p_f},
                      {"p_b", setup.p_b},
                      {"duration_s", opts.duration_s},
                      {"seed", opts.seed},
                      {"electrical", electrical_to_json(params)},
                      {"buffer", buffer_to_json(buffer)},
                      {"waveform", waveform_to_json(waveform)}};
  finish_manifest(out_dir, "case", opts.seed, resolved,
                  {"trace.csv", "trace.jsonl", "load.csv", "load.json",
                   "channels.csv", "summary.json"});

  std::cout << "normalized average " << outcome.normalized_average
            << " (target " << outcome.target << ", deviation "
            << outcome.normalized_average - outcome.target << ")\n";
  return kExitOk;
}

struct TrialsOpts {
  std::vector<int> cases;
  std::size_t n_trials = 200;
  double window_s = 1e-3;
  double alpha = 0.05;
  std::uint64_t seed = ppsim::kDefaultMasterSeed;
  std::string config_path;
  std::string out = "out";
};

int run_trials_cmd(const TrialsOpts& opts) {
  ppsim::TextConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = ppsim::load_config(opts.config_path);
  }
  const ppsim::ElectricalParams params = ppsim::electrical_from(cfg);

  std::vector<int> case_ids = opts.cases;
  if (case_ids.empty()) {
    for (int i = 0; i < 16; ++i) case_ids.push_back(i);
  }
  const auto cases = ppsim::verification_cases();
  for (int id : case_ids) {
    if (id < 0 || id >= static_cast<int>(cases.size())) {
      throw ppsim::ConfigError("case index must be 0..15");
    }
  }

  const double base = ppsim::normalization_base_power(params);
  std::vector<ppsim::CaseReportRow> rows;
  std::vector<ppsim::TrialResult> all_trials;
  for (int id : case_ids) {
    const std::uint64_t case_seed =
        ppsim::derive_seed(opts.seed, ppsim::seed_role::kCaseBase +
                                          static_cast<std::uint64_t>(id));
    ppsim::TrialsOutcome outcome = ppsim::run_trials(
        id, cases[static_cast<std::size_t>(id)], opts.n_trials, opts.window_s,
        case_seed, params, opts.alpha, base);
    rows.push_back({id, outcome.report});
    all_trials.insert(all_trials.end(), outcome.trials.begin(),
                      outcome.trials.end());
    std::cout << "case " << id << ": mean " << outcome.report.mean
              << ", statistic " << outcome.report.statistic << ", "
              << (outcome.report.accepted ? "accepted" : "rejected") << '\n';
  }

  const fs::path out_dir(opts.out);
  fs::create_directories(out_dir);
  ppsim::write_report_csv((out_dir / "report.csv").string(), rows);
  ppsim::write_trials_csv((out_dir / "trials.csv").string(), all_trials);

  const json resolved{{"command", "trials"},
                      {"cases", case_ids},
                      {"n_trials", opts.n_trials},
                      {"window_s", opts.window_s},
                      {"alpha", opts.alpha},
                      {"seed", opts.seed},
                      {"electrical", electrical_to_json(params)}};
  finish_manifest(out_dir, "trials", opts.seed, resolved,
                  {"report.csv", "trials.csv"});
  return kExitOk;
}

struct ManageOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  double tracking_stride_s = 1e-3;
  std::string out = "out";
};

int run_manage_cmd(const ManageOpts& opts) {
  const ppsim::TextConfig cfg = ppsim::load_config(opts.config_path);
  const ppsim::ElectricalParams params = ppsim::electrical_from(cfg);
  const ppsim::BufferConfig buffer = ppsim::buffer_from(cfg);
  const ppsim::ManagementConfig config = ppsim::management_from(cfg);
  const std::uint64_t seed =
      opts.seed ? *opts.seed
                : ppsim::master_seed_from(cfg, ppsim::kDefaultMasterSeed);

  const ppsim::ManagementRun run =
      ppsim::run_management(config, seed, params, buffer);

  const fs::path out_dir(opts.out);
  fs::create_directories(out_dir);
  ppsim::write_plan_csv((out_dir / "plan.csv").string(), run, config);
  ppsim::write_tracking_csv((out_dir / "tracking.csv").string(), run,
                            opts.tracking_stride_s);

  // Per-segment tracking error, evaluated after one full moving-average
  // window has elapsed inside the segment.
  const std::size_t settle =
      static_cast<std::size_t>(config.moving_avg_s / run.output_avg.dt);
  json segments = json::array();
  for (std::size_t i = 0; i < run.plan.size(); ++i) {
    const std::size_t begin = 2 * run.segment_start_slot[i];
    const std::size_t end = i + 1 < run.plan.size()
                                ? 2 * run.segment_start_slot[i + 1]
                                : run.output_avg.samples.size();
    double max_err = 0.0;
    double sum_err = 0.0;
    std::size_t count = 0;
    for (std::size_t k = begin + settle; k < end; ++k) {
      const double err =
          std::fabs(run.output_avg.samples[k] - run.plan[i].p_tar);
      max_err = std::max(max_err, err);
      sum_err += err;
      ++count;
    }
    segments.push_back(
        {{"segment", i},
         {"p_tar", run.plan[i].p_tar},
         {"chosen_op", run.plan[i].chosen == ppsim::PlanChoice::Multiplication
                           ? "mul"
                           : "add"},
         {"p_int", run.plan[i].p_int},
         {"max_abs_error", max_err},
         {"mean_abs_error", count ? sum_err / static_cast<double>(count) : 0.0}});
    std::cout << "segment " << i << ": p_tar " << run.plan[i].p_tar
              << ", max error after settling " << max_err << '\n';
  }
  const json summary{{"command", "manage"},
                     {"p_ext", config.p_ext},
                     {"moving_avg_s", config.moving_avg_s},
                     {"base_w", run.base_power},
                     {"segments", segments}};
  ppsim::write_json_file((out_dir / "summary.json").string(), summary);

  json schedule = json::array();
  for (const ppsim::ScheduleStep& s : config.schedule) {
    schedule.push_back({{"p_tar", s.p_tar}, {"hold_s", s.hold_s}});
  }
  const json resolved{{"command", "manage"},
                      {"p_ext", config.p_ext},
                      {"moving_avg_s", config.moving_avg_s},
                      {"schedule", schedule},
                      {"seed", seed},
                      {"electrical", electrical_to_json(params)},
                      {"buffer", buffer_to_json(buffer)}};
  finish_manifest(out_dir, "manage", seed, resolved,
                  {"plan.csv", "tracking.csv", "summary.json"});
  return kExitOk;
}

struct NetworkOpts {
  std::string config_path;
  std::size_t n_slots = 10000;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

int run_network_cmd(const NetworkOpts& opts) {
  const ppsim::TextConfig cfg = ppsim::load_config(opts.config_path);
  const std::uint64_t seed =
      opts.seed ? *opts.seed
                : ppsim::master_seed_from(cfg, ppsim::kDefaultMasterSeed);
  const std::vector<ppsim::NodeSpec> nodes = ppsim::nodes_from(cfg, seed);

  ppsim::Network net = ppsim::Network::build(nodes);
  const ppsim::NetworkRun run = net.run(opts.n_slots);

  const fs::path out_dir(opts.out);
  fs::create_directories(out_dir);
  std::vector<std::string> outputs;
  for (const auto& [id, traces] : run.router_traces) {
    const std::string name = "trace_" + id + ".csv";
    ppsim::write_trace_csv((out_dir / name).string(), traces);
    outputs.push_back(name);
  }
  ppsim::write_text_file((out_dir / "terminal.txt").string(),
                         run.terminal.to_string() + "\n");
  outputs.push_back("terminal.txt");

  json densities = json::object();
  for (const auto& [id, intervals] : run.router_intervals) {
    densities[id] =
        intervals.empty() ? 0.0 : intervals.value().ratio();
  }
  const json summary{
      {"command", "network"},
      {"n_slots", opts.n_slots},
      {"terminal_value",
       run.terminal.empty() ? 0.0 : run.terminal.value().ratio()},
      {"router_densities", densities}};
  ppsim::write_json_file((out_dir / "summary.json").string(), summary);
  outputs.push_back("summary.json");

  json node_docs = json::array();
  for (const ppsim::NodeSpec& node : nodes) {
    json doc{{"id", node.id}};
    if (const auto* s = std::get_if<ppsim::SourceSpec>(&node.kind)) {
      doc["kind"] = "source";
      doc["p"] = s->p;
      doc["seed"] = s->seed;
    } else if (const auto* r = std::get_if<ppsim::RouterSpec>(&node.kind)) {
      doc["kind"] = "router";
      doc["mode"] =
          r->mode.kind == ppsim::OpKind::Multiplication ? "mul" : "add";
      doc["p_mux"] = r->mode.p_mux;
      doc["seed"] = r->seed;
      doc["f_from"] = r->f_from;
      doc["b_from"] = r->b_from;
      doc["buffer"] = buffer_to_json(r->buffer);
    } else {
      doc["kind"] = "load";
      doc["from"] = std::get<ppsim::LoadSpec>(node.kind).from;
    }
    node_docs.push_back(doc);
  }
  const json resolved{{"command", "network"},
                      {"n_slots", opts.n_slots},
                      {"seed", seed},
                      {"nodes", node_docs}};
  finish_manifest(out_dir, "network", seed, resolved, outputs);

  std::cout << "terminal value "
            << (run.terminal.empty() ? 0.0 : run.terminal.value().ratio())
            << " over " << opts.n_slots << " slots\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for stochastic logic processing of power packet "
               "streams"};
  app.set_version_flag("--version", std::string(ppsim::kVersion));
  app.require_subcommand(1);

  CaseOpts case_opts;
  CLI::App* case_cmd = app.add_subcommand(
      "case", "Run one fixed-seed case and emit traces and power series");
  case_cmd->add_option("--case", case_opts.case_index,
                       "Verification case index (0..15)");
  case_cmd->add_option("--mode", case_opts.mode, "Operation: mul or add");
  case_cmd->add_option("--pf", case_opts.p_f, "Probability of the f source");
  case_cmd->add_option("--pb", case_opts.p_b, "Probability of the b source");
  case_cmd->add_option("--duration", case_opts.duration_s,
                       "Run length in seconds");
  case_cmd->add_option("--seed", case_opts.seed, "Master seed");
  case_cmd->add_option("--buffer", case_opts.buffer,
                       "Buffer model: ideal or ledger");
  case_cmd->add_option("--waveform", case_opts.waveform,
                       "Waveform model: rect or rc");
  case_cmd->add_option("--config", case_opts.config_path,
                       "Config file with electrical/buffer/waveform sections");
  case_cmd->add_option("--out", case_opts.out, "Output directory");

  TrialsOpts trials_opts;
  CLI::App* trials_cmd = app.add_subcommand(
      "trials", "Multi-seed study with a t-test per case");
  trials_cmd->add_option("--case", trials_opts.cases,
                         "Case indices (default: all 16)");
  trials_cmd->add_option("--trials", trials_opts.n_trials,
                         "Number of trials per case");
  trials_cmd->add_option("--window", trials_opts.window_s,
                         "Averaging window per trial, seconds");
  trials_cmd->add_option("--alpha", trials_opts.alpha, "Significance level");
  trials_cmd->add_option("--seed", trials_opts.seed, "Master seed");
  trials_cmd->add_option("--config", trials_opts.config_path,
                         "Config file with an [electrical] section");
  trials_cmd->add_option("--out", trials_opts.out, "Output directory");

  ManageOpts manage_opts;
  std::uint64_t manage_seed = 0;
  CLI::App* manage_cmd = app.add_subcommand(
      "manage", "Run a two-subsystem power management scenario");
  manage_cmd->add_option("--config", manage_opts.config_path, "Scenario file")
      ->required();
  CLI::Option* manage_seed_opt =
      manage_cmd->add_option("--seed", manage_seed, "Master seed override");
  manage_cmd->add_option("--tracking-dt", manage_opts.tracking_stride_s,
                         "Row spacing of tracking.csv, seconds");
  manage_cmd->add_option("--out", manage_opts.out, "Output directory");

  NetworkOpts network_opts;
  std::uint64_t network_seed = 0;
  CLI::App* network_cmd = app.add_subcommand(
      "network", "Run a configured source/router/load network");
  network_cmd->add_option("--config", network_opts.config_path, "Network file")
      ->required();
  network_cmd->add_option("--slots", network_opts.n_slots, "Slots to run");
  CLI::Option* network_seed_opt =
      network_cmd->add_option("--seed", network_seed, "Master seed override");
  network_cmd->add_option("--out", network_opts.out, "Output directory");

  try {
    app.parse(argc, argv);
    if (manage_seed_opt->count() > 0) {
      manage_opts.seed = manage_seed;
    }
    if (network_seed_opt->count() > 0) {
      network_opts.seed = network_seed;
    }
    if (case_cmd->parsed()) {
      return run_case_cmd(case_opts);
    }
    if (trials_cmd->parsed()) {
      return run_trials_cmd(trials_opts);
    }
    if (manage_cmd->parsed()) {
      return run_manage_cmd(manage_opts);
    }
    if (network_cmd->parsed()) {
      return run_network_cmd(network_opts);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const ppsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ppsim::InfeasiblePlanError& e) {
    std::cerr << "infeasible plan: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const ppsim::SimulationFault& e) {
    std::cerr << "simulation fault: " << e.what() << '\n';
    return kExitSimFault;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
