#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "ppsim/management.hpp"
#include "ppsim/power.hpp"
#include "ppsim/router.hpp"
#include "ppsim/stats.hpp"

namespace ppsim {

// Shortest-round-trip-ish fixed formatting for CSV output. All writers are
// deterministic: same data, same bytes.
std::string format_double(double v);

void write_trace_csv(const std::string& path, std::span<const SlotTrace> traces);
void write_trace_jsonl(const std::string& path,
                       std::span<const SlotTrace> traces);
void write_series_csv(const std::string& path, const PowerSeries& series);
void write_series_json(const std::string& path, const PowerSeries& series);
void write_channels_csv(const std::string& path, const PowerChannels& ch);

struct CaseReportRow {
  int case_index = 0;
  TTestReport report;
};

void write_report_csv(const std::string& path,
                      std::span<const CaseReportRow> rows);
void write_trials_csv(const std::string& path,
                      std::span<const TrialResult> trials);
void write_plan_csv(const std::string& path, const ManagementRun& run,
                    const ManagementConfig& config);
// Tracking rows are decimated to roughly `stride_s` spacing (>= series dt).
void write_tracking_csv(const std::string& path, const ManagementRun& run,
                        double stride_s);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& doc);

// FNV-1a over the canonical dump of a resolved-parameters document; stable
// under reordering or reformatting of the sources it was parsed from.
std::uint64_t fnv1a64(std::string_view data);
std::string config_digest(const nlohmann::json& resolved);

struct RunManifest {
  std::string command;
  std::string version;
  std::uint64_t master_seed = 0;
  std::string config_digest;
  std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace ppsim
