#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ppsim/management.hpp"
#include "ppsim/network.hpp"
#include "ppsim/power.hpp"
#include "ppsim/router.hpp"

namespace ppsim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sectioned key-value text:
//
//   # comment
//   [section]
//   key = value
//
// Sections may repeat ([node] blocks do); order is preserved.
struct ConfigSection {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  const std::string* find(std::string_view key) const;
  std::string get(std::string_view key) const;  // throws when missing
  std::string get_or(std::string_view key, std::string fallback) const;
  std::vector<std::string> get_all(std::string_view key) const;
};

struct TextConfig {
  std::vector<ConfigSection> sections;

  std::vector<const ConfigSection*> named(std::string_view name) const;
  const ConfigSection* first(std::string_view name) const;  // null if absent
};

TextConfig parse_config(std::string_view text);
TextConfig load_config(const std::string& path);

// Typed readers with error context.
double to_double(const std::string& value, std::string_view what);
std::uint64_t to_u64(const std::string& value, std::string_view what);

// Section builders. Missing sections yield defaults where noted.
ElectricalParams electrical_from(const TextConfig& cfg);   // [electrical]
BufferConfig buffer_from(const TextConfig& cfg);           // [buffer]
WaveformModel waveform_from(const TextConfig& cfg);        // [waveform]
std::uint64_t master_seed_from(const TextConfig& cfg,
                               std::uint64_t fallback);    // [seeds] master
ManagementConfig management_from(const TextConfig& cfg);   // [management]+[schedule]
std::vector<NodeSpec> nodes_from(const TextConfig& cfg,
                                 std::uint64_t master_seed);  // [node] blocks

BufferKind buffer_kind_from_name(std::string_view name);
WaveformKind waveform_kind_from_name(std::string_view name);

}  // namespace ppsim
