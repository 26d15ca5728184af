#include "ppsim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ppsim {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

}  // namespace

const std::string* ConfigSection::find(std::string_view key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string ConfigSection::get(std::string_view key) const {
  if (const std::string* v = find(key)) return *v;
  throw ConfigError("section [" + name + "] is missing key '" +
                    std::string(key) + "'");
}

std::string ConfigSection::get_or(std::string_view key,
                                  std::string fallback) const {
  if (const std::string* v = find(key)) return *v;
  return fallback;
}

std::vector<std::string> ConfigSection::get_all(std::string_view key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries) {
    if (k == key) out.push_back(v);
  }
  return out;
}

std::vector<const ConfigSection*> TextConfig::named(
    std::string_view name) const {
  std::vector<const ConfigSection*> out;
  for (const ConfigSection& s : sections) {
    if (s.name == name) out.push_back(&s);
  }
  return out;
}

const ConfigSection* TextConfig::first(std::string_view name) const {
  for (const ConfigSection& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

TextConfig parse_config(std::string_view text) {
  TextConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                       : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    line = trim(line);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        fail(line_no, "malformed section header");
      }
      cfg.sections.push_back(
          {std::string(trim(line.substr(1, line.size() - 2))), {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(line_no, "expected 'key = value'");
    }
    if (cfg.sections.empty()) {
      fail(line_no, "entry outside any section");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) {
      fail(line_no, "empty key");
    }
    cfg.sections.back().entries.emplace_back(key, value);
  }
  return cfg;
}

TextConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

double to_double(const std::string& value, std::string_view what) {
  try {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("expected a number for " + std::string(what) + ", got '" +
                      value + "'");
  }
}

std::uint64_t to_u64(const std::string& value, std::string_view what) {
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("expected an unsigned integer for " + std::string(what) +
                      ", got '" + value + "'");
  }
  return out;
}

ElectricalParams electrical_from(const TextConfig& cfg) {
  ElectricalParams params;
  if (const ConfigSection* s = cfg.first("electrical")) {
    params.v_source = to_double(s->get_or("v_source", "10"), "v_source");
    params.r_load = to_double(s->get_or("r_load", "20"), "r_load");
    params.clock_hz = to_double(s->get_or("clock_hz", "25000"), "clock_hz");
  }
  try {
    params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return params;
}

BufferKind buffer_kind_from_name(std::string_view name) {
  if (name == "ideal") return BufferKind::IdealReservoir;
  if (name == "ledger") return BufferKind::QuantizedLedger;
  throw ConfigError("unknown buffer kind '" + std::string(name) +
                    "' (expected ideal or ledger)");
}

WaveformKind waveform_kind_from_name(std::string_view name) {
  if (name == "rect") return WaveformKind::IdealRect;
  if (name == "rc") return WaveformKind::RCBuffer;
  throw ConfigError("unknown waveform kind '" + std::string(name) +
                    "' (expected rect or rc)");
}

BufferConfig buffer_from(const TextConfig& cfg) {
  BufferConfig buffer;
  if (const ConfigSection* s = cfg.first("buffer")) {
    buffer.kind = buffer_kind_from_name(s->get_or("kind", "ideal"));
    if (const std::string* cap = s->find("capacity")) {
      buffer.capacity = to_u64(*cap, "capacity");
    }
    buffer.initial_charge =
        to_u64(s->get_or("initial_charge", "0"), "initial_charge");
    const std::string policy = s->get_or("starvation", "zero");
    if (policy == "zero") {
      buffer.starvation = StarvationPolicy::EmitZero;
    } else if (policy == "error") {
      buffer.starvation = StarvationPolicy::Error;
    } else {
      throw ConfigError("unknown starvation policy '" + policy + "'");
    }
  }
  return buffer;
}

WaveformModel waveform_from(const TextConfig& cfg) {
  WaveformModel model;
  if (const ConfigSection* s = cfg.first("waveform")) {
    model.kind = waveform_kind_from_name(s->get_or("kind", "rect"));
    model.c_buffer = to_double(s->get_or("c_buffer", "1e-4"), "c_buffer");
    model.r_charge = to_double(s->get_or("r_charge", "0.02"), "r_charge");
    model.sample_dt = to_double(s->get_or("sample_dt", "1e-6"), "sample_dt");
  }
  return model;
}

std::uint64_t master_seed_from(const TextConfig& cfg, std::uint64_t fallback) {
  if (const ConfigSection* s = cfg.first("seeds")) {
    if (const std::string* v = s->find("master")) {
      return to_u64(*v, "master seed");
    }
  }
  return fallback;
}

ManagementConfig management_from(const TextConfig& cfg) {
  const ConfigSection* m = cfg.first("management");
  if (!m) {
    throw ConfigError("scenario is missing a [management] section");
  }
  ManagementConfig config;
  config.p_ext = to_double(m->get("p_ext"), "p_ext");
  config.moving_avg_s =
      to_double(m->get_or("moving_avg_s", "0.1"), "moving_avg_s");
  const std::string policy = m->get_or("policy", "min_internal");
  if (policy == "min_internal") {
    config.policy = PlanPolicy::MinimizeInternal;
  } else if (policy == "prefer_mul") {
    config.policy = PlanPolicy::PreferMultiplication;
  } else if (policy == "prefer_add") {
    config.policy = PlanPolicy::PreferAddition;
  } else {
    throw ConfigError("unknown plan policy '" + policy + "'");
  }

  const ConfigSection* sched = cfg.first("schedule");
  if (!sched) {
    throw ConfigError("scenario is missing a [schedule] section");
  }
  for (const std::string& entry : sched->get_all("step")) {
    std::istringstream iss(entry);
    ScheduleStep step;
    if (!(iss >> step.p_tar)) {
      throw ConfigError("malformed schedule step '" + entry + "'");
    }
    if (!(iss >> step.hold_s)) {
      step.hold_s = 1.0;
    }
    std::string rest;
    if (iss >> rest) {
      throw ConfigError("trailing tokens in schedule step '" + entry + "'");
    }
    config.schedule.push_back(step);
  }
  if (config.schedule.empty()) {
    throw ConfigError("schedule has no steps");
  }
  return config;
}

std::vector<NodeSpec> nodes_from(const TextConfig& cfg,
                                 std::uint64_t master_seed) {
  std::vector<NodeSpec> nodes;
  std::uint64_t auto_seed_index = 0;
  for (const ConfigSection* s : cfg.named("node")) {
    NodeSpec node;
    node.id = s->get("id");
    const std::string kind = s->get("kind");
    // Unseeded sources and routers get children of the master seed in
    // declaration order.
    const std::uint64_t default_seed =
        derive_seed(master_seed, seed_role::kCaseBase + auto_seed_index);
    ++auto_seed_index;
    if (kind == "source") {
      SourceSpec src;
      src.p = to_double(s->get("p"), "source probability");
      src.seed = s->find("seed") ? to_u64(s->get("seed"), "seed") : default_seed;
      node.kind = src;
    } else if (kind == "router") {
      RouterSpec r;
      const std::string mode = s->get("mode");
      if (mode == "mul") {
        r.mode.kind = OpKind::Multiplication;
      } else if (mode == "add") {
        r.mode.kind = OpKind::Addition;
      } else {
        throw ConfigError("unknown router mode '" + mode + "'");
      }
      r.mode.p_mux = to_double(s->get_or("p_mux", "0.5"), "p_mux");
      r.seed = s->find("seed") ? to_u64(s->get("seed"), "seed") : default_seed;
      r.f_from = s->get("f_from");
      r.b_from = s->get("b_from");
      r.buffer = buffer_from(cfg);
      node.kind = r;
    } else if (kind == "load") {
      LoadSpec l;
      l.from = s->get("from");
      node.kind = l;
    } else {
      throw ConfigError("unknown node kind '" + kind + "'");
    }
    nodes.push_back(std::move(node));
  }
  if (nodes.empty()) {
    throw ConfigError("network config has no [node] sections");
  }
  return nodes;
}

}  // namespace ppsim
