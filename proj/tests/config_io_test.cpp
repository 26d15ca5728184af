#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "ppsim/config.hpp"
#include "ppsim/io.hpp"
#include "ppsim/rng.hpp"
#include "ppsim/study.hpp"

using namespace ppsim;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const TextConfig cfg = parse_config(
      "# comment\n"
      "[management]\n"
      "p_ext = 0.7\n"
      "; another comment\n"
      "[schedule]\n"
      "step = 0.2 1.0\n"
      "step = 0.5\n"
      "[seeds]\n"
      "master = 42\n");
  const ManagementConfig mc = management_from(cfg);
  CHECK(mc.p_ext == 0.7);
  REQUIRE(mc.schedule.size() == 2);
  CHECK(mc.schedule[0].p_tar == 0.2);
  CHECK(mc.schedule[1].hold_s == 1.0);  // default hold
  CHECK(master_seed_from(cfg, 7) == 42);
  CHECK(master_seed_from(TextConfig{}, 7) == 7);
}

TEST_CASE("config errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_config("key = 1\n"),
                       doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[a]\nnot-an-entry\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("[a\n"), doctest::Contains("line 1"),
                       ConfigError);
  CHECK_THROWS_AS(management_from(parse_config("[management]\np_ext = x\n")),
                  ConfigError);
}

TEST_CASE("electrical and buffer sections") {
  const TextConfig cfg = parse_config(
      "[electrical]\n"
      "v_source = 12\n"
      "r_load = 24\n"
      "[buffer]\n"
      "kind = ledger\n"
      "capacity = 4\n"
      "initial_charge = 2\n"
      "starvation = error\n");
  const ElectricalParams params = electrical_from(cfg);
  CHECK(params.v_source == 12.0);
  CHECK(params.p_unit() == doctest::Approx(6.0));
  const BufferConfig buffer = buffer_from(cfg);
  CHECK(buffer.kind == BufferKind::QuantizedLedger);
  CHECK(buffer.capacity == 4);
  CHECK(buffer.initial_charge == 2);
  CHECK(buffer.starvation == StarvationPolicy::Error);
}

TEST_CASE("network nodes from config") {
  const TextConfig cfg = parse_config(
      "[node]\n"
      "id = a\n"
      "kind = source\n"
      "p = 0.8\n"
      "seed = 5\n"
      "[node]\n"
      "id = b\n"
      "kind = source\n"
      "p = 0.9\n"
      "[node]\n"
      "id = r1\n"
      "kind = router\n"
      "mode = mul\n"
      "f_from = a\n"
      "b_from = b\n"
      "[node]\n"
      "id = sink\n"
      "kind = load\n"
      "from = r1\n");
  const std::vector<NodeSpec> nodes = nodes_from(cfg, 99);
  REQUIRE(nodes.size() == 4);
  CHECK(std::get<SourceSpec>(nodes[0].kind).seed == 5);
  // Unseeded nodes get deterministic children of the master seed.
  CHECK(std::get<SourceSpec>(nodes[1].kind).seed ==
        derive_seed(99, seed_role::kCaseBase + 1));
  CHECK(std::get<RouterSpec>(nodes[2].kind).f_from == "a");
  CHECK_NOTHROW(Network::build(nodes));
}

TEST_CASE("config digest is stable under reformatting") {
  const nlohmann::json a{{"command", "case"}, {"seed", 1}, {"p_f", 0.8}};
  const nlohmann::json b{{"p_f", 0.8}, {"seed", 1}, {"command", "case"}};
  CHECK(config_digest(a) == config_digest(b));
  const nlohmann::json c{{"command", "case"}, {"seed", 2}, {"p_f", 0.8}};
  CHECK(config_digest(a) != config_digest(c));
}

TEST_CASE("generator output is pinned for cross-platform stability") {
  // Frozen values: a change here means every golden file in the repo
  // silently moved.
  SeededGenerator gen(0);
  CHECK(gen.next_u64() == 11091344671253066420ULL);
  CHECK(gen.next_u64() == 13793997310169335082ULL);
  CHECK(gen.next_u64() == 1900383378846508768ULL);
  CHECK(derive_seed(0, 0) == 16294208416658607535ULL);
  CHECK(derive_seed(0, 1) == 7960286522194355700ULL);
  CHECK(derive_seed(42, 7) == 14769051326987775908ULL);
}

TEST_CASE("trace csv golden file") {
  const CaseRunOutcome out = run_case(verification_cases()[1], 64.0 / 25000.0,
                                      1);
  const std::string tmp = "golden_check_trace.csv";
  write_trace_csv(tmp, out.traces);
  const std::string got = read_file(tmp);
  const std::string want =
      read_file(std::string(PPSIM_SOURCE_DIR) + "/tests/golden/trace_case1_seed1.csv");
  CHECK(got == want);
  std::remove(tmp.c_str());
}

TEST_CASE("series writer format") {
  PowerSeries s;
  s.t0 = 0.0;
  s.dt = 0.5;
  s.samples = {5.0, 2.5};
  const std::string tmp = "series_check.csv";
  write_series_csv(tmp, s);
  CHECK(read_file(tmp) == "t,watts\n0,5\n0.5,2.5\n");
  std::remove(tmp.c_str());
}

TEST_CASE("series json export") {
  PowerSeries s;
  s.t0 = 0.0;
  s.dt = 0.5;
  s.samples = {5.0, 2.5};
  const std::string tmp = "series_check.json";
  write_series_json(tmp, s);
  const nlohmann::json j = nlohmann::json::parse(read_file(tmp));
  CHECK(j["dt"] == 0.5);
  CHECK(j["samples"].size() == 2);
  CHECK(j["samples"][0] == 5.0);
  CHECK(!j.contains("base_power"));
  std::remove(tmp.c_str());

  const PowerSeries norm = normalize(s, 5.0);
  write_series_json(tmp, norm);
  const nlohmann::json jn = nlohmann::json::parse(read_file(tmp));
  CHECK(jn["normalized"] == true);
  CHECK(jn["base_power"] == 5.0);
  std::remove(tmp.c_str());
}
