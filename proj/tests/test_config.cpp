#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "ccnsim/config.hpp"
#include "ccnsim/scenario.hpp"

using namespace ccnsim;
using nlohmann::json;

namespace {

bool has_code(const std::vector<ConfigError>& errors, const std::string& code)
{
  for (const auto& e : errors) {
    if (e.code == code) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("builtin presets serialize, parse back and validate cleanly")
{
  for (const std::string& name : preset_names()) {
    ScenarioConfig cfg = make_preset(name);
    json j = to_json(cfg);
    ScenarioConfig back = config_from_json(j);
    CHECK(validate(back).empty());
    CHECK(back.nodes.size() == cfg.nodes.size());
    CHECK(back.links.size() == cfg.links.size());
    CHECK(back.consumer.total_chunks == cfg.consumer.total_chunks);
    // Round-trip is a fixed point.
    CHECK(to_json(back) == j);
  }
}

TEST_CASE("misspelled strategy is rejected with the valid options listed")
{
  json j = to_json(make_preset("p2p_local"));
  j["nodes"][0]["strategy"] = "paralell";
  auto errors = validate(config_from_json(j));
  REQUIRE(has_code(errors, "unknown_strategy"));
  bool names_options = false;
  for (const auto& e : errors) {
    if (e.code == "unknown_strategy" && e.message.find("parallel") != std::string::npos &&
        e.message.find("loadsharing") != std::string::npos) {
      names_options = true;
    }
  }
  CHECK(names_options);
  CHECK_THROWS_AS(parse_and_validate(j), ConfigException);
}

TEST_CASE("validation catches unbound and doubly bound faces")
{
  json j = to_json(make_preset("handover"));
  // Add a face nothing connects to.
  j["nodes"][0]["faces"].push_back({{"id", 9}, {"label", "ghost"}});
  auto errors = validate(config_from_json(j));
  CHECK(has_code(errors, "unbound_face"));

  json j2 = to_json(make_preset("handover"));
  // Bind the same endpoint twice.
  json extra = j2["links"][0];
  j2["links"].push_back(extra);
  errors = validate(config_from_json(j2));
  CHECK(has_code(errors, "multibound_face"));
}

TEST_CASE("validation rejects a consumer prefix no repository serves")
{
  json j = to_json(make_preset("handover"));
  j["consumer"]["prefix"] = "/nowhere";
  auto errors = validate(config_from_json(j));
  CHECK(has_code(errors, "prefix_not_served"));
}

TEST_CASE("validation rejects non-positive pipeline and bad rte factors")
{
  json j = to_json(make_preset("handover"));
  j["consumer"]["pipeline"] = 0;
  CHECK(has_code(validate(config_from_json(j)), "bad_pipeline"));

  json j2 = to_json(make_preset("handover"));
  j2["nodes"][0]["strategy_config"]["rte_decrease_factor"] = 0.5;
  j2["nodes"][0]["strategy_config"]["rte_increase_factor"] = 0.25;
  CHECK(has_code(validate(config_from_json(j2)), "bad_rte_factors"));
}

TEST_CASE("delay preference requires a delay target")
{
  json j = to_json(make_preset("handover"));
  j["nodes"][0]["strategy"] = "adaptive";
  j["consumer"]["requirements"] = {{"preference", "delay"}};
  CHECK(has_code(validate(config_from_json(j)), "missing_delay_target"));
}

TEST_CASE("dotted-path overrides reach nested values")
{
  json j = to_json(make_preset("mobile_client"));
  set_json_path(j, "consumer.pipeline", 1);
  set_json_path(j, "nodes.0.strategy", "parallel");
  set_json_path(j, "links.1.retry_limit", 5);
  ScenarioConfig cfg = parse_and_validate(j);
  CHECK(cfg.consumer.pipeline == 1);
  CHECK(cfg.nodes[0].strategy == "parallel");
  CHECK(cfg.links[1].model.retry_limit == 5);

  CHECK_THROWS(set_json_path(j, "nodes.99.strategy", "parallel"));
  CHECK_THROWS(set_json_path(j, "consumer.no_such_field.x", 1));
}

TEST_CASE("override values parse as JSON with bare-string fallback")
{
  CHECK(parse_override_value("42") == json(42));
  CHECK(parse_override_value("0.5") == json(0.5));
  CHECK(parse_override_value("true") == json(true));
  CHECK(parse_override_value("[1,2]") == json::array({1, 2}));
  CHECK(parse_override_value("parallel") == json("parallel"));
}

TEST_CASE("expand_runs covers sweep x strategy x replication with distinct seeds")
{
  json j = to_json(make_preset("p2p_local"));
  j["replications"] = 3;
  j["sweep"] = json::array({{{"label", "a"}}, {{"label", "b"}}});
  j["compare_strategies"] = json::array({"bif-local", "parallel"});
  auto runs = expand_runs(j, std::nullopt);
  CHECK(runs.size() == 2 * 2 * 3);
  std::set<std::string> combos;
  for (const auto& r : runs) {
    combos.insert(r.sweep_label + "/" + r.strategy + "/" + std::to_string(r.replication));
    CHECK(r.seed == std::uint64_t(1 + r.replication));  // seed_base + replication
  }
  CHECK(combos.size() == runs.size());

  auto seeded = expand_runs(j, 500);
  CHECK(seeded[0].seed == 500);
}

TEST_CASE("summarize computes mean and sample stddev, excluding incomplete runs")
{
  json j = to_json(make_preset("p2p_local"));
  j["replications"] = 3;
  auto runs = expand_runs(j, std::nullopt);
  REQUIRE(runs.size() == 3);

  std::vector<MetricsReport> reports(3);
  reports[0].completed = true;
  reports[0].transfer_time_ms = 10.0;
  reports[0].interests_sent = 100;
  reports[1].completed = true;
  reports[1].transfer_time_ms = 14.0;
  reports[1].interests_sent = 120;
  reports[2].completed = false;  // excluded from the means
  reports[2].transfer_time_ms = 9999.0;

  auto rows = summarize(runs, reports);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].replications == 3);
  CHECK(rows[0].incomplete == 1);
  CHECK(rows[0].transfer_time_mean == doctest::Approx(12.0));
  CHECK(rows[0].transfer_time_stddev == doctest::Approx(std::sqrt(8.0)));  // n-1
  CHECK(rows[0].interests_sent_mean == doctest::Approx(110.0));
}

TEST_CASE("summary csv has the fixed header and deterministic formatting")
{
  SummaryRow row;
  row.sweep_label = "pos0";
  row.strategy = "default";
  row.mean_signal_q = 1.0;
  row.replications = 2;
  row.transfer_time_mean = 12.0;
  std::string csv = summary_to_csv({row});
  CHECK(csv.substr(0, csv.find('\n')) ==
        "sweep_label,strategy,mean_signal_q,replications,incomplete,"
        "transfer_time_ms_mean,transfer_time_ms_stddev,interests_sent_mean,"
        "interests_sent_stddev,timeouts_mean,duplicate_data_mean,"
        "vrtt_p50_ms_mean,cache_hits_mean");
  CHECK(csv.find("pos0,default,1.000000,2,0,12.000000,") != std::string::npos);
  CHECK(summary_to_csv({row}) == csv);
}

TEST_CASE("unknown preset name throws")
{
  CHECK_THROWS(make_preset("no_such_preset"));
}
