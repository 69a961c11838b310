#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "ccnsim/scenario.hpp"

using namespace ccnsim;
using nlohmann::json;

TEST_CASE("preset registry lists every builtin")
{
  auto names = preset_names();
  for (const char* expected : {"mobile_client", "mobile_client_moved_ap", "retry_sweep",
                               "handover", "p2p_local"}) {
    CHECK(std::count(names.begin(), names.end(), expected) == 1);
  }
}

TEST_CASE("worker count never changes results")
{
  json j = to_json(make_preset("p2p_local"));
  j["replications"] = 4;
  auto serial = run_scenario_json(j, 1);
  auto threaded = run_scenario_json(j, 8);
  REQUIRE(serial.reports.size() == threaded.reports.size());
  for (std::size_t i = 0; i < serial.reports.size(); ++i) {
    CHECK(serial.reports[i].trace_hash == threaded.reports[i].trace_hash);
    CHECK(serial.reports[i].transfer_time_ms == threaded.reports[i].transfer_time_ms);
  }
  CHECK(summary_to_csv(serial.summary) == summary_to_csv(threaded.summary));
}

TEST_CASE("compare_strategies overrides only the consumer node")
{
  json j = to_json(make_preset("p2p_local"));
  j["replications"] = 1;
  j["compare_strategies"] = json::array({"bif-local", "parallel"});
  ScenarioConfig base = parse_and_validate(j);
  auto runs = expand_runs(j, std::nullopt);
  REQUIRE(runs.size() == 2);
  for (const auto& run : runs) {
    ScenarioConfig cfg = parse_and_validate(run.config_json);
    REQUIRE(cfg.nodes.size() == base.nodes.size());
    for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
      if (cfg.nodes[i].id == cfg.consumer.node) {
        CHECK(cfg.nodes[i].strategy == run.strategy);
      }
      else {
        CHECK(cfg.nodes[i].strategy == base.nodes[i].strategy);
      }
    }
  }
}

TEST_CASE("p2p preset: full local seeding answers everything from peers")
{
  json j = to_json(make_preset("p2p_local"));
  j["replications"] = 2;
  auto result = run_scenario_json(j, 2);
  for (const auto& r : result.reports) {
    REQUIRE(r.completed);
    CHECK(r.per_face_sends.count("up") == 0);  // upstream never used
    long hits = 0;
    for (const auto& [node, count] : r.cache_hits) {
      hits += count;
    }
    CHECK(hits == 400);
  }
}

TEST_CASE("handover preset: re-expressed chunks are served from the midpath cache")
{
  json j = to_json(make_preset("handover"));
  j["replications"] = 1;
  auto result = run_scenario_json(j, 1);
  REQUIRE(result.reports.size() == 1);
  const MetricsReport& r = result.reports[0];
  REQUIRE(r.completed);
  CHECK(r.cache_hits.count("r3") == 1);
  CHECK(r.cache_hits.at("r3") >= 90);  // about one pipeline window in flight
  CHECK(r.consumer_retx >= 90);
}

TEST_CASE("summary groups follow sweep then strategy order")
{
  json j = to_json(make_preset("retry_sweep"));
  j["replications"] = 1;
  set_json_path(j, "consumer.total_chunks", 50);
  auto result = run_scenario_json(j, 4);
  REQUIRE(result.summary.size() == 13 * 3);
  // Rows iterate strategies within each sweep point, in config order.
  CHECK(result.summary[0].sweep_label == result.summary[1].sweep_label);
  CHECK(result.summary[0].strategy == "default");
  CHECK(result.summary[1].strategy == "loadsharing");
  CHECK(result.summary[2].strategy == "parallel");
  CHECK(result.summary[3].sweep_label != result.summary[0].sweep_label);
}

TEST_CASE("mobile-client builder honors its parameters")
{
  MobileClientParams params;
  params.total_chunks = 123;
  params.replications = 2;
  params.positions = {{1.0, 1.0}, {0.5, 0.5}};
  ScenarioConfig cfg = build_mobile_client(params);
  CHECK(cfg.consumer.total_chunks == 123);
  CHECK(cfg.replications == 2);
  CHECK(cfg.sweep.size() == 2);
  CHECK(cfg.sweep[1].mean_signal_q == doctest::Approx(0.5));
  CHECK(validate(cfg).empty());

  params.positions.clear();
  CHECK_THROWS_AS(build_mobile_client(params), ConfigException);
}
