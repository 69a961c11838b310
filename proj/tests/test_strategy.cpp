#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <random>

#include "ccnsim/strategy.hpp"

using namespace ccnsim;

namespace {

FaceStats face(FaceId id, double rte = 1000.0, int pending = 0, double cost = 1.0,
               double delay_ewma = 0.0)
{
  FaceStats s;
  s.face = id;
  s.rte_ms = rte;
  s.pending = pending;
  s.cost = cost;
  s.delay_ewma_ms = delay_ewma;
  return s;
}

}  // namespace

TEST_CASE("rte decreases by 1/128 on data")
{
  StrategyConfig cfg;
  FaceStats s = face(0, 1000.0, 1);
  rte_on_data(s, cfg, 10.0, 0);
  CHECK(s.rte_ms == doctest::Approx(992.1875).epsilon(1e-12));
  CHECK(s.pending == 0);

  s = face(0, 128.0, 1);
  rte_on_data(s, cfg, 10.0, 0);
  CHECK(s.rte_ms == doctest::Approx(127.0).epsilon(1e-12));
}

TEST_CASE("rte increases by 1/8 on timeout")
{
  StrategyConfig cfg;
  FaceStats s = face(0, 1000.0, 1);
  rte_on_timeout(s, cfg);
  CHECK(s.rte_ms == doctest::Approx(1125.0).epsilon(1e-12));
  CHECK(s.pending == 0);
  CHECK(s.timeouts == 1);

  s = face(0, 8.0, 1);
  rte_on_timeout(s, cfg);
  CHECK(s.rte_ms == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("15 consecutive data arrivals match the closed-form power")
{
  StrategyConfig cfg;
  FaceStats s = face(0, 1000.0, 15);
  for (int i = 0; i < 15; ++i) {
    rte_on_data(s, cfg, 10.0, i);
  }
  CHECK(s.rte_ms == doctest::Approx(1000.0 * std::pow(127.0 / 128.0, 15)).epsilon(1e-12));
  CHECK(s.rte_ms == doctest::Approx(888.95).epsilon(1e-4));
}

TEST_CASE("rte updates commute: any order gives rte0 * (127/128)^d * (9/8)^t")
{
  StrategyConfig cfg;
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    int d = int(rng() % 20);
    int t = int(rng() % 6);
    std::vector<int> events;  // 0 = data, 1 = timeout
    events.insert(events.end(), std::size_t(d), 0);
    events.insert(events.end(), std::size_t(t), 1);
    std::shuffle(events.begin(), events.end(), rng);

    double rte0 = 500.0 + double(rng() % 2000);
    FaceStats s = face(0, rte0, d + t);
    for (int ev : events) {
      if (ev == 0) {
        rte_on_data(s, cfg, 10.0, 0);
      }
      else {
        rte_on_timeout(s, cfg);
      }
    }
    double expected = rte0 * std::pow(127.0 / 128.0, d) * std::pow(9.0 / 8.0, t);
    expected = std::clamp(expected, cfg.rte_min_ms, cfg.rte_max_ms);
    CHECK(s.rte_ms == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("equilibrium: one timeout balances about 15 data decreases")
{
  double d = std::log(9.0 / 8.0) / std::log(128.0 / 127.0);
  CHECK(d == doctest::Approx(15.03).epsilon(1e-3));
  // The engine-level criterion [1/20, 1/12] brackets this.
  CHECK(1.0 / (d + 1.0) > 1.0 / 20.0);
  CHECK(1.0 / (d + 1.0) < 1.0 / 12.0);
}

TEST_CASE("rte stays within its clamp bounds")
{
  StrategyConfig cfg;
  FaceStats s = face(0, 1.5, 1000);
  for (int i = 0; i < 200; ++i) {
    rte_on_data(s, cfg, 1.0, i);
    CHECK(s.rte_ms >= cfg.rte_min_ms);
  }
  for (int i = 0; i < 200; ++i) {
    rte_on_timeout(s, cfg);
    CHECK(s.rte_ms <= cfg.rte_max_ms);
  }
}

TEST_CASE("default strategy: fastest face first, others staggered")
{
  StrategyConfig cfg;
  Rng rng(1);
  auto d = default_select({face(0, 80.0), face(1, 50.0)}, cfg, rng);
  REQUIRE(d.sends.size() == 2);
  CHECK(d.sends[0].face == 1);
  CHECK(d.sends[0].delay_offset_us == 0);
  CHECK(d.sends[1].face == 0);
  CHECK(d.sends[1].delay_offset_us >= ms_to_us(50.0));
  CHECK(d.sends[1].delay_offset_us <= ms_to_us(50.0 + cfg.stagger_jitter_max_ms));
}

TEST_CASE("default strategy: single face, no staggered sends")
{
  StrategyConfig cfg;
  Rng rng(1);
  auto d = default_select({face(3, 200.0)}, cfg, rng);
  REQUIRE(d.sends.size() == 1);
  CHECK(d.sends[0].face == 3);
  CHECK(d.sends[0].delay_offset_us == 0);
}

TEST_CASE("default strategy: rte tie broken by lower face id")
{
  StrategyConfig cfg;
  Rng rng(1);
  auto d = default_select({face(7, 100.0), face(2, 100.0)}, cfg, rng);
  CHECK(d.sends[0].face == 2);
}

TEST_CASE("default strategy: selection invariant under uniform rte scaling")
{
  StrategyConfig cfg;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<FaceStats> stats;
    int n = 2 + int(rng() % 4);
    for (int i = 0; i < n; ++i) {
      stats.push_back(face(i, 1.0 + double(rng() % 1000)));
    }
    Rng r1(99), r2(99);
    auto base = default_select(stats, cfg, r1);
    double scale = 0.25 + double(rng() % 100) / 10.0;
    for (FaceStats& s : stats) {
      s.rte_ms *= scale;
    }
    auto scaled = default_select(stats, cfg, r2);
    CHECK(base.sends[0].face == scaled.sends[0].face);
  }
}

TEST_CASE("loadsharing picks the least pending face")
{
  auto d = loadsharing_select({face(0, 100, 3), face(1, 100, 1)});
  REQUIRE(d.sends.size() == 1);
  CHECK(d.sends[0].face == 1);
  CHECK(d.rationale == Rationale::LoadShare);

  d = loadsharing_select({face(0, 100, 0), face(1, 100, 0)});
  CHECK(d.sends[0].face == 0);  // tie: lower id
}

TEST_CASE("loadsharing never picks a face with more pending than another")
{
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<FaceStats> stats;
    int n = 1 + int(rng() % 5);
    int min_pending = 1 << 30;
    for (int i = 0; i < n; ++i) {
      int p = int(rng() % 20);
      stats.push_back(face(i, 100, p));
      min_pending = std::min(min_pending, p);
    }
    auto d = loadsharing_select(stats);
    REQUIRE(d.sends.size() == 1);
    CHECK(stats[std::size_t(d.sends[0].face)].pending == min_pending);

    // Invariance under adding a constant to every pending count.
    auto shifted = stats;
    for (FaceStats& s : shifted) {
      s.pending += 7;
    }
    CHECK(loadsharing_select(shifted).sends[0].face == d.sends[0].face);
  }
}

TEST_CASE("parallel floods every eligible face at offset 0")
{
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<FaceStats> stats;
    int n = 1 + int(rng() % 6);
    for (int i = 0; i < n; ++i) {
      stats.push_back(face(i, 1.0 + double(rng() % 500)));
    }
    auto d = parallel_select(stats);
    REQUIRE(d.sends.size() == stats.size());
    std::set<FaceId> seen;
    for (const auto& s : d.sends) {
      CHECK(s.delay_offset_us == 0);
      CHECK(seen.insert(s.face).second);  // no duplicate faces
    }
  }
}

TEST_CASE("bif-local sends cheapest first, next-cheapest after local_wait")
{
  StrategyConfig cfg;
  cfg.local_wait_ms = 30.0;
  auto d = bif_local_first_select({face(0, 100, 0, 3.0), face(1, 100, 0, 0.5)}, cfg);
  REQUIRE(d.sends.size() == 2);
  CHECK(d.sends[0].face == 1);
  CHECK(d.sends[0].delay_offset_us == 0);
  CHECK(d.sends[1].face == 0);
  CHECK(d.sends[1].delay_offset_us == ms_to_us(30.0));
  CHECK(d.rationale == Rationale::LocalFirst);
}

TEST_CASE("bif-local default wait is twice the local face rte")
{
  StrategyConfig cfg;  // local_wait_ms = 0 -> auto
  auto d = bif_local_first_select({face(0, 40.0, 0, 0.5), face(1, 100.0, 0, 3.0)}, cfg);
  REQUIRE(d.sends.size() == 2);
  CHECK(d.sends[1].delay_offset_us == ms_to_us(80.0));
}

TEST_CASE("bif-local with a single face sends locally only")
{
  StrategyConfig cfg;
  auto d = bif_local_first_select({face(0, 100, 0, 0.5)}, cfg);
  CHECK(d.sends.size() == 1);
}

TEST_CASE("adaptive cost cap excludes expensive faces")
{
  StrategyConfig cfg;
  AdaptiveState state;
  AppRequirements reqs;
  reqs.max_cost = 1.0;
  reqs.preference = MetricPreference::Throughput;
  // WiFi cost 1, LTE cost 3: LTE never used.
  for (int i = 0; i < 50; ++i) {
    auto d = adaptive_select({face(0, 100, 0, 1.0), face(1, 100, 0, 3.0)}, reqs, cfg,
                             state, i * 1000);
    REQUIRE(d.sends.size() == 1);
    CHECK(d.sends[0].face == 0);
  }
}

TEST_CASE("adaptive falls back to the cheapest face when nothing fits the budget")
{
  StrategyConfig cfg;
  AdaptiveState state;
  AppRequirements reqs;
  reqs.max_cost = 0.4;
  auto d = adaptive_select({face(0, 100, 0, 3.0), face(1, 100, 0, 0.5)}, reqs, cfg, state, 0);
  REQUIRE(d.sends.size() == 1);
  CHECK(d.sends[0].face == 1);
  CHECK(d.rationale == Rationale::CostConstrained);
}

TEST_CASE("adaptive delay preference picks the cheapest face meeting the target")
{
  StrategyConfig cfg;
  AdaptiveState state;
  AppRequirements reqs;
  reqs.preference = MetricPreference::Delay;
  reqs.delay_target_ms = 200.0;
  auto d = adaptive_select({face(0, 100, 0, 1.0, 120.0), face(1, 100, 0, 3.0, 80.0)},
                           reqs, cfg, state, 0);
  REQUIRE(d.sends.size() == 1);
  CHECK(d.sends[0].face == 0);  // WiFi meets 200ms and is cheaper
}

TEST_CASE("adaptive floods within flood_trigger decisions of a delay violation")
{
  StrategyConfig cfg;
  AdaptiveState state;
  AppRequirements reqs;
  reqs.preference = MetricPreference::Delay;
  reqs.delay_target_ms = 200.0;

  std::vector<FaceStats> good = {face(0, 100, 0, 1.0, 120.0), face(1, 100, 0, 3.0, 300.0)};
  std::vector<FaceStats> bad = {face(0, 100, 0, 1.0, 400.0), face(1, 100, 0, 3.0, 300.0)};

  CHECK(adaptive_select(good, reqs, cfg, state, 0).sends.size() == 1);
  int decisions_until_flood = 0;
  for (int i = 1; i <= cfg.adaptive.flood_trigger; ++i) {
    auto d = adaptive_select(bad, reqs, cfg, state, i * 1000);
    decisions_until_flood = i;
    if (d.rationale == Rationale::Flood) {
      break;
    }
  }
  CHECK(decisions_until_flood <= cfg.adaptive.flood_trigger);
  CHECK(adaptive_select(bad, reqs, cfg, state, 99000).rationale == Rationale::Flood);
}

TEST_CASE("adaptive stops flooding after calm_down of satisfied constraint")
{
  StrategyConfig cfg;
  AdaptiveState state;
  state.flooding = true;
  AppRequirements reqs;
  reqs.preference = MetricPreference::Delay;
  reqs.delay_target_ms = 200.0;

  std::vector<FaceStats> good = {face(0, 100, 0, 1.0, 120.0), face(1, 100, 0, 3.0, 300.0)};
  TimeUs t = 0;
  CHECK(adaptive_select(good, reqs, cfg, state, t).rationale == Rationale::Flood);
  t += ms_to_us(cfg.adaptive.calm_down_ms) + 1;
  auto d = adaptive_select(good, reqs, cfg, state, t);
  CHECK(d.rationale != Rationale::Flood);
  CHECK(d.sends.size() == 1);
}

TEST_CASE("adaptive never exceeds max_cost except flagged CostConstrained")
{
  StrategyConfig cfg;
  std::mt19937_64 rng(31);
  AppRequirements reqs;
  reqs.max_cost = 1.5;
  for (int trial = 0; trial < 500; ++trial) {
    AdaptiveState state;
    state.flooding = (rng() % 2) == 0;
    std::vector<FaceStats> stats;
    int n = 1 + int(rng() % 4);
    for (int i = 0; i < n; ++i) {
      stats.push_back(face(i, 100, 0, 0.5 + double(rng() % 6), double(rng() % 500)));
    }
    reqs.preference = MetricPreference(rng() % 3);
    reqs.delay_target_ms = 200.0;
    auto d = adaptive_select(stats, reqs, cfg, state, TimeUs(trial) * 1000);
    for (const auto& send : d.sends) {
      if (stats[std::size_t(send.face)].cost > *reqs.max_cost) {
        CHECK(d.rationale == Rationale::CostConstrained);
      }
    }
  }
}

TEST_CASE("adaptive loss preference uses the two lowest-loss faces")
{
  StrategyConfig cfg;
  AdaptiveState state;
  AppRequirements reqs;
  reqs.preference = MetricPreference::Loss;

  FaceStats lossy = face(0);
  lossy.data_total = 50;
  lossy.timeouts = 50;  // 50% loss
  FaceStats clean1 = face(1);
  clean1.data_total = 100;  // 0%
  FaceStats clean2 = face(2);
  clean2.data_total = 90;
  clean2.timeouts = 10;  // 10%

  auto d = adaptive_select({lossy, clean1, clean2}, reqs, cfg, state, 0);
  REQUIRE(d.sends.size() == 2);
  std::set<FaceId> chosen;
  for (const auto& s : d.sends) {
    chosen.insert(s.face);
  }
  CHECK(chosen == std::set<FaceId>{1, 2});
}

TEST_CASE("strategy names round-trip")
{
  for (const char* n : {"default", "loadsharing", "parallel", "bif-local", "adaptive"}) {
    auto k = strategy_from_name(n);
    REQUIRE(k.has_value());
    CHECK(strategy_name(*k) == n);
  }
  CHECK_FALSE(strategy_from_name("paralell").has_value());
}
