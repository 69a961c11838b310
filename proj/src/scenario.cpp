#include "ccnsim/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace ccnsim {

using nlohmann::json;

namespace {

constexpr const char* kPrefix = "/file";

FaceCfg make_face(int id, std::string label, double cost = 1.0, std::string kind = "p2p")
{
  FaceCfg f;
  f.id = id;
  f.label = std::move(label);
  f.cost = cost;
  f.kind = std::move(kind);
  return f;
}

LinkCfg wired_link(std::string a, std::string b, double delay_ms, double bandwidth = 1000.0)
{
  LinkCfg l;
  l.a = std::move(a);
  l.b = std::move(b);
  l.model.base_delay_ms = delay_ms;
  l.model.jitter_ms = 0.0;
  l.model.bandwidth_pkts_per_ms = bandwidth;
  l.model.loss.fixed = 0.0;
  l.model.retry_limit = 0;
  l.model.per_retry_delay_ms = 0.0;
  return l;
}

}  // namespace

ScenarioConfig build_mobile_client(const MobileClientParams& params)
{
  if (params.positions.empty()) {
    throw ConfigException({{"empty_grid", "positions", "position grid must be non-empty"}});
  }

  ScenarioConfig cfg;
  cfg.name = params.move_ap_variant ? "mobile_client_moved_ap" : "mobile_client";
  cfg.replications = params.replications;
  cfg.horizon_ms = 600000.0;

  NodeCfg client;
  client.id = "client";
  client.role = "client";
  client.strategy = "default";
  client.processing_delay_ms = params.processing_delay_ms;
  client.faces = {make_face(1, "ap1"), make_face(2, "ap2")};
  client.fib = {{kPrefix, {"ap1", "ap2"}}};
  cfg.nodes.push_back(client);

  for (int i = 1; i <= 2; ++i) {
    NodeCfg r;
    r.id = "r" + std::to_string(i);
    r.role = "router";
    r.cs_capacity = 2048;
    r.faces = {make_face(1, "dn"), make_face(2, "up")};
    r.fib = {{kPrefix, {"up"}}};
    cfg.nodes.push_back(r);
  }

  NodeCfg r3;
  r3.id = "r3";
  r3.role = "router";
  r3.cs_capacity = 2048;
  r3.faces = {make_face(1, "dn1"), make_face(2, "dn2"), make_face(3, "up")};
  r3.fib = {{kPrefix, {"up"}}};
  cfg.nodes.push_back(r3);

  NodeCfg repo;
  repo.id = "repo";
  repo.role = "repository";
  repo.faces = {make_face(1, "dn")};
  repo.served_prefixes = {kPrefix};
  cfg.nodes.push_back(repo);

  auto wireless = [&](std::string a, std::string b) {
    LinkCfg l;
    l.a = std::move(a);
    l.b = std::move(b);
    l.model.base_delay_ms = params.wireless_delay_ms;
    l.model.jitter_ms = params.wireless_jitter_ms;
    l.model.bandwidth_pkts_per_ms = params.wireless_bandwidth;
    l.model.retry_limit = params.retry_limit;
    l.model.per_retry_delay_ms = params.per_retry_delay_ms;
    l.signal = SignalProfile::constant(1.0);
    return l;
  };
  cfg.links.push_back(wireless("client.ap1", "r1.dn"));   // links.0
  cfg.links.push_back(wireless("client.ap2", "r2.dn"));   // links.1
  cfg.links.push_back(wired_link("r1.up", "r3.dn1", 1.0));
  cfg.links.push_back(wired_link("r2.up", "r3.dn2", 1.0));
  cfg.links.push_back(wired_link("r3.up", "repo.dn", 2.0));

  cfg.consumer.node = "client";
  cfg.consumer.prefix = kPrefix;
  cfg.consumer.total_chunks = params.total_chunks;
  cfg.consumer.pipeline = params.pipeline;

  for (std::size_t i = 0; i < params.positions.size(); ++i) {
    auto [q1, q2] = params.positions[i];
    if (params.move_ap_variant) {
      q2 = 1.0;
    }
    SweepPointCfg point;
    point.label = "pos" + std::to_string(i);
    point.set["links.0.signal"] = json::array({json::array({0.0, q1})});
    point.set["links.1.signal"] = json::array({json::array({0.0, q2})});
    point.mean_signal_q = (q1 + q2) / 2.0;
    cfg.sweep.push_back(std::move(point));
  }

  cfg.compare_strategies = {"default", "loadsharing", "parallel"};
  return cfg;
}

ScenarioConfig build_retry_sweep(const RetrySweepParams& params)
{
  ScenarioConfig cfg;
  cfg.name = "retry_sweep";
  cfg.replications = params.replications;
  cfg.horizon_ms = 600000.0;

  MobileClientParams base;
  base.total_chunks = params.total_chunks;
  base.pipeline = params.pipeline;
  base.replications = params.replications;
  base.positions = {{1.0, 1.0}};
  ScenarioConfig topo = build_mobile_client(base);
  cfg.nodes = topo.nodes;
  cfg.links = topo.links;
  cfg.consumer = topo.consumer;

  // Asymmetric wireless faces: the second access point is much farther
  // away, so blindly balancing queue lengths across both faces parks a
  // large share of the window on a slow path.
  cfg.links[0].model.base_delay_ms = 5.0;
  cfg.links[0].model.jitter_ms = 0.3;
  cfg.links[0].model.bandwidth_pkts_per_ms = 30.0;
  cfg.links[0].model.loss.fixed = params.frame_loss;
  cfg.links[0].model.per_retry_delay_ms = 2.0;
  cfg.links[1].model.base_delay_ms = 45.0;
  cfg.links[1].model.jitter_ms = 0.3;
  cfg.links[1].model.bandwidth_pkts_per_ms = 30.0;
  cfg.links[1].model.loss.fixed = params.frame_loss;
  cfg.links[1].model.per_retry_delay_ms = 2.0;

  for (int retries : params.retry_grid) {
    SweepPointCfg point;
    point.label = "retry" + std::to_string(retries);
    point.set["links.0.retry_limit"] = retries;
    point.set["links.1.retry_limit"] = retries;
    cfg.sweep.push_back(std::move(point));
  }
  cfg.compare_strategies = {"default", "loadsharing", "parallel"};
  return cfg;
}

ScenarioConfig build_handover(const HandoverParams& params)
{
  ScenarioConfig cfg;
  cfg.name = "handover";
  cfg.replications = params.replications;
  cfg.horizon_ms = 600000.0;

  NodeCfg client;
  client.id = "client";
  client.role = "client";
  client.strategy = "default";
  FaceCfg a1 = make_face(1, "a1");
  a1.down_at_ms = params.handover_at_ms;  // detach from AR1
  FaceCfg a2 = make_face(2, "a2");
  a2.up_at_ms = params.handover_at_ms;    // attach to AR2
  client.faces = {a1, a2};
  client.fib = {{kPrefix, {"a1", "a2"}}};
  cfg.nodes.push_back(client);

  for (int i = 1; i <= 2; ++i) {
    NodeCfg ar;
    ar.id = "ar" + std::to_string(i);
    ar.role = "router";
    ar.cs_capacity = 256;
    ar.faces = {make_face(1, "dn"), make_face(2, "up")};
    ar.fib = {{kPrefix, {"up"}}};
    cfg.nodes.push_back(ar);
  }

  NodeCfg r3;
  r3.id = "r3";
  r3.role = "router";
  r3.cs_capacity = params.r3_cache_capacity;
  r3.faces = {make_face(1, "d1"), make_face(2, "d2"), make_face(3, "up")};
  r3.fib = {{kPrefix, {"up"}}};
  cfg.nodes.push_back(r3);

  NodeCfg repo;
  repo.id = "repo";
  repo.role = "repository";
  repo.faces = {make_face(1, "dn")};
  repo.served_prefixes = {kPrefix};
  cfg.nodes.push_back(repo);

  auto access = [&](std::string a, std::string b) {
    LinkCfg l = wired_link(std::move(a), std::move(b), params.access_delay_ms, 100.0);
    l.model.jitter_ms = 0.1;
    return l;
  };
  cfg.links.push_back(access("client.a1", "ar1.dn"));
  cfg.links.push_back(access("client.a2", "ar2.dn"));
  cfg.links.push_back(wired_link("ar1.up", "r3.d1", params.ar_core_delay_ms, 200.0));
  cfg.links.push_back(wired_link("ar2.up", "r3.d2", params.ar_core_delay_ms, 200.0));
  cfg.links.push_back(wired_link("r3.up", "repo.dn", params.core_repo_delay_ms, 200.0));

  cfg.consumer.node = "client";
  cfg.consumer.prefix = kPrefix;
  cfg.consumer.total_chunks = params.total_chunks;
  cfg.consumer.pipeline = params.pipeline;
  cfg.consumer.interest_timeout_ms = params.interest_timeout_ms;
  return cfg;
}

ScenarioConfig build_p2p_local(const P2pLocalParams& params)
{
  ScenarioConfig cfg;
  cfg.name = "p2p_local";
  cfg.replications = params.replications;
  cfg.horizon_ms = 600000.0;

  NodeCfg client;
  client.id = "client";
  client.role = "client";
  client.strategy = "bif-local";
  client.strategy_config.local_wait_ms = params.local_wait_ms;
  client.faces = {make_face(1, "loc", 0.5, "broadcast"), make_face(2, "up", 3.0)};
  client.fib = {{kPrefix, {"loc", "up"}}};
  cfg.nodes.push_back(client);

  MediumCfg lan;
  lan.id = "lan";
  lan.members = {"client.loc"};
  lan.model.base_delay_ms = 1.5;
  lan.model.jitter_ms = 0.1;
  lan.model.bandwidth_pkts_per_ms = 50.0;
  lan.model.loss.fixed = 0.0;
  lan.model.retry_limit = 0;

  for (int i = 0; i < params.n_peers; ++i) {
    NodeCfg peer;
    peer.id = "p" + std::to_string(i + 1);
    peer.role = "router";
    peer.cs_capacity = static_cast<std::size_t>(params.total_chunks);
    peer.faces = {make_face(1, "loc", 0.5, "broadcast")};
    SeedCfg seed;
    seed.prefix = kPrefix;
    seed.total_chunks = params.total_chunks;
    seed.fraction = params.seed_fraction;
    seed.stride_index = i;
    seed.stride_count = params.n_peers;
    peer.seed = seed;
    cfg.nodes.push_back(peer);
    lan.members.push_back(peer.id + ".loc");
  }
  cfg.media.push_back(std::move(lan));

  NodeCfg r1;
  r1.id = "r1";
  r1.role = "router";
  r1.cs_capacity = 1024;
  r1.faces = {make_face(1, "dn"), make_face(2, "up")};
  r1.fib = {{kPrefix, {"up"}}};
  cfg.nodes.push_back(r1);

  NodeCfg repo;
  repo.id = "repo";
  repo.role = "repository";
  repo.faces = {make_face(1, "dn")};
  repo.served_prefixes = {kPrefix};
  cfg.nodes.push_back(repo);

  cfg.links.push_back(wired_link("client.up", "r1.dn", 15.0, 20.0));
  cfg.links.push_back(wired_link("r1.up", "repo.dn", 10.0, 20.0));

  cfg.consumer.node = "client";
  cfg.consumer.prefix = kPrefix;
  cfg.consumer.total_chunks = params.total_chunks;
  cfg.consumer.pipeline = params.pipeline;
  cfg.consumer.interest_timeout_ms = 200.0;
  return cfg;
}

std::vector<std::string> preset_names()
{
  return {"mobile_client", "mobile_client_moved_ap", "retry_sweep", "handover", "p2p_local"};
}

ScenarioConfig make_preset(const std::string& name)
{
  if (name == "mobile_client") {
    return build_mobile_client({});
  }
  if (name == "mobile_client_moved_ap") {
    MobileClientParams p;
    p.move_ap_variant = true;
    return build_mobile_client(p);
  }
  if (name == "retry_sweep") {
    return build_retry_sweep({});
  }
  if (name == "handover") {
    return build_handover({});
  }
  if (name == "p2p_local") {
    return build_p2p_local({});
  }
  throw std::runtime_error("unknown preset '" + name + "'; available: mobile_client, "
                           "mobile_client_moved_ap, retry_sweep, handover, p2p_local");
}

// ---- runner ---------------------------------------------------------------

std::vector<RunSpec> expand_runs(const json& base, std::optional<std::uint64_t> seed_override)
{
  // Validate the base config up front so errors carry clean paths.
  ScenarioConfig cfg = parse_and_validate(base);

  int consumer_idx = -1;
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
    if (cfg.nodes[i].id == cfg.consumer.node) {
      consumer_idx = static_cast<int>(i);
    }
  }

  std::vector<SweepPointCfg> points = cfg.sweep;
  if (points.empty()) {
    SweepPointCfg all;
    all.label = "all";
    points.push_back(all);
  }
  std::vector<std::string> strategies = cfg.compare_strategies;
  if (strategies.empty()) {
    strategies.push_back(cfg.nodes[static_cast<std::size_t>(consumer_idx)].strategy);
  }

  std::uint64_t seed_base = seed_override.value_or(cfg.seed_base);

  std::vector<RunSpec> specs;
  for (const SweepPointCfg& point : points) {
    for (const std::string& strategy : strategies) {
      json variant = base;
      for (const auto& [path, value] : point.set) {
        set_json_path(variant, path, value);
      }
      set_json_path(variant, "nodes." + std::to_string(consumer_idx) + ".strategy",
                    json(strategy));
      parse_and_validate(variant);  // sweep overrides must stay valid
      for (int r = 0; r < cfg.replications; ++r) {
        RunSpec spec;
        spec.sweep_label = point.label;
        spec.strategy = strategy;
        spec.replication = r;
        spec.seed = seed_base + static_cast<std::uint64_t>(r);
        spec.mean_signal_q = point.mean_signal_q;
        spec.config_json = variant;
        specs.push_back(std::move(spec));
      }
    }
  }
  return specs;
}

ScenarioResult run_scenario_json(const json& base, int jobs, TraceMode trace,
                                 std::optional<std::uint64_t> seed_override)
{
  ScenarioResult result;
  result.specs = expand_runs(base, seed_override);
  result.reports.resize(result.specs.size());
  result.traces.resize(result.specs.size());

  auto run_one = [&](std::size_t i) {
    const RunSpec& spec = result.specs[i];
    ScenarioConfig cfg = config_from_json(spec.config_json);
    SimOptions opts;
    opts.trace = trace;
    Simulation sim(cfg, spec.seed, opts);
    result.reports[i] = sim.run();
    if (trace == TraceMode::Full) {
      result.traces[i] = sim.trace_log();
    }
  };

  jobs = std::max(1, jobs);
  if (jobs == 1 || result.specs.size() <= 1) {
    for (std::size_t i = 0; i < result.specs.size(); ++i) {
      run_one(i);
    }
  }
  else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    int n_workers = std::min<int>(jobs, static_cast<int>(result.specs.size()));
    for (int w = 0; w < n_workers; ++w) {
      workers.emplace_back([&] {
        while (true) {
          std::size_t i = next.fetch_add(1);
          if (i >= result.specs.size()) {
            return;
          }
          run_one(i);
        }
      });
    }
    for (std::thread& t : workers) {
      t.join();
    }
  }

  result.summary = summarize(result.specs, result.reports);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<RunSpec>& specs,
                                  const std::vector<MetricsReport>& reports)
{
  struct Group {
    SummaryRow row;
    std::vector<const MetricsReport*> runs;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const RunSpec& spec = specs[i];
    Group* group = nullptr;
    for (Group& g : groups) {
      if (g.row.sweep_label == spec.sweep_label && g.row.strategy == spec.strategy) {
        group = &g;
      }
    }
    if (group == nullptr) {
      groups.emplace_back();
      group = &groups.back();
      group->row.sweep_label = spec.sweep_label;
      group->row.strategy = spec.strategy;
      group->row.mean_signal_q = spec.mean_signal_q;
    }
    group->runs.push_back(&reports[i]);
  }

  auto mean_std = [](const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) {
      mean += x;
    }
    mean /= xs.empty() ? 1.0 : static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) {
      var += (x - mean) * (x - mean);
    }
    double stddev = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
    return std::make_pair(mean, stddev);
  };

  std::vector<SummaryRow> rows;
  for (Group& g : groups) {
    SummaryRow row = g.row;
    row.replications = static_cast<int>(g.runs.size());
    std::vector<double> times, interests, timeouts, dups, vrtts, hits;
    for (const MetricsReport* r : g.runs) {
      if (!r->completed) {
        row.incomplete++;
        continue;  // incomplete runs are excluded from the means
      }
      times.push_back(r->transfer_time_ms);
      interests.push_back(static_cast<double>(r->interests_sent));
      timeouts.push_back(static_cast<double>(r->timeouts));
      dups.push_back(static_cast<double>(r->duplicate_data));
      vrtts.push_back(r->vrtt_p50_ms);
      double h = 0;
      for (const auto& [node, count] : r->cache_hits) {
        h += static_cast<double>(count);
      }
      hits.push_back(h);
    }
    std::tie(row.transfer_time_mean, row.transfer_time_stddev) = mean_std(times);
    std::tie(row.interests_sent_mean, row.interests_sent_stddev) = mean_std(interests);
    row.timeouts_mean = mean_std(timeouts).first;
    row.duplicate_data_mean = mean_std(dups).first;
    row.vrtt_p50_mean = mean_std(vrtts).first;
    row.cache_hits_mean = mean_std(hits).first;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows)
{
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return std::string(buf);
  };
  std::string csv =
      "sweep_label,strategy,mean_signal_q,replications,incomplete,"
      "transfer_time_ms_mean,transfer_time_ms_stddev,interests_sent_mean,"
      "interests_sent_stddev,timeouts_mean,duplicate_data_mean,"
      "vrtt_p50_ms_mean,cache_hits_mean\n";
  for (const SummaryRow& r : rows) {
    csv += r.sweep_label + "," + r.strategy + "," + fmt(r.mean_signal_q) + "," +
           std::to_string(r.replications) + "," + std::to_string(r.incomplete) + "," +
           fmt(r.transfer_time_mean) + "," + fmt(r.transfer_time_stddev) + "," +
           fmt(r.interests_sent_mean) + "," + fmt(r.interests_sent_stddev) + "," +
           fmt(r.timeouts_mean) + "," + fmt(r.duplicate_data_mean) + "," +
           fmt(r.vrtt_p50_mean) + "," + fmt(r.cache_hits_mean) + "\n";
  }
  return csv;
}

}  // namespace ccnsim
