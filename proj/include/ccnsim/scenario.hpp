#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ccnsim/config.hpp"
#include "ccnsim/engine.hpp"
#include "ccnsim/metrics.hpp"

namespace ccnsim {

// ---- scenario builders -------------------------------------------------

struct MobileClientParams {
  /// Per-position signal quality of the two wireless faces. Positions map
  /// linearly onto quality; absolute distances are not modeled.
  std::vector<std::pair<double, double>> positions = {
      {1.0, 1.0}, {0.9, 0.9}, {0.8, 0.8}, {0.65, 0.65}, {0.5, 0.5}, {0.35, 0.35}};
  long total_chunks = 20000;
  int pipeline = 100;
  int retry_limit = 3;
  double per_retry_delay_ms = 4.0;
  double wireless_delay_ms = 5.0;
  double wireless_jitter_ms = 0.5;
  double wireless_bandwidth = 30.0;  // packets/ms
  double processing_delay_ms = 0.0;
  int replications = 30;
  bool move_ap_variant = false;  // vary only one access point's quality
};

/// Client - {AP1/R1, AP2/R2} - R3 - Repo, with a position sweep over the
/// two wireless signal qualities; compares default/loadsharing/parallel.
ScenarioConfig build_mobile_client(const MobileClientParams& params);

struct RetrySweepParams {
  std::vector<int> retry_grid = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  long total_chunks = 2500;
  int pipeline = 100;
  double frame_loss = 0.15;  // per-attempt, fixed (signal-independent)
  int replications = 4;
};

/// Two wireless faces with asymmetric bandwidth and delay; sweeps the
/// link-layer retry limit for all three CCNx strategies.
ScenarioConfig build_retry_sweep(const RetrySweepParams& params);

struct HandoverParams {
  double handover_at_ms = 800.0;
  long total_chunks = 2000;
  int pipeline = 100;
  double access_delay_ms = 2.0;
  double ar_core_delay_ms = 2.0;
  double core_repo_delay_ms = 40.0;
  std::size_t r3_cache_capacity = 600;
  double interest_timeout_ms = 150.0;
  int replications = 5;
};

/// Client switches from AR1 to AR2 mid-transfer; in-flight data is lost
/// at the old access link and re-expressed interests hit R3's cache.
ScenarioConfig build_handover(const HandoverParams& params);

struct P2pLocalParams {
  int n_peers = 3;
  double seed_fraction = 1.0;  // share of chunks held (disjointly) by peers
  long total_chunks = 400;
  int pipeline = 20;
  double local_wait_ms = 30.0;
  int replications = 5;
};

/// Peers on one broadcast medium hold disjoint chunk subsets; the
/// consumer runs bif-local with a costly upstream fallback.
ScenarioConfig build_p2p_local(const P2pLocalParams& params);

std::vector<std::string> preset_names();
/// Throws std::runtime_error for unknown names.
ScenarioConfig make_preset(const std::string& name);

// ---- sweep / replication runner -----------------------------------------

struct RunSpec {
  std::string sweep_label;
  std::string strategy;
  int replication = 0;
  std::uint64_t seed = 0;
  double mean_signal_q = 1.0;
  nlohmann::json config_json;  // fully resolved for this run
};

struct ScenarioResult {
  std::vector<RunSpec> specs;
  std::vector<MetricsReport> reports;          // parallel to specs
  std::vector<std::vector<std::string>> traces;  // per run, Full trace mode only
  std::vector<SummaryRow> summary;
};

/// Expands sweep x strategy x replication into per-run configs.
/// Validation errors throw ConfigException.
std::vector<RunSpec> expand_runs(const nlohmann::json& base,
                                 std::optional<std::uint64_t> seed_override);

/// Runs every spec (optionally on `jobs` worker threads; results are
/// merged by index, so parallelism never changes any output), then
/// aggregates summary rows per (sweep point, strategy).
ScenarioResult run_scenario_json(const nlohmann::json& base, int jobs = 1,
                                 TraceMode trace = TraceMode::Off,
                                 std::optional<std::uint64_t> seed_override = std::nullopt);

std::vector<SummaryRow> summarize(const std::vector<RunSpec>& specs,
                                  const std::vector<MetricsReport>& reports);

/// Fixed-column CSV, header included; numeric formatting is locale-free
/// and deterministic.
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

}  // namespace ccnsim
