#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ccnsim/packet.hpp"

namespace ccnsim {

using Rng = std::mt19937_64;

/// Per-face measurements maintained by a node's strategy layer.
struct FaceStats {
  FaceId face = 0;
  double rte_ms = 1000.0;      // response-time estimate, always > 0
  int pending = 0;             // unanswered interests on this face
  double delay_ewma_ms = 0.0;  // 0 until the first sample
  std::deque<TimeUs> data_arrivals;  // arrival times inside the throughput window
  long data_total = 0;
  long timeouts = 0;
  double cost = 1.0;

  /// Count of Data arrivals inside the sliding throughput window.
  int data_returned_window(TimeUs now, TimeUs window_us);
};

enum class Rationale { BestFace, LoadShare, Flood, LocalFirst, CostConstrained };

struct StrategySend {
  FaceId face = 0;
  TimeUs delay_offset_us = 0;
};

struct StrategyDecision {
  std::vector<StrategySend> sends;  // non-empty, no duplicate faces
  Rationale rationale = Rationale::BestFace;
};

enum class MetricPreference { Throughput, Delay, Loss };

struct AppRequirements {
  std::optional<double> max_cost;
  MetricPreference preference = MetricPreference::Throughput;
  std::optional<double> delay_target_ms;  // required when preference == Delay
};

struct AdaptiveConfig {
  double throughput_window_ms = 1000.0;
  int flood_trigger = 3;    // consecutive constraint violations before flooding
  double calm_down_ms = 2000.0;
};

struct StrategyConfig {
  double rte_decrease_factor = 1.0 / 128.0;
  double rte_increase_factor = 1.0 / 8.0;
  double rte_initial_ms = 1000.0;
  double rte_min_ms = 1.0;
  double rte_max_ms = 60000.0;
  double stagger_jitter_max_ms = 20.0;
  double delay_ewma_alpha = 1.0 / 8.0;
  double local_wait_ms = 0.0;  // 0 = auto: 2x the local face's rte
  AdaptiveConfig adaptive;
};

/// Mutable state of the adaptive strategy's selective-redundancy logic.
struct AdaptiveState {
  int consecutive_violations = 0;
  bool flooding = false;
  std::optional<TimeUs> satisfied_since;
};

enum class StrategyKind { Default, Loadsharing, Parallel, BifLocal, Adaptive };

std::optional<StrategyKind> strategy_from_name(const std::string& name);
std::string strategy_name(StrategyKind kind);

/// RTE update on an arriving data packet: rte *= (1 - decrease_factor),
/// pending decremented, delay EWMA and throughput window updated.
void rte_on_data(FaceStats& stats, const StrategyConfig& cfg, double delay_sample_ms,
                 TimeUs now);

/// RTE update on a timeout: rte *= (1 + increase_factor), pending
/// decremented, timeout counter incremented.
void rte_on_timeout(FaceStats& stats, const StrategyConfig& cfg);

/// Fastest-responding-face strategy: primary send on the min-rte face,
/// other faces staggered at primary rte plus cumulative random jitter.
StrategyDecision default_select(const std::vector<FaceStats>& stats,
                                const StrategyConfig& cfg, Rng& rng);

/// Single send on the face with the fewest unanswered interests.
StrategyDecision loadsharing_select(const std::vector<FaceStats>& stats);

/// Floods one send per eligible face at offset 0.
StrategyDecision parallel_select(const std::vector<FaceStats>& stats);

/// Cheapest face first; the next-cheapest face is scheduled after
/// local_wait and cancelled if Data arrives before it fires.
StrategyDecision bif_local_first_select(const std::vector<FaceStats>& stats,
                                        const StrategyConfig& cfg);

/// Selective redundancy: single in-budget face matching the application
/// preference; floods all eligible faces after flood_trigger consecutive
/// constraint violations until the constraint holds for calm_down.
StrategyDecision adaptive_select(std::vector<FaceStats> stats, const AppRequirements& reqs,
                                 const StrategyConfig& cfg, AdaptiveState& state, TimeUs now);

}  // namespace ccnsim
