#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "ccnsim/packet.hpp"
#include "ccnsim/strategy.hpp"

namespace ccnsim {

/// Piecewise-linear signal quality over time, q in [0,1]. Empty profile
/// means constant full quality.
class SignalProfile {
public:
  SignalProfile() = default;
  explicit SignalProfile(std::vector<std::pair<double, double>> breakpoints);

  static SignalProfile constant(double q);

  /// Quality at time t: linear between breakpoints, clamped to [0,1],
  /// held flat before the first and after the last breakpoint.
  double q_at(double t_ms) const;

  const std::vector<std::pair<double, double>>& breakpoints() const { return points_; }

private:
  std::vector<std::pair<double, double>> points_;  // (t_ms, q), t ascending
};

/// Per-attempt frame loss as a function of signal quality:
/// p_max * (1-q)^gamma, or a fixed probability when `fixed` is set.
struct LossModel {
  double p_max = 0.9;
  double gamma = 2.0;
  std::optional<double> fixed;

  double frame_loss(double q) const;
};

struct LinkModel {
  double base_delay_ms = 1.0;
  double jitter_ms = 0.0;               // uniform half-width
  double bandwidth_pkts_per_ms = 100.0; // serialization rate at q = 1
  LossModel loss;
  int retry_limit = 7;                  // max link-layer retransmissions
  double per_retry_delay_ms = 2.0;
  double cost_per_packet = 0.0;
  double q_floor = 0.1;                 // rate adaptation floor
};

struct TransmitOutcome {
  bool delivered = false;
  double total_delay_ms = 0.0;  // excludes serialization (tracked by the channel)
  int attempts = 0;             // in [1, retry_limit + 1]
};

/// Serialization rate after rate adaptation: bandwidth * max(q, q_floor).
double effective_bandwidth(const LinkModel& link, double q);

/// Closed-form delivery probability: 1 - frame_loss(q)^(retry_limit+1).
double delivery_probability(const LinkModel& link, double q);

/// One network-layer packet over the link: Bernoulli attempts up to
/// retry_limit+1; undelivered packets vanish (network-layer loss).
TransmitOutcome transmit(const LinkModel& link, double q, Rng& rng);

}  // namespace ccnsim
