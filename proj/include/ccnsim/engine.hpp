#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ccnsim/config.hpp"
#include "ccnsim/metrics.hpp"

namespace ccnsim {

enum class TraceMode { Off, Summary, Full };

struct SimOptions {
  TraceMode trace = TraceMode::Off;
  /// Records how often each (node, name, nonce) triple triggered a
  /// forwarding decision; used by loop-freedom checks.
  bool forward_audit = false;
};

/// One deterministic simulation instance. Strictly single-threaded;
/// independent instances may run in parallel.
class Simulation {
public:
  Simulation(const ScenarioConfig& cfg, std::uint64_t seed, SimOptions opts = {});
  ~Simulation();

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Processes events until the transfer completes or the horizon is
  /// reached. Same (config, seed) gives a bit-identical event trace.
  MetricsReport run();

  /// Event log lines ("t_us node kind"), populated in Full trace mode.
  const std::vector<std::string>& trace_log() const;

  /// Forwarding decisions per "node|name|nonce", when forward_audit set.
  const std::map<std::string, int>& forward_audit() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ccnsim
