#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccnsim/link.hpp"
#include "ccnsim/packet.hpp"
#include "ccnsim/strategy.hpp"

namespace ccnsim {

struct FaceCfg {
  int id = 0;
  std::string label;
  double cost = 1.0;
  std::string kind = "p2p";  // p2p | broadcast
  double up_at_ms = 0.0;
  double down_at_ms = -1.0;  // < 0: never goes down
};

struct FibRuleCfg {
  std::string prefix;
  std::vector<std::string> nexthops;  // face labels on the same node
};

/// Pre-seeded Content Store content: chunks of `prefix` held by this
/// node. Either an explicit chunk list, or a seeded random subset of
/// `fraction` of [0, total_chunks) restricted to indices with
/// i % stride_count == stride_index (disjoint subsets across peers).
struct SeedCfg {
  std::string prefix;
  long total_chunks = 0;
  double fraction = 0.0;
  int stride_index = 0;
  int stride_count = 1;
  std::vector<long> chunks;  // explicit list, overrides fraction
};

struct NodeCfg {
  std::string id;
  std::string role = "router";  // client | router | repository
  std::string strategy = "default";
  StrategyConfig strategy_config;
  std::size_t cs_capacity = 0;
  double processing_delay_ms = 0.0;
  bool designated_forwarder = false;
  std::vector<FaceCfg> faces;
  std::vector<FibRuleCfg> fib;
  std::vector<std::string> served_prefixes;
  std::optional<SeedCfg> seed;
};

struct LinkCfg {
  std::string a;  // "node.face"
  std::string b;
  LinkModel model;
  SignalProfile signal;  // applies to both directions
};

struct MediumCfg {
  std::string id;
  std::vector<std::string> members;  // "node.face"
  LinkModel model;
  std::map<std::string, SignalProfile> member_signal;
};

struct ConsumerCfg {
  std::string node;
  std::string prefix;
  long total_chunks = 1;
  int pipeline = 100;
  double interest_timeout_ms = 0.0;  // 0: adaptive 2x VRTT EWMA, clamped [50, 4000]
  int max_retx = 10;
  int payload_size = 4096;
  AppRequirements requirements;
};

struct SweepPointCfg {
  std::string label;
  std::map<std::string, nlohmann::json> set;  // dotted-path overrides
  double mean_signal_q = 1.0;
};

struct ScenarioConfig {
  std::string name;
  double pit_lifetime_ms = 4000.0;
  double horizon_ms = 600000.0;
  std::vector<NodeCfg> nodes;
  std::vector<LinkCfg> links;
  std::vector<MediumCfg> media;
  ConsumerCfg consumer;
  std::vector<SweepPointCfg> sweep;
  std::vector<std::string> compare_strategies;  // empty: run configured strategies
  int replications = 30;
  std::uint64_t seed_base = 1;
};

struct ConfigError {
  std::string code;
  std::string path;
  std::string message;
};

/// Thrown by parse_config / cli when validation fails; carries the full
/// error list for human-readable reporting.
class ConfigException : public std::runtime_error {
public:
  explicit ConfigException(std::vector<ConfigError> errors);
  const std::vector<ConfigError>& errors() const { return errors_; }

private:
  std::vector<ConfigError> errors_;
};

nlohmann::json to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const nlohmann::json& j);

std::vector<ConfigError> validate(const ScenarioConfig& cfg);

/// Parses and validates; throws ConfigException on any error.
ScenarioConfig parse_and_validate(const nlohmann::json& j);

/// Sets a value at a dotted path ("consumer.pipeline", "nodes.0.strategy")
/// in a JSON tree; numeric path parts index arrays. Throws on bad paths.
void set_json_path(nlohmann::json& root, const std::string& path, const nlohmann::json& value);

/// Parses an override value: JSON when it parses, bare string otherwise.
nlohmann::json parse_override_value(const std::string& text);

}  // namespace ccnsim
