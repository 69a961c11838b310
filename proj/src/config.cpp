#include "ccnsim/config.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ccnsim {

using nlohmann::json;

ConfigException::ConfigException(std::vector<ConfigError> errors)
  : std::runtime_error([&errors] {
      std::ostringstream os;
      os << "invalid scenario config:";
      for (const auto& e : errors) {
        os << "\n  [" << e.code << "] " << e.path << ": " << e.message;
      }
      return os.str();
    }())
  , errors_(std::move(errors))
{
}

namespace {

json signal_to_json(const SignalProfile& profile)
{
  json arr = json::array();
  for (const auto& [t, q] : profile.breakpoints()) {
    arr.push_back(json::array({t, q}));
  }
  return arr;
}

SignalProfile signal_from_json(const json& j)
{
  std::vector<std::pair<double, double>> points;
  for (const auto& bp : j) {
    points.emplace_back(bp.at(0).get<double>(), bp.at(1).get<double>());
  }
  return SignalProfile(std::move(points));
}

json link_model_to_json(const LinkModel& m)
{
  json j{{"base_delay_ms", m.base_delay_ms},
         {"jitter_ms", m.jitter_ms},
         {"bandwidth_pkts_per_ms", m.bandwidth_pkts_per_ms},
         {"retry_limit", m.retry_limit},
         {"per_retry_delay_ms", m.per_retry_delay_ms},
         {"cost_per_packet", m.cost_per_packet},
         {"q_floor", m.q_floor},
         {"loss", json{{"p_max", m.loss.p_max}, {"gamma", m.loss.gamma}}}};
  if (m.loss.fixed) {
    j["loss"]["fixed"] = *m.loss.fixed;
  }
  return j;
}

LinkModel link_model_from_json(const json& j)
{
  LinkModel m;
  m.base_delay_ms = j.value("base_delay_ms", m.base_delay_ms);
  m.jitter_ms = j.value("jitter_ms", m.jitter_ms);
  m.bandwidth_pkts_per_ms = j.value("bandwidth_pkts_per_ms", m.bandwidth_pkts_per_ms);
  m.retry_limit = j.value("retry_limit", m.retry_limit);
  m.per_retry_delay_ms = j.value("per_retry_delay_ms", m.per_retry_delay_ms);
  m.cost_per_packet = j.value("cost_per_packet", m.cost_per_packet);
  m.q_floor = j.value("q_floor", m.q_floor);
  if (j.contains("loss")) {
    const json& l = j["loss"];
    m.loss.p_max = l.value("p_max", m.loss.p_max);
    m.loss.gamma = l.value("gamma", m.loss.gamma);
    if (l.contains("fixed") && !l["fixed"].is_null()) {
      m.loss.fixed = l["fixed"].get<double>();
    }
  }
  return m;
}

json strategy_config_to_json(const StrategyConfig& c)
{
  return json{{"rte_decrease_factor", c.rte_decrease_factor},
              {"rte_increase_factor", c.rte_increase_factor},
              {"rte_initial_ms", c.rte_initial_ms},
              {"rte_min_ms", c.rte_min_ms},
              {"rte_max_ms", c.rte_max_ms},
              {"stagger_jitter_max_ms", c.stagger_jitter_max_ms},
              {"delay_ewma_alpha", c.delay_ewma_alpha},
              {"local_wait_ms", c.local_wait_ms},
              {"adaptive", json{{"throughput_window_ms", c.adaptive.throughput_window_ms},
                                {"flood_trigger", c.adaptive.flood_trigger},
                                {"calm_down_ms", c.adaptive.calm_down_ms}}}};
}

StrategyConfig strategy_config_from_json(const json& j)
{
  StrategyConfig c;
  c.rte_decrease_factor = j.value("rte_decrease_factor", c.rte_decrease_factor);
  c.rte_increase_factor = j.value("rte_increase_factor", c.rte_increase_factor);
  c.rte_initial_ms = j.value("rte_initial_ms", c.rte_initial_ms);
  c.rte_min_ms = j.value("rte_min_ms", c.rte_min_ms);
  c.rte_max_ms = j.value("rte_max_ms", c.rte_max_ms);
  c.stagger_jitter_max_ms = j.value("stagger_jitter_max_ms", c.stagger_jitter_max_ms);
  c.delay_ewma_alpha = j.value("delay_ewma_alpha", c.delay_ewma_alpha);
  c.local_wait_ms = j.value("local_wait_ms", c.local_wait_ms);
  if (j.contains("adaptive")) {
    const json& a = j["adaptive"];
    c.adaptive.throughput_window_ms = a.value("throughput_window_ms", c.adaptive.throughput_window_ms);
    c.adaptive.flood_trigger = a.value("flood_trigger", c.adaptive.flood_trigger);
    c.adaptive.calm_down_ms = a.value("calm_down_ms", c.adaptive.calm_down_ms);
  }
  return c;
}

std::string preference_name(MetricPreference p)
{
  switch (p) {
    case MetricPreference::Throughput: return "throughput";
    case MetricPreference::Delay: return "delay";
    case MetricPreference::Loss: return "loss";
  }
  return "throughput";
}

json requirements_to_json(const AppRequirements& r)
{
  json j{{"preference", preference_name(r.preference)}};
  j["max_cost"] = r.max_cost ? json(*r.max_cost) : json(nullptr);
  j["delay_target_ms"] = r.delay_target_ms ? json(*r.delay_target_ms) : json(nullptr);
  return j;
}

AppRequirements requirements_from_json(const json& j)
{
  AppRequirements r;
  std::string pref = j.value("preference", "throughput");
  if (pref == "throughput") r.preference = MetricPreference::Throughput;
  else if (pref == "delay") r.preference = MetricPreference::Delay;
  else if (pref == "loss") r.preference = MetricPreference::Loss;
  else throw std::runtime_error("unknown metric preference: " + pref);
  if (j.contains("max_cost") && !j["max_cost"].is_null()) {
    r.max_cost = j["max_cost"].get<double>();
  }
  if (j.contains("delay_target_ms") && !j["delay_target_ms"].is_null()) {
    r.delay_target_ms = j["delay_target_ms"].get<double>();
  }
  return r;
}

}  // namespace

json to_json(const ScenarioConfig& cfg)
{
  json j;
  j["name"] = cfg.name;
  j["pit_lifetime_ms"] = cfg.pit_lifetime_ms;
  j["horizon_ms"] = cfg.horizon_ms;
  j["replications"] = cfg.replications;
  j["seed_base"] = cfg.seed_base;

  j["nodes"] = json::array();
  for (const NodeCfg& n : cfg.nodes) {
    json jn{{"id", n.id},
            {"role", n.role},
            {"strategy", n.strategy},
            {"strategy_config", strategy_config_to_json(n.strategy_config)},
            {"cs_capacity", n.cs_capacity},
            {"processing_delay_ms", n.processing_delay_ms},
            {"designated_forwarder", n.designated_forwarder}};
    jn["faces"] = json::array();
    for (const FaceCfg& f : n.faces) {
      jn["faces"].push_back(json{{"id", f.id},
                                 {"label", f.label},
                                 {"cost", f.cost},
                                 {"kind", f.kind},
                                 {"up_at_ms", f.up_at_ms},
                                 {"down_at_ms", f.down_at_ms}});
    }
    jn["fib"] = json::array();
    for (const FibRuleCfg& r : n.fib) {
      jn["fib"].push_back(json{{"prefix", r.prefix}, {"nexthops", r.nexthops}});
    }
    jn["served_prefixes"] = n.served_prefixes;
    if (n.seed) {
      jn["seed"] = json{{"prefix", n.seed->prefix},
                        {"total_chunks", n.seed->total_chunks},
                        {"fraction", n.seed->fraction},
                        {"stride_index", n.seed->stride_index},
                        {"stride_count", n.seed->stride_count},
                        {"chunks", n.seed->chunks}};
    }
    j["nodes"].push_back(std::move(jn));
  }

  j["links"] = json::array();
  for (const LinkCfg& l : cfg.links) {
    json jl = link_model_to_json(l.model);
    jl["a"] = l.a;
    jl["b"] = l.b;
    jl["signal"] = signal_to_json(l.signal);
    j["links"].push_back(std::move(jl));
  }

  j["media"] = json::array();
  for (const MediumCfg& m : cfg.media) {
    json jm = link_model_to_json(m.model);
    jm["id"] = m.id;
    jm["members"] = m.members;
    json sig = json::object();
    for (const auto& [member, profile] : m.member_signal) {
      sig[member] = signal_to_json(profile);
    }
    jm["member_signal"] = std::move(sig);
    j["media"].push_back(std::move(jm));
  }

  j["consumer"] = json{{"node", cfg.consumer.node},
                       {"prefix", cfg.consumer.prefix},
                       {"total_chunks", cfg.consumer.total_chunks},
                       {"pipeline", cfg.consumer.pipeline},
                       {"interest_timeout_ms", cfg.consumer.interest_timeout_ms},
                       {"max_retx", cfg.consumer.max_retx},
                       {"payload_size", cfg.consumer.payload_size},
                       {"requirements", requirements_to_json(cfg.consumer.requirements)}};

  j["sweep"] = json::array();
  for (const SweepPointCfg& p : cfg.sweep) {
    json set = json::object();
    for (const auto& [k, v] : p.set) {
      set[k] = v;
    }
    j["sweep"].push_back(json{{"label", p.label},
                              {"set", std::move(set)},
                              {"mean_signal_q", p.mean_signal_q}});
  }
  j["compare_strategies"] = cfg.compare_strategies;
  return j;
}

ScenarioConfig config_from_json(const json& j)
{
  ScenarioConfig cfg;
  cfg.name = j.value("name", "scenario");
  cfg.pit_lifetime_ms = j.value("pit_lifetime_ms", cfg.pit_lifetime_ms);
  cfg.horizon_ms = j.value("horizon_ms", cfg.horizon_ms);
  cfg.replications = j.value("replications", cfg.replications);
  cfg.seed_base = j.value("seed_base", cfg.seed_base);

  for (const json& jn : j.value("nodes", json::array())) {
    NodeCfg n;
    n.id = jn.at("id").get<std::string>();
    n.role = jn.value("role", n.role);
    n.strategy = jn.value("strategy", n.strategy);
    if (jn.contains("strategy_config")) {
      n.strategy_config = strategy_config_from_json(jn["strategy_config"]);
    }
    n.cs_capacity = jn.value("cs_capacity", n.cs_capacity);
    n.processing_delay_ms = jn.value("processing_delay_ms", n.processing_delay_ms);
    n.designated_forwarder = jn.value("designated_forwarder", n.designated_forwarder);
    for (const json& jf : jn.value("faces", json::array())) {
      FaceCfg f;
      f.id = jf.at("id").get<int>();
      f.label = jf.at("label").get<std::string>();
      f.cost = jf.value("cost", f.cost);
      f.kind = jf.value("kind", f.kind);
      f.up_at_ms = jf.value("up_at_ms", f.up_at_ms);
      f.down_at_ms = jf.value("down_at_ms", f.down_at_ms);
      n.faces.push_back(std::move(f));
    }
    for (const json& jr : jn.value("fib", json::array())) {
      FibRuleCfg r;
      r.prefix = jr.at("prefix").get<std::string>();
      r.nexthops = jr.at("nexthops").get<std::vector<std::string>>();
      n.fib.push_back(std::move(r));
    }
    n.served_prefixes = jn.value("served_prefixes", std::vector<std::string>{});
    if (jn.contains("seed") && !jn["seed"].is_null()) {
      const json& js = jn["seed"];
      SeedCfg s;
      s.prefix = js.at("prefix").get<std::string>();
      s.total_chunks = js.value("total_chunks", s.total_chunks);
      s.fraction = js.value("fraction", s.fraction);
      s.stride_index = js.value("stride_index", s.stride_index);
      s.stride_count = js.value("stride_count", s.stride_count);
      s.chunks = js.value("chunks", s.chunks);
      n.seed = std::move(s);
    }
    cfg.nodes.push_back(std::move(n));
  }

  for (const json& jl : j.value("links", json::array())) {
    LinkCfg l;
    l.a = jl.at("a").get<std::string>();
    l.b = jl.at("b").get<std::string>();
    l.model = link_model_from_json(jl);
    if (jl.contains("signal")) {
      l.signal = signal_from_json(jl["signal"]);
    }
    cfg.links.push_back(std::move(l));
  }

  for (const json& jm : j.value("media", json::array())) {
    MediumCfg m;
    m.id = jm.at("id").get<std::string>();
    m.members = jm.at("members").get<std::vector<std::string>>();
    m.model = link_model_from_json(jm);
    const json member_signal = jm.value("member_signal", json::object());
    for (const auto& [member, sig] : member_signal.items()) {
      m.member_signal[member] = signal_from_json(sig);
    }
    cfg.media.push_back(std::move(m));
  }

  if (j.contains("consumer")) {
    const json& jc = j["consumer"];
    cfg.consumer.node = jc.value("node", "");
    cfg.consumer.prefix = jc.value("prefix", "");
    cfg.consumer.total_chunks = jc.value("total_chunks", cfg.consumer.total_chunks);
    cfg.consumer.pipeline = jc.value("pipeline", cfg.consumer.pipeline);
    cfg.consumer.interest_timeout_ms = jc.value("interest_timeout_ms", cfg.consumer.interest_timeout_ms);
    cfg.consumer.max_retx = jc.value("max_retx", cfg.consumer.max_retx);
    cfg.consumer.payload_size = jc.value("payload_size", cfg.consumer.payload_size);
    if (jc.contains("requirements")) {
      cfg.consumer.requirements = requirements_from_json(jc["requirements"]);
    }
  }

  for (const json& jp : j.value("sweep", json::array())) {
    SweepPointCfg p;
    p.label = jp.at("label").get<std::string>();
    p.mean_signal_q = jp.value("mean_signal_q", p.mean_signal_q);
    const json set_obj = jp.value("set", json::object());
    for (const auto& [k, v] : set_obj.items()) {
      p.set[k] = v;
    }
    cfg.sweep.push_back(std::move(p));
  }
  cfg.compare_strategies = j.value("compare_strategies", std::vector<std::string>{});
  return cfg;
}

std::vector<ConfigError> validate(const ScenarioConfig& cfg)
{
  std::vector<ConfigError> errors;
  auto err = [&](std::string code, std::string path, std::string message) {
    errors.push_back({std::move(code), std::move(path), std::move(message)});
  };

  static const char* kStrategies = "default | loadsharing | parallel | bif-local | adaptive";

  std::set<std::string> bound_faces;   // "node.face"
  std::set<std::string> known_faces;

  for (std::size_t ni = 0; ni < cfg.nodes.size(); ++ni) {
    const NodeCfg& n = cfg.nodes[ni];
    std::string npath = "nodes." + std::to_string(ni);
    if (n.role != "client" && n.role != "router" && n.role != "repository") {
      err("unknown_role", npath + ".role", "unknown role '" + n.role + "'");
    }
    if (!strategy_from_name(n.strategy)) {
      err("unknown_strategy", npath + ".strategy",
          "unknown strategy '" + n.strategy + "'; valid options: " + kStrategies);
    }
    const StrategyConfig& sc = n.strategy_config;
    if (!(sc.rte_decrease_factor > 0 && sc.rte_decrease_factor < sc.rte_increase_factor &&
          sc.rte_increase_factor < 1)) {
      err("bad_rte_factors", npath + ".strategy_config",
          "require 0 < rte_decrease_factor < rte_increase_factor < 1");
    }
    std::set<int> ids;
    std::set<std::string> labels;
    for (std::size_t fi = 0; fi < n.faces.size(); ++fi) {
      const FaceCfg& f = n.faces[fi];
      std::string fpath = npath + ".faces." + std::to_string(fi);
      if (!ids.insert(f.id).second) {
        err("duplicate_face_id", fpath, "duplicate face id on node " + n.id);
      }
      if (!labels.insert(f.label).second) {
        err("duplicate_face_label", fpath, "duplicate face label on node " + n.id);
      }
      if (f.cost < 0) {
        err("bad_face_cost", fpath + ".cost", "face cost must be >= 0");
      }
      if (f.kind != "p2p" && f.kind != "broadcast") {
        err("bad_face_kind", fpath + ".kind", "face kind must be p2p or broadcast");
      }
      known_faces.insert(n.id + "." + f.label);
    }
    for (std::size_t ri = 0; ri < n.fib.size(); ++ri) {
      const FibRuleCfg& r = n.fib[ri];
      std::string rpath = npath + ".fib." + std::to_string(ri);
      if (r.nexthops.empty()) {
        err("empty_nexthops", rpath, "FIB entry needs at least one nexthop");
      }
      for (const std::string& hop : r.nexthops) {
        if (labels.count(hop) == 0) {
          err("bad_nexthop", rpath, "nexthop '" + hop + "' is not a face of node " + n.id);
        }
      }
    }
    if (n.seed && n.cs_capacity == 0) {
      err("seed_without_cs", npath + ".seed", "seeded node needs cs_capacity > 0");
    }
  }

  auto check_endpoint = [&](const std::string& ep, const std::string& path) {
    if (known_faces.count(ep) == 0) {
      err("bad_endpoint", path, "endpoint '" + ep + "' does not name an existing node.face");
      return;
    }
    if (!bound_faces.insert(ep).second) {
      err("multibound_face", path, "face '" + ep + "' is bound more than once");
    }
  };
  for (std::size_t li = 0; li < cfg.links.size(); ++li) {
    std::string lpath = "links." + std::to_string(li);
    check_endpoint(cfg.links[li].a, lpath + ".a");
    check_endpoint(cfg.links[li].b, lpath + ".b");
    if (cfg.links[li].model.bandwidth_pkts_per_ms <= 0) {
      err("bad_bandwidth", lpath, "bandwidth must be > 0");
    }
    if (cfg.links[li].model.retry_limit < 0) {
      err("bad_retry_limit", lpath, "retry_limit must be >= 0");
    }
  }
  for (std::size_t mi = 0; mi < cfg.media.size(); ++mi) {
    std::string mpath = "media." + std::to_string(mi);
    if (cfg.media[mi].members.size() < 2) {
      err("bad_medium", mpath, "broadcast medium needs at least two members");
    }
    for (const std::string& m : cfg.media[mi].members) {
      check_endpoint(m, mpath + ".members");
    }
  }
  for (const std::string& ep : known_faces) {
    if (bound_faces.count(ep) == 0) {
      err("unbound_face", ep, "face is not attached to any link or medium");
    }
  }

  const NodeCfg* consumer_node = nullptr;
  for (const NodeCfg& n : cfg.nodes) {
    if (n.id == cfg.consumer.node) {
      consumer_node = &n;
    }
  }
  if (consumer_node == nullptr) {
    err("bad_node_ref", "consumer.node", "consumer node '" + cfg.consumer.node + "' not found");
  }
  else if (consumer_node->role != "client") {
    err("bad_consumer_role", "consumer.node", "consumer node must have role 'client'");
  }
  if (cfg.consumer.pipeline < 1) {
    err("bad_pipeline", "consumer.pipeline", "pipeline must be >= 1");
  }
  if (cfg.consumer.total_chunks < 1) {
    err("bad_total_chunks", "consumer.total_chunks", "total_chunks must be >= 1");
  }
  if (cfg.consumer.requirements.preference == MetricPreference::Delay &&
      !cfg.consumer.requirements.delay_target_ms) {
    err("missing_delay_target", "consumer.requirements",
        "preference 'delay' requires delay_target_ms");
  }

  Name consumer_prefix;
  bool prefix_ok = true;
  try {
    consumer_prefix = Name::parse(cfg.consumer.prefix);
  }
  catch (const std::exception& e) {
    prefix_ok = false;
    err("bad_prefix", "consumer.prefix", e.what());
  }
  if (prefix_ok) {
    bool served = false;
    for (const NodeCfg& n : cfg.nodes) {
      for (const std::string& p : n.served_prefixes) {
        try {
          if (Name::parse(p).is_prefix_of(consumer_prefix) || Name::parse(p) == consumer_prefix) {
            served = true;
          }
        }
        catch (const std::exception&) {
          err("bad_prefix", "nodes." + n.id + ".served_prefixes", "unparseable prefix " + p);
        }
      }
    }
    if (!served) {
      err("prefix_not_served", "consumer.prefix",
          "no repository serves prefix " + cfg.consumer.prefix);
    }
  }

  for (const std::string& s : cfg.compare_strategies) {
    if (!strategy_from_name(s)) {
      err("unknown_strategy", "compare_strategies",
          "unknown strategy '" + s + "'; valid options: " + kStrategies);
    }
  }
  std::set<std::string> labels;
  for (std::size_t pi = 0; pi < cfg.sweep.size(); ++pi) {
    if (cfg.sweep[pi].label.empty() || !labels.insert(cfg.sweep[pi].label).second) {
      err("bad_sweep_label", "sweep." + std::to_string(pi),
          "sweep labels must be non-empty and unique");
    }
  }
  if (cfg.replications < 1) {
    err("bad_replications", "replications", "replications must be >= 1");
  }
  return errors;
}

ScenarioConfig parse_and_validate(const json& j)
{
  ScenarioConfig cfg;
  try {
    cfg = config_from_json(j);
  }
  catch (const std::exception& e) {
    throw ConfigException({{"parse_error", "", e.what()}});
  }
  std::vector<ConfigError> errors = validate(cfg);
  if (!errors.empty()) {
    throw ConfigException(std::move(errors));
  }
  return cfg;
}

void set_json_path(json& root, const std::string& path, const json& value)
{
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '.') {
      parts.push_back(cur);
      cur.clear();
    }
    else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);

  json* node = &root;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& part = parts[i];
    if (part.empty()) {
      throw std::runtime_error("empty path segment in override '" + path + "'");
    }
    bool numeric = std::all_of(part.begin(), part.end(),
                               [](char c) { return c >= '0' && c <= '9'; });
    bool last = i + 1 == parts.size();
    if (numeric && node->is_array()) {
      std::size_t idx = std::stoul(part);
      if (idx >= node->size()) {
        throw std::runtime_error("array index out of range in override '" + path + "'");
      }
      node = &(*node)[idx];
      if (last) {
        *node = value;
        return;
      }
    }
    else {
      if (!node->is_object() && !node->is_null()) {
        throw std::runtime_error("cannot descend into non-object at '" + part + "' in '" +
                                 path + "'");
      }
      if (last) {
        (*node)[part] = value;
        return;
      }
      if (!node->is_object() || !node->contains(part)) {
        throw std::runtime_error("no such key '" + part + "' in override '" + path + "'");
      }
      node = &(*node)[part];
    }
  }
}

json parse_override_value(const std::string& text)
{
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded()) {
    return json(text);
  }
  return parsed;
}

}  // namespace ccnsim
