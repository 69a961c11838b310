#include "ccnsim/engine.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <variant>

#include "ccnsim/tables.hpp"

namespace ccnsim {

namespace {

enum class EvKind : std::uint8_t {
  PacketArrival = 0,
  TimerFire = 1,
  StaggeredSend = 2,
  ConsumerTick = 3,
  SignalUpdate = 4,
};

const char* ev_kind_name(EvKind k)
{
  switch (k) {
    case EvKind::PacketArrival: return "packet_arrival";
    case EvKind::TimerFire: return "timer_fire";
    case EvKind::StaggeredSend: return "staggered_send";
    case EvKind::ConsumerTick: return "consumer_tick";
    case EvKind::SignalUpdate: return "signal_update";
  }
  return "?";
}

using Packet = std::variant<Interest, Data>;

struct Ev {
  TimeUs at = 0;
  std::uint64_t seq = 0;
  EvKind kind = EvKind::TimerFire;
  int node = -1;
  std::function<void()> fn;
};

struct EvLater {
  bool operator()(const Ev& a, const Ev& b) const
  {
    return a.at != b.at ? a.at > b.at : a.seq > b.seq;
  }
};

struct UpRecord {
  FaceId face = 0;
  TimeUs sent_at = 0;
  bool responded = false;  // a data packet arrived on this face
  bool timed_out = false;  // the rte timer fired before any data
};

struct Binding {
  enum class Type { None, Channel, Medium } type = Type::None;
  int index = -1;
};

struct SimChannel {
  LinkModel model;
  SignalProfile signal;
  int dst_node = -1;
  int dst_face = -1;  // face index at the destination node
  TimeUs busy_until = 0;
};

struct SimMedium {
  LinkModel model;
  std::vector<std::pair<int, int>> members;  // (node index, face index)
  std::vector<SignalProfile> member_signal;
  TimeUs busy_until = 0;
};

struct SimNode {
  std::string id;
  enum class Role { Client, Router, Repository } role = Role::Router;
  StrategyKind strategy = StrategyKind::Default;
  StrategyConfig scfg;
  ContentStore cs{0};
  Pit pit;
  std::vector<FibEntry> fib;
  std::vector<Face> faces;
  std::vector<Binding> bindings;
  std::vector<FaceStats> stats;
  std::vector<std::pair<TimeUs, TimeUs>> up_window;  // [up_at, down_at)
  std::unordered_map<std::string, std::vector<std::shared_ptr<UpRecord>>> uprecs;
  std::unordered_map<std::string, std::vector<std::shared_ptr<bool>>> staggers;
  std::unordered_map<FaceId, int> face_index;
  std::vector<Name> served;
  AdaptiveState adaptive;
  double processing_delay_ms = 0.0;
  TimeUs proc_free = 0;
  bool designated_forwarder = false;
};

struct InFlight {
  TimeUs sent_at = 0;
  int retx = 0;
  long expr_id = 0;
};

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

}  // namespace

struct Simulation::Impl {
  ScenarioConfig cfg;
  SimOptions opts;
  Rng rng;

  std::vector<SimNode> nodes;
  std::vector<SimChannel> channels;
  std::vector<SimMedium> media;
  std::unordered_map<std::string, int> node_index;

  std::vector<Ev> queue;
  std::uint64_t next_seq = 0;
  TimeUs now = 0;
  TimeUs horizon_us = 0;
  bool done = false;

  // Consumer state.
  int consumer_node = -1;
  Name consumer_prefix;
  long next_chunk = 0;
  long completed_chunks = 0;
  long expr_counter = 0;
  std::unordered_map<long, InFlight> in_flight;
  // Start at half the timeout floor so the first window retransmits at the
  // 50 ms minimum instead of waiting out a pessimistic guess; the estimate
  // is replaced outright by the first measured VRTT.
  double vrtt_ewma_ms = 25.0;
  bool vrtt_seeded = false;

  MetricsReport report;
  std::vector<std::string> trace_lines;
  std::map<std::string, int> audit;
  std::uint64_t hash = kFnvOffset;

  Impl(const ScenarioConfig& config, std::uint64_t seed, SimOptions options)
    : cfg(config)
    , opts(options)
    , rng(seed)
  {
    build();
  }

  // ---- construction -------------------------------------------------

  static std::pair<std::string, std::string> split_endpoint(const std::string& ep)
  {
    auto dot = ep.find('.');
    if (dot == std::string::npos) {
      throw std::runtime_error("endpoint must be node.face: " + ep);
    }
    return {ep.substr(0, dot), ep.substr(dot + 1)};
  }

  std::pair<int, int> resolve_endpoint(const std::string& ep)
  {
    auto [node_id, face_label] = split_endpoint(ep);
    auto it = node_index.find(node_id);
    if (it == node_index.end()) {
      throw std::runtime_error("unknown node in endpoint: " + ep);
    }
    SimNode& node = nodes[it->second];
    for (std::size_t fi = 0; fi < node.faces.size(); ++fi) {
      if (node.faces[fi].label == face_label) {
        return {it->second, static_cast<int>(fi)};
      }
    }
    throw std::runtime_error("unknown face in endpoint: " + ep);
  }

  void build()
  {
    horizon_us = ms_to_us(cfg.horizon_ms);

    for (const NodeCfg& nc : cfg.nodes) {
      SimNode node;
      node.id = nc.id;
      node.role = nc.role == "client"       ? SimNode::Role::Client
                  : nc.role == "repository" ? SimNode::Role::Repository
                                            : SimNode::Role::Router;
      auto kind = strategy_from_name(nc.strategy);
      node.strategy = kind.value_or(StrategyKind::Default);
      node.scfg = nc.strategy_config;
      node.cs = ContentStore(nc.cs_capacity);
      node.processing_delay_ms = nc.processing_delay_ms;
      node.designated_forwarder = nc.designated_forwarder;
      for (const FaceCfg& fc : nc.faces) {
        Face face;
        face.id = fc.id;
        face.label = fc.label;
        face.cost = fc.cost;
        face.kind = fc.kind == "broadcast" ? FaceKind::Broadcast : FaceKind::PointToPoint;
        node.face_index[face.id] = static_cast<int>(node.faces.size());
        node.faces.push_back(face);
        node.bindings.push_back({});
        FaceStats stats;
        stats.face = face.id;
        stats.rte_ms = nc.strategy_config.rte_initial_ms;
        stats.cost = face.cost;
        node.stats.push_back(std::move(stats));
        TimeUs up = ms_to_us(fc.up_at_ms);
        TimeUs down = fc.down_at_ms < 0 ? std::numeric_limits<TimeUs>::max()
                                        : ms_to_us(fc.down_at_ms);
        node.up_window.emplace_back(up, down);
      }
      for (const std::string& p : nc.served_prefixes) {
        node.served.push_back(Name::parse(p));
      }
      node_index[node.id] = static_cast<int>(nodes.size());
      nodes.push_back(std::move(node));
    }

    // FIB entries need face ids resolved from labels.
    for (std::size_t ni = 0; ni < cfg.nodes.size(); ++ni) {
      SimNode& node = nodes[ni];
      for (const FibRuleCfg& rule : cfg.nodes[ni].fib) {
        FibEntry entry;
        entry.prefix = Name::parse(rule.prefix);
        for (const std::string& hop : rule.nexthops) {
          for (const Face& f : node.faces) {
            if (f.label == hop) {
              entry.nexthops.push_back(f.id);
            }
          }
        }
        node.fib.push_back(std::move(entry));
      }
    }

    for (const LinkCfg& lc : cfg.links) {
      auto [an, af] = resolve_endpoint(lc.a);
      auto [bn, bf] = resolve_endpoint(lc.b);
      // One directed channel per direction, sharing model and signal.
      SimChannel fwd{lc.model, lc.signal, bn, bf, 0};
      SimChannel rev{lc.model, lc.signal, an, af, 0};
      nodes[an].bindings[af] = {Binding::Type::Channel, static_cast<int>(channels.size())};
      channels.push_back(std::move(fwd));
      nodes[bn].bindings[bf] = {Binding::Type::Channel, static_cast<int>(channels.size())};
      channels.push_back(std::move(rev));
    }

    for (const MediumCfg& mc : cfg.media) {
      SimMedium medium;
      medium.model = mc.model;
      for (const std::string& member : mc.members) {
        auto [n, f] = resolve_endpoint(member);
        nodes[n].bindings[f] = {Binding::Type::Medium, static_cast<int>(media.size())};
        medium.members.emplace_back(n, f);
        auto sit = mc.member_signal.find(member);
        medium.member_signal.push_back(sit != mc.member_signal.end() ? sit->second
                                                                     : SignalProfile());
      }
      media.push_back(std::move(medium));
    }

    consumer_node = node_index.at(cfg.consumer.node);
    consumer_prefix = Name::parse(cfg.consumer.prefix);

    seed_content_stores();
  }

  void seed_content_stores()
  {
    // Fraction-based seeding shares one membership mask per prefix so
    // that striped peers hold disjoint subsets of the same chunk set.
    std::unordered_map<std::string, std::vector<char>> masks;
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    for (std::size_t ni = 0; ni < cfg.nodes.size(); ++ni) {
      const auto& seed = cfg.nodes[ni].seed;
      if (!seed || !seed->chunks.empty() || seed->total_chunks <= 0) {
        continue;
      }
      auto& mask = masks[seed->prefix];
      if (mask.empty()) {
        mask.resize(static_cast<std::size_t>(seed->total_chunks));
        for (auto& m : mask) {
          m = uniform(rng) < seed->fraction ? 1 : 0;
        }
      }
    }
    for (std::size_t ni = 0; ni < cfg.nodes.size(); ++ni) {
      const auto& seed = cfg.nodes[ni].seed;
      if (!seed) {
        continue;
      }
      Name prefix = Name::parse(seed->prefix);
      auto insert_chunk = [&](long chunk) {
        Data data;
        data.name = prefix.with_segment(static_cast<std::uint64_t>(chunk));
        data.payload_size = cfg.consumer.payload_size;
        data.origin = nodes[ni].id;
        nodes[ni].cs.insert(data);
      };
      if (!seed->chunks.empty()) {
        for (long c : seed->chunks) {
          insert_chunk(c);
        }
      }
      else if (seed->total_chunks > 0) {
        const auto& mask = masks[seed->prefix];
        for (long c = 0; c < seed->total_chunks; ++c) {
          if (mask[static_cast<std::size_t>(c)] &&
              c % seed->stride_count == seed->stride_index) {
            insert_chunk(c);
          }
        }
      }
    }
  }

  // ---- event queue ---------------------------------------------------

  void schedule(TimeUs at, EvKind kind, int node, std::function<void()> fn)
  {
    queue.push_back(Ev{at, next_seq++, kind, node, std::move(fn)});
    std::push_heap(queue.begin(), queue.end(), EvLater{});
  }

  void absorb(std::uint64_t value)
  {
    for (int i = 0; i < 8; ++i) {
      hash ^= (value >> (8 * i)) & 0xff;
      hash *= kFnvPrime;
    }
  }

  bool face_is_up(const SimNode& node, int face_idx, TimeUs t) const
  {
    const auto& [up, down] = node.up_window[face_idx];
    return t >= up && t < down;
  }

  // ---- consumer ------------------------------------------------------

  TimeUs interest_timeout_us() const
  {
    if (cfg.consumer.interest_timeout_ms > 0) {
      return ms_to_us(cfg.consumer.interest_timeout_ms);
    }
    return ms_to_us(std::clamp(2.0 * vrtt_ewma_ms, 50.0, 4000.0));
  }

  void fill_window()
  {
    while (next_chunk < cfg.consumer.total_chunks &&
           static_cast<int>(in_flight.size()) < cfg.consumer.pipeline && !done) {
      express_chunk(next_chunk++, 0);
    }
  }

  void express_chunk(long chunk, int retx)
  {
    Interest interest;
    interest.name = consumer_prefix.with_segment(static_cast<std::uint64_t>(chunk));
    interest.nonce = rng();
    interest.created_at = now;

    long expr_id = ++expr_counter;
    in_flight[chunk] = InFlight{now, retx, expr_id};
    auto& rec = report.chunks[static_cast<std::size_t>(chunk)];
    if (rec.first_sent_ms < 0) {
      rec.first_sent_ms = us_to_ms(now);
    }

    TimeUs timeout = interest_timeout_us();
    schedule(now + timeout, EvKind::TimerFire, consumer_node,
             [this, chunk, expr_id] { on_consumer_timeout(chunk, expr_id); });

    forward_interest(consumer_node, interest, kAppFace);
  }

  void on_consumer_timeout(long chunk, long expr_id)
  {
    auto it = in_flight.find(chunk);
    if (it == in_flight.end() || it->second.expr_id != expr_id || done) {
      return;
    }
    int retx = it->second.retx + 1;
    report.consumer_retx++;
    report.chunks[static_cast<std::size_t>(chunk)].retx = retx;
    if (retx > cfg.consumer.max_retx) {
      report.failed = true;
      done = true;
      return;
    }
    // Drop the local PIT transaction and re-express with a fresh nonce.
    // Pending staggered re-sends belong to the abandoned transaction and
    // must not fire into the new one.
    Name name = consumer_prefix.with_segment(static_cast<std::uint64_t>(chunk));
    cancel_staggers(nodes[consumer_node], name.to_string());
    nodes[consumer_node].pit.erase(name);
    in_flight.erase(it);
    express_chunk(chunk, retx);
  }

  void on_chunk_data(long chunk)
  {
    auto it = in_flight.find(chunk);
    if (it == in_flight.end()) {
      return;  // late duplicate of an already completed chunk
    }
    double vrtt = us_to_ms(now - it->second.sent_at);
    in_flight.erase(it);
    completed_chunks++;

    auto& rec = report.chunks[static_cast<std::size_t>(chunk)];
    rec.completed_ms = us_to_ms(now);
    rec.vrtt_ms = vrtt;

    if (!vrtt_seeded) {
      vrtt_ewma_ms = vrtt;
      vrtt_seeded = true;
    }
    else {
      vrtt_ewma_ms += (vrtt - vrtt_ewma_ms) / 8.0;
    }

    if (completed_chunks >= cfg.consumer.total_chunks) {
      report.completed = true;
      report.transfer_time_ms = us_to_ms(now);
      done = true;
      return;
    }
    fill_window();
  }

  // ---- forwarding pipeline --------------------------------------------

  void forward_interest(int n, const Interest& interest, FaceId from)
  {
    SimNode& node = nodes[n];
    const Name& name = interest.name;

    if (node.role == SimNode::Role::Repository) {
      for (const Name& prefix : node.served) {
        if (prefix.is_prefix_of(name) || prefix == name) {
          Data data;
          data.name = name;
          data.payload_size = cfg.consumer.payload_size;
          data.origin = node.id;
          respond(n, from, data);
          return;
        }
      }
    }

    if (auto cached = node.cs.lookup(name)) {
      report.cache_hits[node.id]++;
      respond(n, from, *cached);
      return;
    }

    PitResult result =
        node.pit.process_incoming(interest, from, now, ms_to_us(cfg.pit_lifetime_ms));
    if (result == PitResult::DuplicateNonce) {
      report.duplicate_nonce_drops++;
      return;
    }
    if (result == PitResult::Aggregated) {
      return;
    }
    schedule(now + ms_to_us(cfg.pit_lifetime_ms), EvKind::TimerFire, n,
             [this, n, key = name.to_string()] { check_pit_expiry(n, key); });

    const FibEntry* route = fib_longest_prefix_match(node.fib, name);
    if (route == nullptr) {
      report.no_route_drops++;
      node.pit.erase(name);
      return;
    }

    // Candidate faces: nexthops minus the arrival face (point-to-point,
    // or broadcast unless this node is a designated forwarder), minus
    // faces that are currently down.
    std::vector<FaceStats> eligible;
    for (FaceId hop : route->nexthops) {
      auto idx_it = node.face_index.find(hop);
      if (idx_it == node.face_index.end()) {
        continue;
      }
      int fi = idx_it->second;
      if (hop == from) {
        bool rebroadcast = node.faces[fi].kind == FaceKind::Broadcast &&
                           node.designated_forwarder;
        if (!rebroadcast) {
          continue;
        }
      }
      if (!face_is_up(node, fi, now)) {
        continue;
      }
      eligible.push_back(node.stats[fi]);
    }
    if (eligible.empty()) {
      report.no_route_drops++;
      node.pit.erase(name);
      return;
    }

    StrategyDecision decision;
    switch (node.strategy) {
      case StrategyKind::Default:
        decision = default_select(eligible, node.scfg, rng);
        break;
      case StrategyKind::Loadsharing:
        decision = loadsharing_select(eligible);
        break;
      case StrategyKind::Parallel:
        decision = parallel_select(eligible);
        break;
      case StrategyKind::BifLocal:
        decision = bif_local_first_select(eligible, node.scfg);
        break;
      case StrategyKind::Adaptive: {
        AppRequirements reqs =
            n == consumer_node ? cfg.consumer.requirements : AppRequirements{};
        decision = adaptive_select(eligible, reqs, node.scfg, node.adaptive, now);
        break;
      }
    }

    if (opts.forward_audit) {
      audit[node.id + "|" + name.to_string() + "|" + std::to_string(interest.nonce)]++;
    }

    Interest outgoing = interest;
    outgoing.hop_count++;
    for (const StrategySend& send : decision.sends) {
      if (send.delay_offset_us == 0) {
        do_send_interest(n, send.face, outgoing);
      }
      else {
        auto token = std::make_shared<bool>(false);
        node.staggers[name.to_string()].push_back(token);
        schedule(now + send.delay_offset_us, EvKind::StaggeredSend, n,
                 [this, n, face = send.face, outgoing, token] {
                   if (*token) {
                     return;  // cancelled: data arrived first
                   }
                   if (nodes[n].pit.find(outgoing.name) == nullptr) {
                     return;  // transaction is gone
                   }
                   do_send_interest(n, face, outgoing);
                 });
      }
    }
  }

  void check_pit_expiry(int n, const std::string& key)
  {
    SimNode& node = nodes[n];
    Name name = Name::parse(key);
    PitEntry* entry = node.pit.find(name);
    if (entry != nullptr && entry->expiry > now) {
      schedule(entry->expiry, EvKind::TimerFire, n,
               [this, n, key] { check_pit_expiry(n, key); });
      return;
    }
    // Drop upstream records from this (now dead) transaction generation;
    // unanswered sends count as timeouts for the strategy layer. Records
    // younger than a pit lifetime belong to a retransmission and stay.
    auto rec_it = node.uprecs.find(key);
    if (rec_it != node.uprecs.end()) {
      auto& vec = rec_it->second;
      for (auto it = vec.begin(); it != vec.end();) {
        auto& rec = *it;
        if (rec->sent_at + ms_to_us(cfg.pit_lifetime_ms) <= now) {
          if (!rec->responded && !rec->timed_out) {
            rec->timed_out = true;
            rte_on_timeout(node.stats[node.face_index.at(rec->face)], node.scfg);
          }
          it = vec.erase(it);
        }
        else {
          ++it;
        }
      }
      if (vec.empty()) {
        node.uprecs.erase(rec_it);
      }
    }
    if (entry != nullptr) {
      cancel_staggers(node, key);
      node.pit.erase(name);
    }
  }

  void cancel_staggers(SimNode& node, const std::string& key)
  {
    auto it = node.staggers.find(key);
    if (it != node.staggers.end()) {
      for (auto& token : it->second) {
        *token = true;
      }
      node.staggers.erase(it);
    }
  }

  void do_send_interest(int n, FaceId face, const Interest& interest)
  {
    SimNode& node = nodes[n];
    auto idx_it = node.face_index.find(face);
    if (idx_it == node.face_index.end()) {
      return;
    }
    int fi = idx_it->second;
    if (!face_is_up(node, fi, now)) {
      return;
    }

    FaceStats& stats = node.stats[fi];
    stats.pending++;
    std::string key = interest.name.to_string();
    node.pit.add_upstream(interest.name, face, now);

    auto rec = std::make_shared<UpRecord>(UpRecord{face, now});
    node.uprecs[key].push_back(rec);
    // The rte timer is a measurement event: it penalizes the estimate but
    // leaves the record in place so a late data packet still counts as a
    // solicited duplicate rather than unsolicited traffic.
    schedule(now + ms_to_us(stats.rte_ms), EvKind::TimerFire, n,
             [this, n, fi, rec] { check_rte_timeout(n, fi, rec); });

    report.interests_forwarded_upstream++;
    if (n == consumer_node) {
      report.interests_sent++;
      report.per_face_sends[node.faces[fi].label]++;
      report.total_send_cost += node.faces[fi].cost;
    }
    send_packet(n, fi, Packet{interest});
  }

  void check_rte_timeout(int n, int fi, const std::shared_ptr<UpRecord>& rec)
  {
    if (rec->responded || rec->timed_out) {
      return;
    }
    // A timeout is judged against the current estimate, not the one in
    // force when the interest left. After one penalty raises the estimate,
    // the other in-flight sends re-arm instead of piling on: a brief
    // undershoot costs a single timeout rather than a whole window of them.
    SimNode& node = nodes[n];
    TimeUs deadline = rec->sent_at + ms_to_us(node.stats[fi].rte_ms);
    if (now < deadline) {
      schedule(deadline, EvKind::TimerFire, n,
               [this, n, fi, rec] { check_rte_timeout(n, fi, rec); });
      return;
    }
    rec->timed_out = true;
    rte_on_timeout(node.stats[fi], node.scfg);
  }

  void remove_uprec(SimNode& node, const std::string& key,
                    const std::shared_ptr<UpRecord>& rec)
  {
    auto it = node.uprecs.find(key);
    if (it == node.uprecs.end()) {
      return;
    }
    auto& vec = it->second;
    vec.erase(std::remove(vec.begin(), vec.end(), rec), vec.end());
    if (vec.empty()) {
      node.uprecs.erase(it);
    }
  }

  void respond(int n, FaceId to, const Data& data)
  {
    if (to == kAppFace) {
      if (auto seg = data.name.segment()) {
        on_chunk_data(static_cast<long>(*seg));
      }
      return;
    }
    SimNode& node = nodes[n];
    auto idx_it = node.face_index.find(to);
    if (idx_it != node.face_index.end()) {
      send_packet(n, idx_it->second, Packet{data});
    }
  }

  void receive_data(int n, const Data& data, FaceId from)
  {
    SimNode& node = nodes[n];
    std::string key = data.name.to_string();

    // Close the oldest open upstream record on the arrival face.
    bool solicited = false;
    auto rec_it = node.uprecs.find(key);
    if (rec_it != node.uprecs.end()) {
      for (auto& rec : rec_it->second) {
        if (!rec->responded && rec->face == from) {
          rec->responded = true;
          solicited = true;
          if (!rec->timed_out) {
            double delay_ms = us_to_ms(now - rec->sent_at);
            rte_on_data(node.stats[node.face_index.at(from)], node.scfg, delay_ms, now);
          }
          remove_uprec(node, key, rec);
          break;
        }
      }
    }

    cancel_staggers(node, key);

    std::set<FaceId> downstream = node.pit.satisfy(data, now);
    if (downstream.empty()) {
      if (solicited) {
        report.duplicate_data++;  // later copy from a parallel send
      }
      else {
        report.unsolicited_data++;
      }
      return;
    }

    node.cs.insert(data);
    for (FaceId d : downstream) {
      if (d == kAppFace) {
        on_chunk_data(static_cast<long>(data.name.segment().value_or(0)));
      }
      else {
        report.data_forwarded_downstream++;
        respond(n, d, data);
      }
    }
  }

  // ---- transmission ---------------------------------------------------

  void send_packet(int n, int face_idx, const Packet& packet)
  {
    SimNode& node = nodes[n];
    const Binding& binding = node.bindings[face_idx];
    if (binding.type == Binding::Type::Channel) {
      SimChannel& ch = channels[binding.index];
      double q = ch.signal.q_at(us_to_ms(now));
      TimeUs ser = static_cast<TimeUs>(1000.0 / effective_bandwidth(ch.model, q) + 0.5);
      TimeUs start = std::max(now, ch.busy_until);
      ch.busy_until = start + ser;
      TransmitOutcome out = transmit(ch.model, q, rng);
      if (!out.delivered) {
        return;
      }
      TimeUs arrival = start + ser + ms_to_us(out.total_delay_ms);
      int dst_node = ch.dst_node;
      int dst_face = ch.dst_face;
      schedule(arrival, EvKind::PacketArrival, dst_node,
               [this, dst_node, dst_face, packet] { on_arrival(dst_node, dst_face, packet); });
    }
    else if (binding.type == Binding::Type::Medium) {
      SimMedium& medium = media[binding.index];
      double q_sender = 1.0;
      for (std::size_t mi = 0; mi < medium.members.size(); ++mi) {
        if (medium.members[mi] == std::make_pair(n, face_idx)) {
          q_sender = medium.member_signal[mi].q_at(us_to_ms(now));
        }
      }
      TimeUs ser =
          static_cast<TimeUs>(1000.0 / effective_bandwidth(medium.model, q_sender) + 0.5);
      TimeUs start = std::max(now, medium.busy_until);
      medium.busy_until = start + ser;
      // One shared serialization; independent loss draws per listener.
      // The sender never receives its own transmission.
      for (std::size_t mi = 0; mi < medium.members.size(); ++mi) {
        auto [dst_node, dst_face] = medium.members[mi];
        if (dst_node == n && dst_face == face_idx) {
          continue;
        }
        double q = medium.member_signal[mi].q_at(us_to_ms(now));
        TransmitOutcome out = transmit(medium.model, q, rng);
        if (!out.delivered) {
          continue;
        }
        TimeUs arrival = start + ser + ms_to_us(out.total_delay_ms);
        schedule(arrival, EvKind::PacketArrival, dst_node,
                 [this, dst_node, dst_face, packet] {
                   on_arrival(dst_node, dst_face, packet);
                 });
      }
    }
  }

  void on_arrival(int n, int face_idx, const Packet& packet)
  {
    SimNode& node = nodes[n];
    if (!face_is_up(node, face_idx, now)) {
      return;  // e.g. in-flight data lost at a detached access link
    }
    FaceId from = node.faces[face_idx].id;
    if (std::holds_alternative<Interest>(packet)) {
      forward_interest(n, std::get<Interest>(packet), from);
      return;
    }
    const Data& data = std::get<Data>(packet);
    if (n == consumer_node) {
      report.data_received++;
    }
    if (node.processing_delay_ms > 0) {
      TimeUs start = std::max(now, node.proc_free);
      TimeUs ready = start + ms_to_us(node.processing_delay_ms);
      node.proc_free = ready;
      schedule(ready, EvKind::TimerFire, n, [this, n, data, from] {
        receive_data(n, data, from);
      });
      return;
    }
    receive_data(n, data, from);
  }

  // ---- main loop -------------------------------------------------------

  MetricsReport run()
  {
    report = MetricsReport{};
    report.chunks.resize(static_cast<std::size_t>(cfg.consumer.total_chunks));

    schedule(0, EvKind::ConsumerTick, consumer_node, [this] { fill_window(); });

    while (!queue.empty() && !done) {
      std::pop_heap(queue.begin(), queue.end(), EvLater{});
      Ev ev = std::move(queue.back());
      queue.pop_back();
      if (ev.at > horizon_us) {
        break;  // horizon reached: partial report
      }
      now = ev.at;
      absorb(static_cast<std::uint64_t>(ev.at));
      absorb((static_cast<std::uint64_t>(ev.kind) << 32) |
             static_cast<std::uint64_t>(static_cast<std::uint32_t>(ev.node)));
      if (opts.trace == TraceMode::Full) {
        trace_lines.push_back(std::to_string(ev.at) + " " +
                              (ev.node >= 0 ? nodes[ev.node].id : "-") + " " +
                              ev_kind_name(ev.kind));
      }
      ev.fn();
      report.events_processed++;
    }

    finalize_report();
    return report;
  }

  void finalize_report()
  {
    SimNode& client = nodes[consumer_node];
    for (const FaceStats& s : client.stats) {
      report.timeouts += s.timeouts;
    }

    std::vector<double> vrtts;
    double sum = 0.0;
    for (const ChunkRecord& rec : report.chunks) {
      if (rec.vrtt_ms >= 0) {
        vrtts.push_back(rec.vrtt_ms);
        sum += rec.vrtt_ms;
      }
    }
    if (!vrtts.empty()) {
      report.vrtt_mean_ms = sum / static_cast<double>(vrtts.size());
      std::sort(vrtts.begin(), vrtts.end());
      report.vrtt_p50_ms = vrtts[vrtts.size() / 2];
      report.vrtt_p95_ms = vrtts[std::min(vrtts.size() - 1,
                                          static_cast<std::size_t>(vrtts.size() * 0.95))];
    }
    report.trace_hash = hash;
  }
};

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed, SimOptions opts)
  : impl_(std::make_unique<Impl>(cfg, seed, opts))
{
}

Simulation::~Simulation() = default;

MetricsReport Simulation::run()
{
  return impl_->run();
}

const std::vector<std::string>& Simulation::trace_log() const
{
  return impl_->trace_lines;
}

const std::map<std::string, int>& Simulation::forward_audit() const
{
  return impl_->audit;
}

}  // namespace ccnsim
