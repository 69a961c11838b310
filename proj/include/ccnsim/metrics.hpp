#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ccnsim {

/// Per-chunk record kept by the consumer, used by scenario checks.
struct ChunkRecord {
  double first_sent_ms = -1.0;
  double completed_ms = -1.0;
  double vrtt_ms = -1.0;  // from the most recent expression to data arrival
  int retx = 0;
};

struct MetricsReport {
  bool completed = false;
  bool failed = false;  // a chunk exceeded max_retx
  double transfer_time_ms = 0.0;

  long interests_sent = 0;  // physical interest transmissions at the client
  long data_received = 0;   // data packet arrivals at the client node
  long duplicate_data = 0;  // solicited duplicates discarded (all nodes)
  long unsolicited_data = 0;
  long timeouts = 0;        // rte timeouts at the client faces
  long consumer_retx = 0;
  long no_route_drops = 0;
  long duplicate_nonce_drops = 0;
  double total_send_cost = 0.0;  // sum of face cost over client interest sends

  // Global flow-balance counters.
  long interests_forwarded_upstream = 0;
  long data_forwarded_downstream = 0;

  std::map<std::string, long> per_face_sends;  // client face label -> interests
  std::map<std::string, long> cache_hits;      // node id -> CS hits

  double vrtt_mean_ms = 0.0;
  double vrtt_p50_ms = 0.0;
  double vrtt_p95_ms = 0.0;

  std::vector<ChunkRecord> chunks;

  std::uint64_t trace_hash = 0;
  long events_processed = 0;
};

struct SummaryRow {
  std::string sweep_label;
  std::string strategy;
  double mean_signal_q = 1.0;
  int replications = 0;
  int incomplete = 0;
  double transfer_time_mean = 0.0;
  double transfer_time_stddev = 0.0;
  double interests_sent_mean = 0.0;
  double interests_sent_stddev = 0.0;
  double timeouts_mean = 0.0;
  double duplicate_data_mean = 0.0;
  double vrtt_p50_mean = 0.0;
  double cache_hits_mean = 0.0;  // summed over nodes, averaged over runs
};

}  // namespace ccnsim
