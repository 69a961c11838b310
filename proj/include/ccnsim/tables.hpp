#pragma once

#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "ccnsim/name.hpp"
#include "ccnsim/packet.hpp"

namespace ccnsim {

/// Exact-name LRU cache of Data packets.
class ContentStore {
public:
  explicit ContentStore(std::size_t capacity)
    : capacity_(capacity)
  {
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return lru_.size(); }

  /// Exact-name lookup. A hit refreshes the LRU position.
  std::optional<Data> lookup(const Name& name);

  /// Inserts (or refreshes) a Data packet. Returns the evicted name when
  /// a full store had to drop its LRU entry. A zero-capacity store is
  /// disabled: insert is a no-op and returns nullopt.
  std::optional<Name> insert(const Data& data);

private:
  std::size_t capacity_;
  // Front of the list is most recently used.
  std::list<std::pair<std::string, Data>> lru_;
  std::unordered_map<std::string, std::list<std::pair<std::string, Data>>::iterator> index_;
};

struct PitUpstream {
  FaceId face = 0;
  TimeUs sent_at = 0;
};

struct PitEntry {
  Name name;
  std::set<FaceId> downstream;
  std::vector<PitUpstream> upstream;
  std::set<std::uint64_t> nonces_seen;
  TimeUs expiry = 0;
};

enum class PitResult {
  CacheMissNew,   // fresh entry created, forward upstream
  Aggregated,     // live entry, new nonce: downstream grew, no forwarding
  DuplicateNonce  // looped interest, drop
};

/// Pending Interest Table, keyed by exact name.
class Pit {
public:
  /// Classifies an incoming interest (cache misses only; the engine
  /// handles CS hits before the PIT). Expiry boundary is inclusive: an
  /// entry with expiry <= now is dead.
  PitResult process_incoming(const Interest& interest, FaceId from, TimeUs now,
                             TimeUs lifetime);

  /// Returns the downstream set of the live entry matching data.name and
  /// removes the entry; empty set for unsolicited data.
  std::set<FaceId> satisfy(const Data& data, TimeUs now);

  /// Removes and returns every entry with expiry <= now.
  std::vector<PitEntry> expire(TimeUs now);

  PitEntry* find(const Name& name);
  void erase(const Name& name);
  void add_upstream(const Name& name, FaceId face, TimeUs sent_at);
  std::size_t size() const { return entries_.size(); }

private:
  std::unordered_map<std::string, PitEntry> entries_;
};

struct FibEntry {
  Name prefix;
  std::vector<FaceId> nexthops;  // non-empty, no duplicates
};

/// Returns the FIB entry whose prefix is the longest component-wise
/// prefix of name, or nullptr when nothing matches.
const FibEntry* fib_longest_prefix_match(const std::vector<FibEntry>& fib, const Name& name);

}  // namespace ccnsim
