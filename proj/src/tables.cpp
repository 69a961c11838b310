#include "ccnsim/tables.hpp"

namespace ccnsim {

std::optional<Data> ContentStore::lookup(const Name& name)
{
  auto it = index_.find(name.to_string());
  if (it == index_.end()) {
    return std::nullopt;
  }
  lru_.splice(lru_.begin(), lru_, it->second);
  return it->second->second;
}

std::optional<Name> ContentStore::insert(const Data& data)
{
  if (capacity_ == 0) {
    return std::nullopt;  // store disabled
  }
  std::string key = data.name.to_string();
  auto it = index_.find(key);
  if (it != index_.end()) {
    it->second->second = data;
    lru_.splice(lru_.begin(), lru_, it->second);
    return std::nullopt;
  }
  std::optional<Name> evicted;
  if (lru_.size() >= capacity_) {
    evicted = Data(lru_.back().second).name;
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
  lru_.emplace_front(key, data);
  index_[std::move(key)] = lru_.begin();
  return evicted;
}

PitResult Pit::process_incoming(const Interest& interest, FaceId from, TimeUs now,
                                TimeUs lifetime)
{
  std::string key = interest.name.to_string();
  auto it = entries_.find(key);
  if (it != entries_.end() && it->second.expiry <= now) {
    entries_.erase(it);
    it = entries_.end();
  }
  if (it != entries_.end()) {
    PitEntry& entry = it->second;
    if (entry.nonces_seen.count(interest.nonce) > 0) {
      return PitResult::DuplicateNonce;
    }
    entry.nonces_seen.insert(interest.nonce);
    entry.downstream.insert(from);
    entry.expiry = now + lifetime;
    return PitResult::Aggregated;
  }
  PitEntry entry;
  entry.name = interest.name;
  entry.downstream.insert(from);
  entry.nonces_seen.insert(interest.nonce);
  entry.expiry = now + lifetime;
  entries_.emplace(std::move(key), std::move(entry));
  return PitResult::CacheMissNew;
}

std::set<FaceId> Pit::satisfy(const Data& data, TimeUs now)
{
  auto it = entries_.find(data.name.to_string());
  if (it == entries_.end() || it->second.expiry <= now) {
    if (it != entries_.end()) {
      entries_.erase(it);
    }
    return {};
  }
  std::set<FaceId> downstream = std::move(it->second.downstream);
  entries_.erase(it);
  return downstream;
}

std::vector<PitEntry> Pit::expire(TimeUs now)
{
  std::vector<PitEntry> expired;
  for (auto it = entries_.begin(); it != entries_.end();) {
    if (it->second.expiry <= now) {
      expired.push_back(std::move(it->second));
      it = entries_.erase(it);
    }
    else {
      ++it;
    }
  }
  return expired;
}

PitEntry* Pit::find(const Name& name)
{
  auto it = entries_.find(name.to_string());
  return it == entries_.end() ? nullptr : &it->second;
}

void Pit::erase(const Name& name)
{
  entries_.erase(name.to_string());
}

void Pit::add_upstream(const Name& name, FaceId face, TimeUs sent_at)
{
  if (PitEntry* entry = find(name)) {
    entry->upstream.push_back({face, sent_at});
  }
}

const FibEntry* fib_longest_prefix_match(const std::vector<FibEntry>& fib, const Name& name)
{
  const FibEntry* best = nullptr;
  for (const FibEntry& entry : fib) {
    if (entry.prefix.is_prefix_of(name)) {
      if (best == nullptr || entry.prefix.size() > best->prefix.size()) {
        best = &entry;
      }
    }
  }
  return best;
}

}  // namespace ccnsim
