#pragma once

#include <cstdint>
#include <string>

#include "ccnsim/name.hpp"

namespace ccnsim {

/// Simulation time in integer microseconds. Integer timestamps keep
/// replay determinism exact; reports convert to milliseconds.
using TimeUs = std::int64_t;

inline TimeUs ms_to_us(double ms) { return static_cast<TimeUs>(ms * 1000.0 + 0.5); }
inline double us_to_ms(TimeUs us) { return static_cast<double>(us) / 1000.0; }

using FaceId = std::int32_t;

/// Reserved face id for locally originated traffic (the consumer app).
constexpr FaceId kAppFace = -1;

enum class FaceKind { PointToPoint, Broadcast };

struct Face {
  FaceId id = 0;
  std::string label;
  double cost = 1.0;  // per-interest cost weight, >= 0
  FaceKind kind = FaceKind::PointToPoint;
};

struct Interest {
  Name name;
  std::uint64_t nonce = 0;
  int hop_count = 0;
  TimeUs created_at = 0;
};

struct Data {
  Name name;
  int payload_size = 4096;
  std::string origin;  // node id of the repository or cache that answered
};

}  // namespace ccnsim
