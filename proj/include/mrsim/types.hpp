#pragma once

#include <cstdint>

namespace mrsim {

/// 64-bit digest of a serialized intermediate key. Keys never exist as
/// objects inside the simulator, only as digests plus byte sizes.
using KeyId = std::uint64_t;

/// Simulated clock value, integral milliseconds. The clock is integral so
/// traces are exactly reproducible.
using SimTime = std::int64_t;

/// Span of simulated time, integral milliseconds.
using DurationMs = std::int64_t;

/// One intermediate key together with the byte size of its value set; the
/// unit of work of a single reduce-function invocation.
struct KeyGroup {
  KeyId key = 0;
  std::uint64_t size_bytes = 0;

  friend bool operator==(const KeyGroup&, const KeyGroup&) = default;
};

}  // namespace mrsim
