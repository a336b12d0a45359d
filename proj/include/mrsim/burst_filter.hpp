#pragma once

#include <cstdint>
#include <vector>

#include "mrsim/types.hpp"

namespace mrsim {

/// One measured (input size, running time) observation delivered to the
/// progress monitor.
struct ProfilePoint {
  std::uint64_t size_bytes = 0;
  DurationMs time_ms = 0;
};

/// Time-measurement gate for reduce executions. Executions whose input size
/// is at most `size_threshold_bytes` are buffered unmeasured; the buffered
/// burst is closed and delivered once a large execution arrives (which is
/// always measured exactly on its own) or once more than `skip_threshold`
/// executions are pending. A closed burst's cumulative elapsed time is
/// split across its executions proportionally to input size, with
/// largest-remainder rounding so the emitted times sum to the true elapsed
/// time exactly.
class BurstFilter {
 public:
  BurstFilter(std::uint64_t size_threshold_bytes, std::size_t skip_threshold);

  /// Feed one completed execution; returns the points delivered now (often
  /// none).
  std::vector<ProfilePoint> record(std::uint64_t size_bytes,
                                   DurationMs elapsed_ms);

  /// Deliver whatever is pending (task end).
  std::vector<ProfilePoint> flush();

  std::size_t pending_count() const { return pending_.size(); }
  DurationMs pending_elapsed_ms() const { return pending_elapsed_; }

 private:
  std::vector<ProfilePoint> split_pending();

  std::uint64_t size_threshold_;
  std::size_t skip_threshold_;
  std::vector<ProfilePoint> pending_;  // time field holds the true elapsed
  DurationMs pending_elapsed_ = 0;
};

}  // namespace mrsim
