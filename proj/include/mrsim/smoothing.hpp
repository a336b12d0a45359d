#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "mrsim/types.hpp"

namespace mrsim {

/// One aggregated profile point: `count` executions of input size
/// `size_bytes` whose running times sum to `total_time_ms`.
struct SmoothedPoint {
  std::uint64_t size_bytes = 0;
  std::int64_t total_time_ms = 0;
  std::uint64_t count = 0;

  double mean_time_ms() const {
    return static_cast<double>(total_time_ms) / static_cast<double>(count);
  }
};

/// Profile-point aggregator: an inserted (size, time) pair merges into an
/// existing point of the same size whenever the time lies within
/// `merge_window_ms` of that point's mean; otherwise it is retained as a
/// new point. Totals accumulate in integer arithmetic, so the sum of
/// count*mean over the set always equals the sum of inserted times exactly.
/// After every insert, no two retained points of equal size have means
/// within the window of each other (merges cascade).
class SmoothedPointSet {
 public:
  explicit SmoothedPointSet(DurationMs merge_window_ms);

  void insert(std::uint64_t size_bytes, DurationMs time_ms);

  std::size_t point_count() const { return point_count_; }
  std::int64_t total_time_ms() const { return total_time_; }
  std::uint64_t total_count() const { return total_count_; }
  std::uint64_t total_weighted_bytes() const { return total_bytes_; }

  /// All points ordered by (size, mean): deterministic snapshot.
  std::vector<SmoothedPoint> snapshot() const;

 private:
  DurationMs window_;
  std::map<std::uint64_t, std::vector<SmoothedPoint>> by_size_;
  std::size_t point_count_ = 0;
  std::int64_t total_time_ = 0;
  std::uint64_t total_count_ = 0;
  std::uint64_t total_bytes_ = 0;  // sum of size per execution
};

}  // namespace mrsim
