#include "mrsim/smoothing.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace mrsim {

namespace {

using Wide = __int128;

Wide wide_abs(Wide v) { return v < 0 ? -v : v; }

// |time - total/count| <= window, in exact integer arithmetic.
bool within_window(std::int64_t time, const SmoothedPoint& p,
                   std::int64_t window) {
  const Wide diff = wide_abs(Wide(time) * Wide(p.count) - Wide(p.total_time_ms));
  return diff <= Wide(window) * Wide(p.count);
}

// Distance comparison between candidate points, exact: |t - mean_a| vs
// |t - mean_b| cross-multiplied by the counts.
bool closer(std::int64_t time, const SmoothedPoint& a, const SmoothedPoint& b) {
  const Wide da = wide_abs(Wide(time) * Wide(a.count) - Wide(a.total_time_ms));
  const Wide db = wide_abs(Wide(time) * Wide(b.count) - Wide(b.total_time_ms));
  return da * Wide(b.count) < db * Wide(a.count);
}

bool means_within_window(const SmoothedPoint& a, const SmoothedPoint& b,
                         std::int64_t window) {
  const Wide diff = wide_abs(Wide(a.total_time_ms) * Wide(b.count) -
                             Wide(b.total_time_ms) * Wide(a.count));
  return diff <= Wide(window) * Wide(a.count) * Wide(b.count);
}

}  // namespace

SmoothedPointSet::SmoothedPointSet(DurationMs merge_window_ms)
    : window_(merge_window_ms) {
  if (window_ < 0) {
    throw std::invalid_argument("SmoothedPointSet: window must be >= 0");
  }
}

void SmoothedPointSet::insert(std::uint64_t size_bytes, DurationMs time_ms) {
  if (time_ms < 0) {
    throw std::invalid_argument("SmoothedPointSet: time must be >= 0");
  }
  total_time_ += time_ms;
  total_count_ += 1;
  total_bytes_ += size_bytes;

  auto& bucket = by_size_[size_bytes];
  // Pick the closest mergeable point, if any.
  std::size_t best = bucket.size();
  for (std::size_t i = 0; i < bucket.size(); ++i) {
    if (!within_window(time_ms, bucket[i], window_)) continue;
    if (best == bucket.size() || closer(time_ms, bucket[i], bucket[best])) {
      best = i;
    }
  }
  if (best == bucket.size()) {
    bucket.push_back({size_bytes, time_ms, 1});
    ++point_count_;
  } else {
    bucket[best].total_time_ms += time_ms;
    bucket[best].count += 1;
    // The merged mean moved; cascade further merges until stable.
    bool merged = true;
    while (merged) {
      merged = false;
      for (std::size_t i = 0; i < bucket.size() && !merged; ++i) {
        for (std::size_t j = i + 1; j < bucket.size() && !merged; ++j) {
          if (means_within_window(bucket[i], bucket[j], window_)) {
            bucket[i].total_time_ms += bucket[j].total_time_ms;
            bucket[i].count += bucket[j].count;
            bucket.erase(bucket.begin() + static_cast<std::ptrdiff_t>(j));
            --point_count_;
            merged = true;
          }
        }
      }
    }
  }
}

std::vector<SmoothedPoint> SmoothedPointSet::snapshot() const {
  std::vector<SmoothedPoint> out;
  out.reserve(point_count_);
  for (const auto& [size, bucket] : by_size_) {
    auto sorted = bucket;
    std::sort(sorted.begin(), sorted.end(),
              [](const SmoothedPoint& a, const SmoothedPoint& b) {
                return Wide(a.total_time_ms) * Wide(b.count) <
                       Wide(b.total_time_ms) * Wide(a.count);
              });
    out.insert(out.end(), sorted.begin(), sorted.end());
  }
  return out;
}

}  // namespace mrsim
