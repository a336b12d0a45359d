#include "mrsim/burst_filter.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mrsim {

BurstFilter::BurstFilter(std::uint64_t size_threshold_bytes,
                         std::size_t skip_threshold)
    : size_threshold_(size_threshold_bytes), skip_threshold_(skip_threshold) {}

std::vector<ProfilePoint> BurstFilter::split_pending() {
  std::vector<ProfilePoint> out;
  if (pending_.empty()) return out;

  const DurationMs total = pending_elapsed_;
  std::uint64_t total_size = 0;
  for (const auto& p : pending_) total_size += p.size_bytes;

  // Proportional quotas with largest-remainder correction; a burst of
  // all-zero sizes splits evenly.
  const std::size_t n = pending_.size();
  std::vector<DurationMs> base(n, 0);
  std::vector<double> remainder(n, 0.0);
  DurationMs assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double quota =
        total_size > 0
            ? static_cast<double>(total) *
                  (static_cast<double>(pending_[i].size_bytes) /
                   static_cast<double>(total_size))
            : static_cast<double>(total) / static_cast<double>(n);
    base[i] = static_cast<DurationMs>(quota);  // trunc toward zero, quota >= 0
    remainder[i] = quota - static_cast<double>(base[i]);
    assigned += base[i];
  }
  DurationMs leftover = total - assigned;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t i = 0; leftover > 0; i = (i + 1) % n, --leftover) {
    base[order[i]] += 1;
  }

  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({pending_[i].size_bytes, base[i]});
  }
  pending_.clear();
  pending_elapsed_ = 0;
  return out;
}

std::vector<ProfilePoint> BurstFilter::record(std::uint64_t size_bytes,
                                              DurationMs elapsed_ms) {
  if (elapsed_ms < 0) {
    throw std::invalid_argument("BurstFilter: elapsed must be >= 0");
  }
  if (size_bytes > size_threshold_) {
    // Large group: close any open burst, then measure this one exactly.
    auto out = split_pending();
    out.push_back({size_bytes, elapsed_ms});
    return out;
  }
  pending_.push_back({size_bytes, elapsed_ms});
  pending_elapsed_ += elapsed_ms;
  if (pending_.size() > skip_threshold_) {
    return split_pending();
  }
  return {};
}

std::vector<ProfilePoint> BurstFilter::flush() { return split_pending(); }

}  // namespace mrsim
