#include "mrsim/size_histogram.hpp"

#include <algorithm>

namespace mrsim {

SizeHistogram::SizeHistogram(std::size_t capacity) : sketch_(capacity) {}

void SizeHistogram::record(std::uint64_t size_bytes) {
  sketch_.offer(size_bytes, 1);
}

std::optional<std::vector<SizeHistogram::Bucket>> SizeHistogram::partition(
    std::uint64_t total_bytes) const {
  if (total_bytes == 0) return std::vector<Bucket>{};

  double total_mass = 0.0;
  auto rows = sketch_.entries();
  for (const auto& e : rows) {
    if (e.key == 0) continue;  // zero-size groups carry no bytes
    total_mass += static_cast<double>(e.key) * static_cast<double>(e.estimate);
  }
  if (total_mass <= 0.0) return std::nullopt;

  std::vector<Bucket> out;
  out.reserve(rows.size());
  // entries() orders by estimate; emit sorted by size for determinism.
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });
  for (const auto& e : rows) {
    if (e.key == 0) continue;
    const double mass =
        static_cast<double>(e.key) * static_cast<double>(e.estimate);
    const double allocated = static_cast<double>(total_bytes) * mass / total_mass;
    out.push_back({e.key, allocated / static_cast<double>(e.key)});
  }
  return out;
}

}  // namespace mrsim
