#include "mrsim/space_saving.hpp"

#include <algorithm>
#include <stdexcept>

namespace mrsim {

SpaceSavingSketch::SpaceSavingSketch(std::size_t capacity)
    : capacity_(capacity) {
  if (capacity_ == 0) {
    throw std::invalid_argument("SpaceSavingSketch: capacity must be >= 1");
  }
  slots_.reserve(capacity_);
  heap_.reserve(capacity_);
}

bool SpaceSavingSketch::heap_less(std::size_t a, std::size_t b) const {
  const Slot& sa = slots_[heap_[a]];
  const Slot& sb = slots_[heap_[b]];
  if (sa.estimate != sb.estimate) return sa.estimate < sb.estimate;
  return sa.key < sb.key;
}

void SpaceSavingSketch::sift_up(std::size_t pos) {
  while (pos > 0) {
    std::size_t parent = (pos - 1) / 2;
    if (!heap_less(pos, parent)) break;
    std::swap(heap_[pos], heap_[parent]);
    slots_[heap_[pos]].heap_pos = pos;
    slots_[heap_[parent]].heap_pos = parent;
    pos = parent;
  }
}

void SpaceSavingSketch::sift_down(std::size_t pos) {
  const std::size_t n = heap_.size();
  for (;;) {
    std::size_t smallest = pos;
    const std::size_t l = 2 * pos + 1;
    const std::size_t r = 2 * pos + 2;
    if (l < n && heap_less(l, smallest)) smallest = l;
    if (r < n && heap_less(r, smallest)) smallest = r;
    if (smallest == pos) break;
    std::swap(heap_[pos], heap_[smallest]);
    slots_[heap_[pos]].heap_pos = pos;
    slots_[heap_[smallest]].heap_pos = smallest;
    pos = smallest;
  }
}

void SpaceSavingSketch::offer(std::uint64_t key, std::uint64_t weight) {
  total_weight_ += weight;
  if (auto it = index_.find(key); it != index_.end()) {
    Slot& s = slots_[it->second];
    s.estimate += weight;
    sift_down(s.heap_pos);
    return;
  }
  if (slots_.size() < capacity_) {
    slots_.push_back({key, weight, 0, heap_.size()});
    heap_.push_back(slots_.size() - 1);
    index_.emplace(key, slots_.size() - 1);
    sift_up(heap_.size() - 1);
    return;
  }
  // Full: rename the minimum-estimate entry, inheriting its estimate as the
  // error floor of the incoming key.
  Slot& victim = slots_[heap_[0]];
  index_.erase(victim.key);
  victim.error = victim.estimate;
  victim.estimate += weight;
  victim.key = key;
  index_.emplace(key, heap_[0]);
  sift_down(0);
}

bool SpaceSavingSketch::contains(std::uint64_t key) const {
  return index_.count(key) != 0;
}

std::optional<SpaceSavingSketch::Entry> SpaceSavingSketch::lookup(
    std::uint64_t key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  const Slot& s = slots_[it->second];
  return Entry{s.key, s.estimate, s.error};
}

std::vector<SpaceSavingSketch::Entry> SpaceSavingSketch::entries() const {
  std::vector<Entry> out;
  out.reserve(slots_.size());
  for (const Slot& s : slots_) out.push_back({s.key, s.estimate, s.error});
  std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
    if (a.estimate != b.estimate) return a.estimate > b.estimate;
    return a.key < b.key;
  });
  return out;
}

std::vector<SpaceSavingSketch::Entry> SpaceSavingSketch::heavy(
    std::size_t k) const {
  if (k > capacity_) {
    throw std::invalid_argument("SpaceSavingSketch::heavy: k exceeds capacity");
  }
  auto out = entries();
  if (out.size() > k) out.resize(k);
  return out;
}

}  // namespace mrsim
