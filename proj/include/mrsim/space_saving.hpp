#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace mrsim {

/// Weighted Space Saving summary over a stream of (key, weight) offers.
/// Keeps at most `capacity` keys. For every tracked key the estimate never
/// undershoots the key's true offered weight and overshoots it by at most
/// total_weight / capacity; the per-key `error` field bounds the
/// overestimation exactly. The sum of all estimates equals the total
/// offered weight at all times.
class SpaceSavingSketch {
 public:
  struct Entry {
    std::uint64_t key = 0;
    std::uint64_t estimate = 0;
    std::uint64_t error = 0;  // max possible overestimation for this key
  };

  explicit SpaceSavingSketch(std::size_t capacity);

  void offer(std::uint64_t key, std::uint64_t weight);

  bool contains(std::uint64_t key) const;
  std::optional<Entry> lookup(std::uint64_t key) const;

  /// Top-k entries by estimate descending, ties broken by key ascending.
  /// Throws std::invalid_argument when k exceeds the capacity.
  std::vector<Entry> heavy(std::size_t k) const;

  /// Every tracked entry, same ordering as heavy().
  std::vector<Entry> entries() const;

  std::size_t size() const { return slots_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t total_weight() const { return total_weight_; }

 private:
  struct Slot {
    std::uint64_t key;
    std::uint64_t estimate;
    std::uint64_t error;
    std::size_t heap_pos;
  };

  bool heap_less(std::size_t a, std::size_t b) const;
  void sift_up(std::size_t pos);
  void sift_down(std::size_t pos);

  std::size_t capacity_;
  std::uint64_t total_weight_ = 0;
  std::vector<Slot> slots_;
  std::vector<std::size_t> heap_;  // min-heap of slot indices by (estimate, key)
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

}  // namespace mrsim
