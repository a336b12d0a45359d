#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mrsim/space_saving.hpp"

namespace mrsim {

/// Bounded histogram of the most frequent key-group sizes, maintained under
/// the same heavy-hitter policy as the key sketch (size acts as the key,
/// each observation has weight one).
class SizeHistogram {
 public:
  struct Bucket {
    std::uint64_t size_bytes = 0;
    double count = 0.0;  // fractional counts are fine downstream
  };

  explicit SizeHistogram(std::size_t capacity);

  void record(std::uint64_t size_bytes);

  bool empty() const { return sketch_.size() == 0; }
  std::size_t bucket_count() const { return sketch_.size(); }

  /// Splits `total_bytes` across the observed buckets proportionally to
  /// each bucket's byte mass (size * frequency) and converts each share to
  /// a fractional group count. Conserves bytes: sum(size * count) equals
  /// total_bytes up to floating-point rounding. Returns nullopt when the
  /// histogram holds no positive-size bucket but total_bytes > 0 (caller
  /// must fall back to a global model).
  std::optional<std::vector<Bucket>> partition(
      std::uint64_t total_bytes) const;

 private:
  SpaceSavingSketch sketch_;
};

}  // namespace mrsim
