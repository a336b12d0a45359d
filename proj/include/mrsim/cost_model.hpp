#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mrsim/types.hpp"

namespace mrsim {

enum class CostKind {
  polynomial,  // coefficient * size^exponent
  product,     // coefficient * size * right_count (two-relation join shape)
  table,       // piecewise-linear lookup over (size, ms) samples
};

/// Ground-truth mapping from a reduce (or map) function's input size in
/// bytes to its running time in milliseconds.
///
/// For the product kind, `size` plays the role of the varying-side
/// multiplicity and `right_count` is the pinned multiplicity of the other
/// relation; a right_count of 1 degenerates to a linear cost.
struct CostModel {
  CostKind kind = CostKind::polynomial;
  double coefficient = 1.0;  // ms per byte^exponent (polynomial/table scale)
  double exponent = 1.0;     // >= 0
  std::uint64_t right_count = 1;
  std::vector<std::pair<std::uint64_t, double>> table;  // sorted by size
  double noise = 0.0;  // multiplicative noise fraction, in [0,1)

  static CostModel make_polynomial(double coefficient, double exponent,
                                   double noise = 0.0);
  static CostModel make_product(double coefficient, std::uint64_t right_count,
                                double noise = 0.0);
  static CostModel make_table(std::vector<std::pair<std::uint64_t, double>> t,
                              double noise = 0.0);
};

/// Noise-free real-valued evaluation of the model. Non-negative and
/// monotone in size for all three kinds (given a monotone table).
double raw_cost(const CostModel& model, std::uint64_t size_bytes);

/// Running time in integral milliseconds: raw_cost scaled by a
/// deterministic multiplicative perturbation (1 + e) with e drawn from
/// rng_seed inside (-noise, +noise), then rounded half away from zero.
/// Pure function of (model, size_bytes, rng_seed).
DurationMs eval_cost(const CostModel& model, std::uint64_t size_bytes,
                     std::uint64_t rng_seed);

}  // namespace mrsim
