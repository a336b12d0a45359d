#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mrsim/types.hpp"

namespace mrsim {

/// Geometric skew benchmark: level i holds roughly sigma^i key groups of
/// size n/sigma^i, so every level carries about the same byte mass while
/// group sizes span n down to one byte.
struct SkewSpec {
  double sigma = 2.0;                 // > 1
  std::uint64_t max_group_bytes = 1;  // n: size of the single largest group
  std::optional<std::uint64_t> total_budget_bytes;  // optional cap
};

/// Emits groups sorted by non-increasing size with fresh distinct keys.
/// Rounding is half-up; levels stop once n/sigma^i drops below one byte or
/// the byte budget is exhausted. Pure function of the spec.
/// Throws std::invalid_argument when sigma <= 1 or max_group_bytes < 1.
std::vector<KeyGroup> gen_sigma_skew(const SkewSpec& spec);

/// Zipf-distributed relation: rank r receives floor(C * r^-skew) tuples
/// with C normalizing the total to roughly `tuples`.
struct ZipfSpec {
  double skew = 1.0;                // > 0
  std::uint64_t distinct_keys = 1;  // >= 1
  std::uint64_t tuples = 1;         // >= 1
  bool sampled = false;  // true: draw tuples at random instead of quotas
};

/// KeyGroup.size_bytes is the multiplicity n_R(k) (one byte per tuple).
/// Quota mode ignores the seed and is exact; sampled mode draws `tuples`
/// ranks from the Zipf pmf deterministically from the seed. Ranks whose
/// quota rounds to zero are dropped.
std::vector<KeyGroup> gen_zipf_relation(const ZipfSpec& spec,
                                        std::uint64_t seed);

enum class BalanceStrategy { optimal, random, unbalanced };
enum class MatMultDensity { uniform, positional };

/// Blocked sparse matrix multiply workload: block_count (a perfect square,
/// q^2) blocks per matrix yield q^3 block products, each one reduce key.
/// Product (i,l,j) multiplies A(i,l) by B(l,j); its cost is
/// block_side^3 * d * d' and its input size block_side^2 * (d + d') bytes.
/// uniform density: d = d' = 0.25 everywhere. positional density:
/// A(i,j) has d = 2^-(q-1-j), B(i,j) has d' = 2^-(q-1-i).
struct MatMultSpec {
  int block_count = 4;  // k, perfect square
  int block_side = 32;  // n
  int reduce_tasks = 2;
  BalanceStrategy balance = BalanceStrategy::optimal;
  MatMultDensity density = MatMultDensity::positional;
};

struct BlockProduct {
  KeyId key = 0;
  std::uint64_t size_bytes = 0;
  double cost = 0.0;  // block_side^3 * d * d'
  int task = 0;       // assigned reduce task
};

struct MatMultAssignment {
  int reduce_tasks = 0;
  std::vector<BlockProduct> products;

  std::vector<double> per_task_cost() const;
};

/// optimal: greedy LPT over all tasks. random: uniform seeded assignment.
/// unbalanced: the block_count costliest products all land on task 0, the
/// rest are LPT-spread over the remaining tasks.
/// Throws std::invalid_argument for non-square block_count or bad sizes.
MatMultAssignment gen_matmult_products(const MatMultSpec& spec,
                                       std::uint64_t seed);

/// Shared assignment helpers (also used by the simulator's partitioner).
/// Both take per-key costs, return the task of each key, and break ties by
/// key index so results are pinned.
std::vector<int> assign_lpt(const std::vector<double>& costs, int tasks);
std::vector<int> assign_unbalanced(const std::vector<double>& costs,
                                   int tasks, std::size_t pinned_count);

}  // namespace mrsim
