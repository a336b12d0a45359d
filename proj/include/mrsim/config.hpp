#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mrsim/cost_model.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

/// One fixed-size input chunk; spawns one map task. Every pair costs
/// map_cost(bytes_per_pair) and contributes bytes_per_pair input bytes.
struct MapSplit {
  std::uint64_t pairs = 0;
  std::uint64_t bytes_per_pair = 0;

  std::uint64_t bytes() const { return pairs * bytes_per_pair; }
};

/// An intermediate key and how many bytes of its value set each map task
/// emits. Total key-group size is the sum over map tasks.
struct IntermediateKey {
  KeyId key = 0;
  std::vector<std::uint64_t> bytes_per_map_task;

  std::uint64_t total_bytes() const {
    std::uint64_t s = 0;
    for (auto b : bytes_per_map_task) s += b;
    return s;
  }
};

enum class Partitioner { hash, random, unbalanced, optimal };

struct JobSpec {
  std::vector<MapSplit> map_splits;
  CostModel map_cost;
  CostModel reduce_cost;
  std::vector<IntermediateKey> intermediate_keys;
  int reducer_count = 1;
  Partitioner partitioner = Partitioner::hash;
  double shuffle_rate = 0.0;  // bytes per ms; 0 means instantaneous shuffle

  std::uint64_t total_shuffle_bytes() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct ClusterSpec {
  int worker_count = 1;
  int slots_per_worker = 1;

  int parallelism() const { return worker_count * slots_per_worker; }
  void validate() const;
};

/// Tuning knobs of the NearestFit indicator. Defaults match the reference
/// deployment values; the delta floor is deliberately configurable since
/// useful values track the workload's size scale.
struct NearestFitConfig {
  std::size_t explicit_key_budget = 2000;  // lambda: explicit keys per map task
  std::size_t master_sketch_capacity = 0;  // 0 -> 35 * explicit_key_budget
  double delta_floor_bytes = 64.0;
  double delta_fraction = 0.05;
  double r2_threshold = 0.9;
  DurationMs smoothing_window_ms = 500;
  std::uint64_t burst_size_threshold_bytes = 50;
  std::size_t burst_skip_threshold = 100;
  DurationMs update_interval_ms = 60000;
  double explicit_match_tolerance = 0.05;  // relative, for size matching
  std::size_t histogram_capacity = 1024;

  std::size_t resolved_sketch_capacity() const {
    return master_sketch_capacity != 0 ? master_sketch_capacity
                                       : 35 * explicit_key_budget;
  }
  void validate() const;
};

/// Knobs of the Hadoop/JobRatio/TaskRatio reference indicators.
struct BaselineConfig {
  bool ewma_enabled = false;
  double ewma_alpha = 0.3;               // in (0,1]
  double taskratio_warmup_fraction = 0.05;

  void validate() const;
};

}  // namespace mrsim
