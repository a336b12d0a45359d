#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mrsim/config.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

enum class TaskKind { map, reduce };

/// One function invocation inside a reduce task.
struct ReduceFunctionRecord {
  KeyId key = 0;
  std::uint64_t size_bytes = 0;
  SimTime start = 0;
  SimTime end = 0;
};

struct TaskTimeline {
  int task_id = 0;
  TaskKind kind = TaskKind::map;
  int worker = 0;
  SimTime start = 0;
  SimTime end = 0;
  std::uint64_t input_bytes = 0;
  std::uint64_t pairs = 0;  // map tasks only
  std::vector<ReduceFunctionRecord> functions;  // reduce tasks only
};

struct PhaseBounds {
  SimTime map_start = 0;
  SimTime map_end = 0;
  SimTime reduce_start = 0;  // == shuffle end
  SimTime job_end = 0;
};

/// What one map task emitted for one key; the raw material map profiles are
/// built from.
struct MapEmission {
  KeyId key = 0;
  std::uint64_t size_bytes = 0;
  int reduce_task = 0;
};

struct ExecutionTrace {
  JobSpec job;
  ClusterSpec cluster;
  std::uint64_t seed = 0;
  std::vector<TaskTimeline> map_tasks;
  std::vector<TaskTimeline> reduce_tasks;
  PhaseBounds phases;
  /// map_emissions[j] lists, for map task j, every key it emitted with the
  /// per-task byte share and the reduce task the key is routed to.
  std::vector<std::vector<MapEmission>> map_emissions;
  /// key_task[i] is the reduce task of job.intermediate_keys[i].
  std::vector<int> key_task;
  std::uint64_t total_shuffle_bytes = 0;

  DurationMs reduce_phase_ms() const {
    return phases.job_end - phases.reduce_start;
  }
};

/// Assigns every key to exactly one reduce task. hash uses KeyId mod R;
/// random draws uniformly from the seed; unbalanced pins the
/// ceil(N^(2/3)) costliest keys (by noise-free reduce cost at the key's
/// size) to task 0 and spreads the rest fairly; optimal is greedy LPT by
/// the same costs. Returns the task index per key.
std::vector<int> partition_keys(std::span<const KeyGroup> keys,
                                int reducer_count, Partitioner strategy,
                                std::uint64_t seed,
                                const CostModel& reduce_cost);

/// Deterministic discrete-event simulation of the whole job: map tasks
/// greedily scheduled onto worker slots, one aggregate shuffle delay of
/// total_shuffle_bytes / shuffle_rate, then reduce tasks greedily scheduled
/// once shuffling completes. Reduce functions inside a task run in
/// ascending KeyId order, each charged eval_cost(reduce_cost, size).
/// Identical (spec, cluster, seed) produce bit-identical traces.
ExecutionTrace run_job(const JobSpec& spec, const ClusterSpec& cluster,
                       std::uint64_t seed);

}  // namespace mrsim
