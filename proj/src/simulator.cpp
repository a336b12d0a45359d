#include "mrsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>

#include "mrsim/hashing.hpp"
#include "mrsim/workload.hpp"

namespace mrsim {

std::vector<int> partition_keys(std::span<const KeyGroup> keys,
                                int reducer_count, Partitioner strategy,
                                std::uint64_t seed,
                                const CostModel& reduce_cost) {
  if (reducer_count < 1) {
    throw std::invalid_argument("partition_keys: reducer_count must be >= 1");
  }
  std::vector<int> assignment(keys.size(), 0);
  switch (strategy) {
    case Partitioner::hash:
      for (std::size_t i = 0; i < keys.size(); ++i) {
        assignment[i] = static_cast<int>(
            keys[i].key % static_cast<std::uint64_t>(reducer_count));
      }
      break;
    case Partitioner::random: {
      std::mt19937_64 rng(seed);
      for (auto& a : assignment) {
        a = static_cast<int>(rng() %
                             static_cast<std::uint64_t>(reducer_count));
      }
      break;
    }
    case Partitioner::unbalanced:
    case Partitioner::optimal: {
      std::vector<double> costs(keys.size());
      for (std::size_t i = 0; i < keys.size(); ++i) {
        costs[i] = raw_cost(reduce_cost, keys[i].size_bytes);
      }
      if (strategy == Partitioner::optimal) {
        assignment = assign_lpt(costs, reducer_count);
      } else {
        const auto pinned = static_cast<std::size_t>(std::ceil(
            std::pow(static_cast<double>(keys.size()), 2.0 / 3.0)));
        assignment = assign_unbalanced(costs, reducer_count, pinned);
      }
      break;
    }
  }
  return assignment;
}

namespace {

// Per-invocation noise seed: pinned mix of the job seed, a role tag, and
// the invocation identity.
std::uint64_t fn_seed(std::uint64_t job_seed, std::uint64_t tag,
                      std::uint64_t a, std::uint64_t b) {
  return mix64(job_seed ^ mix64(tag ^ mix64(a) ^ (b * 0x9e3779b97f4a7c15ULL)));
}

struct ScheduledTask {
  SimTime start = 0;
  int slot = 0;
};

// Greedy FIFO slot scheduler: tasks become ready at `ready`, run for
// durations[i], occupy the lowest-numbered free slot. Returns start/slot
// per task.
std::vector<ScheduledTask> schedule(std::span<const DurationMs> durations,
                                    int parallelism, SimTime ready) {
  std::vector<ScheduledTask> out(durations.size());
  // Free slots ordered by (free_time, slot id).
  using FreeSlot = std::pair<SimTime, int>;
  std::priority_queue<FreeSlot, std::vector<FreeSlot>, std::greater<>> slots;
  for (int s = 0; s < parallelism; ++s) slots.push({ready, s});
  for (std::size_t i = 0; i < durations.size(); ++i) {
    auto [free_at, slot] = slots.top();
    slots.pop();
    out[i] = {free_at, slot};
    slots.push({free_at + durations[i], slot});
  }
  return out;
}

}  // namespace

ExecutionTrace run_job(const JobSpec& spec, const ClusterSpec& cluster,
                       std::uint64_t seed) {
  spec.validate();
  cluster.validate();
  const int parallelism = cluster.parallelism();
  if (parallelism < 1) {
    throw std::invalid_argument("run_job: cluster parallelism must be >= 1");
  }

  ExecutionTrace trace;
  trace.job = spec;
  trace.cluster = cluster;
  trace.seed = seed;

  const std::size_t map_count = spec.map_splits.size();

  // ---- map phase ---------------------------------------------------------
  std::vector<DurationMs> map_durations(map_count, 0);
  for (std::size_t j = 0; j < map_count; ++j) {
    const auto& split = spec.map_splits[j];
    if (spec.map_cost.noise == 0.0) {
      map_durations[j] = static_cast<DurationMs>(split.pairs) *
                         eval_cost(spec.map_cost, split.bytes_per_pair, 0);
    } else {
      DurationMs d = 0;
      for (std::uint64_t p = 0; p < split.pairs; ++p) {
        d += eval_cost(spec.map_cost, split.bytes_per_pair,
                       fn_seed(seed, 0x6d61u, j, p));
      }
      map_durations[j] = d;
    }
  }
  const auto map_sched = schedule(map_durations, parallelism, 0);
  SimTime map_end = 0;
  for (std::size_t j = 0; j < map_count; ++j) {
    TaskTimeline t;
    t.task_id = static_cast<int>(j);
    t.kind = TaskKind::map;
    t.worker = map_sched[j].slot / cluster.slots_per_worker;
    t.start = map_sched[j].start;
    t.end = t.start + map_durations[j];
    t.input_bytes = spec.map_splits[j].bytes();
    t.pairs = spec.map_splits[j].pairs;
    map_end = std::max(map_end, t.end);
    trace.map_tasks.push_back(std::move(t));
  }
  trace.phases.map_start = 0;
  trace.phases.map_end = map_end;

  // ---- partitioning and the per-map-task key shares ----------------------
  std::vector<KeyGroup> groups;
  groups.reserve(spec.intermediate_keys.size());
  for (const auto& k : spec.intermediate_keys) {
    groups.push_back({k.key, k.total_bytes()});
  }
  trace.key_task = partition_keys(groups, spec.reducer_count, spec.partitioner,
                                  mix64(seed ^ 0x706172u), spec.reduce_cost);

  trace.map_emissions.assign(map_count, {});
  std::uint64_t shuffle_bytes = 0;
  for (std::size_t i = 0; i < spec.intermediate_keys.size(); ++i) {
    const auto& k = spec.intermediate_keys[i];
    for (std::size_t j = 0; j < map_count; ++j) {
      const std::uint64_t share = k.bytes_per_map_task[j];
      if (share == 0) continue;
      trace.map_emissions[j].push_back(
          {k.key, share, trace.key_task[i]});
      shuffle_bytes += share;
    }
  }
  trace.total_shuffle_bytes = shuffle_bytes;

  // ---- shuffle: one aggregate delay --------------------------------------
  DurationMs shuffle_ms = 0;
  if (spec.shuffle_rate > 0.0 && shuffle_bytes > 0) {
    shuffle_ms = static_cast<DurationMs>(std::ceil(
        static_cast<double>(shuffle_bytes) / spec.shuffle_rate));
  }
  const SimTime reduce_ready = map_end + shuffle_ms;
  trace.phases.reduce_start = reduce_ready;

  // ---- reduce phase -------------------------------------------------------
  // Keys per task, processed in ascending KeyId order (sorted shuffle).
  std::vector<std::vector<KeyGroup>> per_task(
      static_cast<std::size_t>(spec.reducer_count));
  for (std::size_t i = 0; i < groups.size(); ++i) {
    per_task[static_cast<std::size_t>(trace.key_task[i])].push_back(groups[i]);
  }
  for (auto& keys : per_task) {
    std::sort(keys.begin(), keys.end(),
              [](const KeyGroup& a, const KeyGroup& b) {
                return a.key < b.key;
              });
  }

  std::vector<DurationMs> reduce_durations(per_task.size(), 0);
  std::vector<std::vector<DurationMs>> fn_durations(per_task.size());
  for (std::size_t i = 0; i < per_task.size(); ++i) {
    fn_durations[i].reserve(per_task[i].size());
    for (const auto& g : per_task[i]) {
      const DurationMs d =
          eval_cost(spec.reduce_cost, g.size_bytes,
                    fn_seed(seed, 0x726564u, i, g.key));
      fn_durations[i].push_back(d);
      reduce_durations[i] += d;
    }
  }

  const auto reduce_sched = schedule(reduce_durations, parallelism,
                                     reduce_ready);
  SimTime job_end = reduce_ready;
  for (std::size_t i = 0; i < per_task.size(); ++i) {
    TaskTimeline t;
    t.task_id = static_cast<int>(i);
    t.kind = TaskKind::reduce;
    t.worker = reduce_sched[i].slot / cluster.slots_per_worker;
    t.start = reduce_sched[i].start;
    SimTime cursor = t.start;
    for (std::size_t f = 0; f < per_task[i].size(); ++f) {
      ReduceFunctionRecord rec;
      rec.key = per_task[i][f].key;
      rec.size_bytes = per_task[i][f].size_bytes;
      rec.start = cursor;
      cursor += fn_durations[i][f];
      rec.end = cursor;
      t.functions.push_back(rec);
      t.input_bytes += rec.size_bytes;
    }
    t.end = cursor;
    job_end = std::max(job_end, t.end);
    trace.reduce_tasks.push_back(std::move(t));
  }
  trace.phases.job_end = job_end;
  return trace;
}

}  // namespace mrsim
