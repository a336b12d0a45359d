#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mrsim/burst_filter.hpp"
#include "mrsim/config.hpp"
#include "mrsim/indicators.hpp"
#include "mrsim/regression.hpp"
#include "mrsim/simulator.hpp"
#include "mrsim/size_histogram.hpp"
#include "mrsim/smoothing.hpp"
#include "mrsim/space_saving.hpp"

namespace mrsim {

/// What one map task ships to the monitor: individual (key, bytes) pairs
/// for its `lambda` largest key groups, plus one (count, bytes) aggregate
/// per reduce task covering everything else.
struct MapTaskProfile {
  int map_task = 0;
  std::vector<std::pair<KeyId, std::uint64_t>> explicit_entries;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> implicit_per_reduce;

  /// Wire size: 16 bytes per explicit pair, 16 per implicit aggregate.
  std::uint64_t profile_bytes() const {
    return 16 * (explicit_entries.size() + implicit_per_reduce.size());
  }
};

MapTaskProfile build_map_task_profile(int map_task,
                                      std::span<const MapEmission> emissions,
                                      std::size_t lambda, int reducer_count);

/// Monitor-side view of the key distribution, key-free: per reduce task a
/// bag of approximate explicit sizes plus the total implicit byte count.
/// Explicit + implicit bytes always equal the bytes shuffled to the task.
struct KeyDistributionProfile {
  std::vector<std::vector<std::uint64_t>> explicit_sizes;
  std::vector<std::uint64_t> implicit_bytes;
  std::uint64_t map_profile_bytes = 0;
};

/// Merges map task profiles under a bounded-memory heavy-keys policy: each
/// reduce task gets a Space Saving slice of capacity
/// max(1, sketch_capacity / reducer_count); explicit keys squeezed out by
/// the bound keep their byte mass inside the surviving estimates, so the
/// per-task byte totals stay exact.
KeyDistributionProfile merge_map_profiles(
    std::span<const MapTaskProfile> profiles, int reducer_count,
    const std::function<int(KeyId)>& task_of_key, std::size_t sketch_capacity);

/// Exact key distribution (per-key sizes known perfectly): the
/// full-information profile a monitor would hold if map profiles carried
/// every key. Map profile accounting charges every emitted pair.
KeyDistributionProfile exact_key_distribution(const ExecutionTrace& trace);

/// Approximate (key-free) distribution built from per-map-task profiles
/// under the given budget.
KeyDistributionProfile approximate_key_distribution(
    const ExecutionTrace& trace, const NearestFitConfig& cfg);

enum class NearestFitMode { oracle, approximate };

/// Which route produced a prediction; routes 1..4 are the ordered
/// combination steps, the fallbacks fire when no step applies.
enum class PredictionRoute {
  local_neighborhood = 1,
  local_fit = 2,
  global_neighborhood = 3,
  global_fit = 4,
  fallback_rate = 5,     // global observed bytes-per-ms linear rate
  fallback_shuffle = 6,  // shuffle-rate scaling (no observations at all)
};

struct RoutedPrediction {
  double time_ms = 0.0;
  PredictionRoute route = PredictionRoute::fallback_rate;
};

/// Profile-guided progress estimator combining delta-nearest-neighbor
/// regression with power-law curve fitting. State is strictly key-free:
/// per task a multiset of unprocessed explicit sizes, the unprocessed
/// implicit byte total, and the observed (size, time) points; plus one
/// shared histogram of frequent sizes for partitioning implicit bytes.
///
/// oracle mode consumes exact sizes and exact per-function measurements;
/// approximate mode consumes Space-Saving-merged sizes and runs every
/// observation through smoothing and the burst filter.
class NearestFitIndicator final : public ProgressIndicator {
 public:
  NearestFitIndicator(NearestFitMode mode, NearestFitConfig cfg,
                      KeyDistributionProfile profile);

  std::string_view name() const override {
    return mode_ == NearestFitMode::oracle ? "nearestfit-oracle" : "nearestfit";
  }
  void begin_phase(const ReducePhaseContext& ctx) override;
  void on_task_start(int task, SimTime t) override;
  void on_task_finish(int task, SimTime t) override;
  void on_reduce_function(const ReduceProfileEvent& ev) override;
  double progress_at(SimTime t) const override;
  std::uint64_t map_profile_bytes() const override {
    return profile_.map_profile_bytes;
  }
  std::uint64_t reduce_profile_bytes() const override {
    return reduce_profile_bytes_;
  }

  /// Diagnostic: predicted running time for one input size at task `task`,
  /// reporting which route produced it.
  RoutedPrediction routed_predict(int task, std::uint64_t size_bytes) const;

  /// Conservation bookkeeping, exposed for verification.
  struct TaskAccounting {
    std::uint64_t pending_explicit_bytes = 0;
    std::uint64_t pending_implicit_bytes = 0;
    std::uint64_t consumed_explicit_bytes = 0;
    std::uint64_t consumed_implicit_bytes = 0;
  };
  TaskAccounting accounting(int task) const;

 private:
  struct TaskState {
    std::multiset<std::uint64_t> pending_explicit;  // unprocessed sizes
    std::uint64_t pending_implicit = 0;             // unprocessed bytes
    std::uint64_t consumed_explicit = 0;
    std::uint64_t consumed_implicit = 0;
    SimTime profile_time = 0;  // last profile update
    bool started = false;
    bool finished = false;
    SimTime finish_time = 0;
    SmoothedPointSet points;
    BurstFilter burst;
    // Memoized query-side views; rebuilt lazily when observations arrive.
    mutable PointSet view;
    mutable std::optional<FitModel> fit;
    mutable bool dirty = true;

    TaskState(DurationMs window, std::uint64_t burst_bytes,
              std::size_t burst_skip)
        : points(window), burst(burst_bytes, burst_skip) {}
  };

  void apply_points(TaskState& st, std::span<const ProfilePoint> pts,
                    SimTime timestamp);
  void refresh(const TaskState& st) const;
  double fallback_rate(double bytes) const;
  RoutedPrediction predict(const TaskState& st, double size_bytes) const;
  double remaining_ms(const TaskState& st) const;

  NearestFitMode mode_;
  NearestFitConfig cfg_;
  KeyDistributionProfile profile_;
  ReducePhaseContext ctx_;
  DeltaPolicy delta_;
  std::vector<TaskState> tasks_;
  SizeHistogram histogram_;
  std::uint64_t observed_bytes_ = 0;
  DurationMs observed_time_ = 0;
  std::uint64_t reduce_profile_bytes_ = 0;
};

}  // namespace mrsim
