#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "mrsim/config.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

/// Static per-task facts the progress monitor legitimately knows as soon
/// as shuffling completes.
struct ReduceTaskStatic {
  int task_id = 0;
  std::uint64_t assigned_bytes = 0;
  std::uint64_t assigned_groups = 0;
};

struct ReducePhaseContext {
  SimTime reduce_start = 0;
  int parallelism = 1;
  double shuffle_rate = 0.0;  // bytes per ms; 0 = modeled as instantaneous
  std::vector<ReduceTaskStatic> tasks;
};

/// Completion of one reduce-function invocation, as observed by the
/// monitor. Deliberately key-free: size and elapsed time only.
struct ReduceProfileEvent {
  int task = 0;
  std::uint64_t size_bytes = 0;
  DurationMs elapsed_ms = 0;
  SimTime timestamp = 0;  // non-decreasing per task
};

/// A reduce-phase progress estimator. Single writer (the replay loop);
/// progress_at must not change observable state (memoization inside is
/// fine). Values are percentages and may exceed 100 when the phase end is
/// underestimated.
class ProgressIndicator {
 public:
  virtual ~ProgressIndicator() = default;
  virtual std::string_view name() const = 0;
  virtual void begin_phase(const ReducePhaseContext& ctx) = 0;
  virtual void on_task_start(int task, SimTime t) = 0;
  virtual void on_task_finish(int task, SimTime t) = 0;
  virtual void on_reduce_function(const ReduceProfileEvent& ev) = 0;
  /// Throws std::invalid_argument when queried before the phase start.
  virtual double progress_at(SimTime t) const = 0;
  virtual std::uint64_t map_profile_bytes() const { return 0; }
  virtual std::uint64_t reduce_profile_bytes() const { return 0; }
};

/// Greedy mirror of the slot scheduler: given the times at which each slot
/// is expected to free up and the predicted durations of the still
/// unscheduled tasks (in queue order), returns each pending task's
/// predicted start time.
std::vector<double> predict_starts(std::vector<double> slot_free_times,
                                   const std::vector<double>& pending_durations);

/// Reference indicator: knows the true phase end, so its progress equals
/// the optimal progress at every query time.
class OptimalIndicator final : public ProgressIndicator {
 public:
  explicit OptimalIndicator(SimTime job_end);
  std::string_view name() const override { return "optimal"; }
  void begin_phase(const ReducePhaseContext& ctx) override;
  void on_task_start(int, SimTime) override {}
  void on_task_finish(int, SimTime) override {}
  void on_reduce_function(const ReduceProfileEvent&) override {}
  double progress_at(SimTime t) const override;

 private:
  SimTime job_end_;
  SimTime start_ = 0;
};

/// Per-task shuffle-consumption averaging: each task contributes the
/// fraction of its assigned bytes already consumed by finished reduce
/// functions (1 once the task finished); the phase progress is the plain
/// mean of the fractions.
class HadoopIndicator final : public ProgressIndicator {
 public:
  std::string_view name() const override { return "hadoop"; }
  void begin_phase(const ReducePhaseContext& ctx) override;
  void on_task_start(int task, SimTime t) override;
  void on_task_finish(int task, SimTime t) override;
  void on_reduce_function(const ReduceProfileEvent& ev) override;
  double progress_at(SimTime t) const override;

 private:
  struct Task {
    std::uint64_t assigned = 0;
    std::uint64_t consumed = 0;
    bool finished = false;
  };
  SimTime start_ = 0;
  std::vector<Task> tasks_;
};

/// Linear-model baselines built on a bytes-per-millisecond execution speed:
/// the job variant uses one speed pooled across tasks, the task variant a
/// per-task speed once the task has processed enough of its input.
enum class RatioScope { job, task };

class RatioIndicator final : public ProgressIndicator {
 public:
  RatioIndicator(RatioScope scope, BaselineConfig cfg = {});
  std::string_view name() const override {
    return scope_ == RatioScope::job ? "jobratio" : "taskratio";
  }
  void begin_phase(const ReducePhaseContext& ctx) override;
  void on_task_start(int task, SimTime t) override;
  void on_task_finish(int task, SimTime t) override;
  void on_reduce_function(const ReduceProfileEvent& ev) override;
  double progress_at(SimTime t) const override;

 private:
  double global_speed() const;  // ms per byte
  double task_speed(std::size_t i) const;

  struct Task {
    std::uint64_t assigned = 0;
    std::uint64_t processed_bytes = 0;
    DurationMs processed_time = 0;
    double ewma_speed = 0.0;
    bool ewma_primed = false;
    SimTime last_update = 0;  // profile time p_i
    bool started = false;
    bool finished = false;
    SimTime finish_time = 0;
  };

  RatioScope scope_;
  BaselineConfig cfg_;
  ReducePhaseContext ctx_;
  std::vector<Task> tasks_;
  std::uint64_t total_bytes_ = 0;
  DurationMs total_time_ = 0;
  double ewma_global_ = 0.0;
  bool ewma_global_primed_ = false;
};

}  // namespace mrsim
