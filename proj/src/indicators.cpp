#include "mrsim/indicators.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace mrsim {

std::vector<double> predict_starts(
    std::vector<double> slot_free_times,
    const std::vector<double>& pending_durations) {
  std::priority_queue<double, std::vector<double>, std::greater<>> heap(
      std::greater<>{}, std::move(slot_free_times));
  std::vector<double> starts;
  starts.reserve(pending_durations.size());
  for (double d : pending_durations) {
    if (heap.empty()) {
      throw std::invalid_argument("predict_starts: no slots available");
    }
    const double s = heap.top();
    heap.pop();
    starts.push_back(s);
    heap.push(s + d);
  }
  return starts;
}

namespace {

void check_query_time(SimTime t, SimTime start) {
  if (t < start) {
    throw std::invalid_argument(
        "progress_at: query precedes the reduce phase start");
  }
}

double progress_from_end(SimTime t, SimTime start, double estimated_end) {
  // Guard the degenerate estimate; an end at (or before) the phase start
  // renders the ratio undefined.
  if (estimated_end <= static_cast<double>(start)) {
    estimated_end = static_cast<double>(start) + 1.0;
  }
  return (static_cast<double>(t - start) /
          (estimated_end - static_cast<double>(start))) *
         100.0;
}

}  // namespace

// ---- OptimalIndicator ------------------------------------------------------

OptimalIndicator::OptimalIndicator(SimTime job_end) : job_end_(job_end) {}

void OptimalIndicator::begin_phase(const ReducePhaseContext& ctx) {
  start_ = ctx.reduce_start;
}

double OptimalIndicator::progress_at(SimTime t) const {
  check_query_time(t, start_);
  return progress_from_end(t, start_, static_cast<double>(job_end_));
}

// ---- HadoopIndicator -------------------------------------------------------

void HadoopIndicator::begin_phase(const ReducePhaseContext& ctx) {
  start_ = ctx.reduce_start;
  tasks_.clear();
  tasks_.reserve(ctx.tasks.size());
  for (const auto& t : ctx.tasks) tasks_.push_back({t.assigned_bytes, 0, false});
}

void HadoopIndicator::on_task_start(int, SimTime) {}

void HadoopIndicator::on_task_finish(int task, SimTime) {
  tasks_[static_cast<std::size_t>(task)].finished = true;
}

void HadoopIndicator::on_reduce_function(const ReduceProfileEvent& ev) {
  tasks_[static_cast<std::size_t>(ev.task)].consumed += ev.size_bytes;
}

double HadoopIndicator::progress_at(SimTime t) const {
  check_query_time(t, start_);
  if (tasks_.empty()) return 100.0;
  double sum = 0.0;
  for (const auto& task : tasks_) {
    if (task.finished) {
      sum += 1.0;
    } else if (task.assigned > 0) {
      sum += static_cast<double>(task.consumed) /
             static_cast<double>(task.assigned);
    }
  }
  return sum / static_cast<double>(tasks_.size()) * 100.0;
}

// ---- RatioIndicator --------------------------------------------------------

RatioIndicator::RatioIndicator(RatioScope scope, BaselineConfig cfg)
    : scope_(scope), cfg_(cfg) {
  cfg_.validate();
}

void RatioIndicator::begin_phase(const ReducePhaseContext& ctx) {
  ctx_ = ctx;
  tasks_.assign(ctx.tasks.size(), {});
  for (std::size_t i = 0; i < ctx.tasks.size(); ++i) {
    tasks_[i].assigned = ctx.tasks[i].assigned_bytes;
    tasks_[i].last_update = ctx.reduce_start;
  }
  total_bytes_ = 0;
  total_time_ = 0;
  ewma_global_primed_ = false;
}

void RatioIndicator::on_task_start(int task, SimTime t) {
  auto& st = tasks_[static_cast<std::size_t>(task)];
  st.started = true;
  st.last_update = t;
}

void RatioIndicator::on_task_finish(int task, SimTime t) {
  auto& st = tasks_[static_cast<std::size_t>(task)];
  st.finished = true;
  st.finish_time = t;
  st.last_update = t;
}

void RatioIndicator::on_reduce_function(const ReduceProfileEvent& ev) {
  auto& st = tasks_[static_cast<std::size_t>(ev.task)];
  st.processed_bytes += ev.size_bytes;
  st.processed_time += ev.elapsed_ms;
  st.last_update = ev.timestamp;
  total_bytes_ += ev.size_bytes;
  total_time_ += ev.elapsed_ms;

  // EWMA smoothing of the instantaneous speeds, updated per profile event.
  if (cfg_.ewma_enabled) {
    if (total_bytes_ > 0) {
      const double inst = static_cast<double>(total_time_) /
                          static_cast<double>(total_bytes_);
      ewma_global_ = ewma_global_primed_
                         ? cfg_.ewma_alpha * inst +
                               (1.0 - cfg_.ewma_alpha) * ewma_global_
                         : inst;
      ewma_global_primed_ = true;
    }
    if (st.processed_bytes > 0) {
      const double inst = static_cast<double>(st.processed_time) /
                          static_cast<double>(st.processed_bytes);
      st.ewma_speed = st.ewma_primed
                          ? cfg_.ewma_alpha * inst +
                                (1.0 - cfg_.ewma_alpha) * st.ewma_speed
                          : inst;
      st.ewma_primed = true;
    }
  }
}

double RatioIndicator::global_speed() const {
  if (cfg_.ewma_enabled && ewma_global_primed_) return ewma_global_;
  return static_cast<double>(total_time_) / static_cast<double>(total_bytes_);
}

double RatioIndicator::task_speed(std::size_t i) const {
  const auto& st = tasks_[i];
  if (scope_ == RatioScope::task && st.processed_bytes > 0 &&
      static_cast<double>(st.processed_bytes) >
          cfg_.taskratio_warmup_fraction * static_cast<double>(st.assigned)) {
    if (cfg_.ewma_enabled && st.ewma_primed) return st.ewma_speed;
    return static_cast<double>(st.processed_time) /
           static_cast<double>(st.processed_bytes);
  }
  return global_speed();
}

double RatioIndicator::progress_at(SimTime t) const {
  check_query_time(t, ctx_.reduce_start);
  if (total_bytes_ == 0) return 0.0;

  double max_end = static_cast<double>(ctx_.reduce_start);
  std::vector<double> slot_free;
  std::vector<std::size_t> pending;
  int running = 0;
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    const auto& st = tasks_[i];
    if (st.finished) {
      max_end = std::max(max_end, static_cast<double>(st.finish_time));
    } else if (st.started) {
      const auto remaining_bytes =
          st.assigned > st.processed_bytes ? st.assigned - st.processed_bytes
                                           : 0;
      const double end = static_cast<double>(st.last_update) +
                         task_speed(i) * static_cast<double>(remaining_bytes);
      max_end = std::max(max_end, end);
      slot_free.push_back(std::max(end, static_cast<double>(t)));
      ++running;
    } else {
      pending.push_back(i);
    }
  }
  if (!pending.empty()) {
    for (int s = running; s < ctx_.parallelism; ++s) {
      slot_free.push_back(static_cast<double>(t));
    }
    std::vector<double> durations;
    durations.reserve(pending.size());
    for (std::size_t i : pending) {
      durations.push_back(task_speed(i) *
                          static_cast<double>(tasks_[i].assigned));
    }
    const auto starts = predict_starts(slot_free, durations);
    for (std::size_t p = 0; p < pending.size(); ++p) {
      max_end = std::max(max_end, starts[p] + durations[p]);
    }
  }
  return progress_from_end(t, ctx_.reduce_start, max_end);
}

}  // namespace mrsim
