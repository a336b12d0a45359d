#include "mrsim/replay.hpp"

#include <algorithm>
#include <stdexcept>

namespace mrsim {

ReducePhaseContext make_reduce_context(const ExecutionTrace& trace) {
  ReducePhaseContext ctx;
  ctx.reduce_start = trace.phases.reduce_start;
  ctx.parallelism = trace.cluster.parallelism();
  ctx.shuffle_rate = trace.job.shuffle_rate;
  ctx.tasks.reserve(trace.reduce_tasks.size());
  for (const auto& t : trace.reduce_tasks) {
    ctx.tasks.push_back({t.task_id, t.input_bytes,
                         static_cast<std::uint64_t>(t.functions.size())});
  }
  return ctx;
}

double optimal_progress(const ExecutionTrace& trace, SimTime t) {
  const SimTime start = trace.phases.reduce_start;
  const SimTime end = trace.phases.job_end;
  if (t < start) {
    throw std::invalid_argument("optimal_progress: t precedes the phase");
  }
  if (end <= start) return 100.0;
  return static_cast<double>(t - start) / static_cast<double>(end - start) *
         100.0;
}

namespace {

enum class EventKind : int { task_start = 0, function_end = 1, task_finish = 2 };

struct Event {
  SimTime t;
  EventKind kind;
  int task;
  std::size_t fn_index;
};

}  // namespace

std::vector<IndicatorRun> replay_with_indicators(
    const ExecutionTrace& trace,
    std::span<const std::unique_ptr<ProgressIndicator>> indicators,
    DurationMs update_interval_ms) {
  if (update_interval_ms <= 0) {
    throw std::invalid_argument("replay: update interval must be positive");
  }

  std::vector<Event> events;
  for (const auto& task : trace.reduce_tasks) {
    events.push_back({task.start, EventKind::task_start, task.task_id, 0});
    for (std::size_t f = 0; f < task.functions.size(); ++f) {
      events.push_back(
          {task.functions[f].end, EventKind::function_end, task.task_id, f});
    }
    events.push_back({task.end, EventKind::task_finish, task.task_id, 0});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    if (a.task != b.task) return a.task < b.task;
    return a.fn_index < b.fn_index;
  });

  const auto ctx = make_reduce_context(trace);
  for (const auto& ind : indicators) ind->begin_phase(ctx);

  std::vector<IndicatorRun> runs(indicators.size());
  for (std::size_t i = 0; i < indicators.size(); ++i) {
    runs[i].indicator = std::string(indicators[i]->name());
  }

  // Query grid: every interval inside the phase, plus the phase end.
  std::vector<SimTime> grid;
  const SimTime start = trace.phases.reduce_start;
  const SimTime end = trace.phases.job_end;
  for (SimTime t = start + update_interval_ms; t < end;
       t += update_interval_ms) {
    grid.push_back(t);
  }
  grid.push_back(end);

  std::size_t cursor = 0;
  auto deliver_until = [&](SimTime t) {
    while (cursor < events.size() && events[cursor].t <= t) {
      const Event& ev = events[cursor];
      for (const auto& ind : indicators) {
        switch (ev.kind) {
          case EventKind::task_start:
            ind->on_task_start(ev.task, ev.t);
            break;
          case EventKind::task_finish:
            ind->on_task_finish(ev.task, ev.t);
            break;
          case EventKind::function_end: {
            const auto& fn = trace.reduce_tasks[static_cast<std::size_t>(
                ev.task)].functions[ev.fn_index];
            ReduceProfileEvent rpe;
            rpe.task = ev.task;
            rpe.size_bytes = fn.size_bytes;
            rpe.elapsed_ms = fn.end - fn.start;
            rpe.timestamp = fn.end;
            ind->on_reduce_function(rpe);
            break;
          }
        }
      }
      ++cursor;
    }
  };

  for (SimTime t : grid) {
    deliver_until(t);
    for (std::size_t i = 0; i < indicators.size(); ++i) {
      runs[i].series.push_back({t, indicators[i]->progress_at(t)});
    }
  }
  for (std::size_t i = 0; i < indicators.size(); ++i) {
    runs[i].map_profile_bytes = indicators[i]->map_profile_bytes();
    runs[i].reduce_profile_bytes = indicators[i]->reduce_profile_bytes();
  }
  return runs;
}

}  // namespace mrsim
