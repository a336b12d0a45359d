#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mrsim/indicators.hpp"
#include "mrsim/simulator.hpp"

namespace mrsim {

struct ProgressSample {
  SimTime t = 0;
  double progress = 0.0;
};

struct IndicatorRun {
  std::string indicator;
  std::vector<ProgressSample> series;
  std::uint64_t map_profile_bytes = 0;
  std::uint64_t reduce_profile_bytes = 0;
};

/// Context the monitor holds once shuffling completes; derived from the
/// trace's static facts.
ReducePhaseContext make_reduce_context(const ExecutionTrace& trace);

/// (t - t_start) / (e - t_start) * 100 against the true phase end.
double optimal_progress(const ExecutionTrace& trace, SimTime t);

/// Streams the trace's reduce-phase events (task starts, per-function
/// completions, task finishes) to every indicator in timestamp order and
/// samples progress_at on the update grid: t_start + k*update_interval for
/// k >= 1, plus the phase end itself. Indicators only ever see events with
/// timestamps <= the query time.
std::vector<IndicatorRun> replay_with_indicators(
    const ExecutionTrace& trace,
    std::span<const std::unique_ptr<ProgressIndicator>> indicators,
    DurationMs update_interval_ms);

}  // namespace mrsim
