#include "mrsim/phase_progress.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "mrsim/indicators.hpp"

namespace mrsim {

double map_phase_progress(std::span<const MapTaskView> tasks, int parallelism,
                          SimTime map_start, SimTime t) {
  if (t < map_start) {
    throw std::invalid_argument("map_phase_progress: t precedes the phase");
  }
  // Mean observed processing rate (bytes per ms) across tasks that have
  // run; per-task rates drive running-task extrapolation.
  double observed_bytes = 0.0;
  double observed_ms = 0.0;
  for (const auto& task : tasks) {
    if (!task.start) continue;
    const SimTime until = task.end ? *task.end : t;
    if (until > *task.start) {
      observed_bytes += static_cast<double>(task.processed_bytes);
      observed_ms += static_cast<double>(until - *task.start);
    }
  }
  if (observed_bytes <= 0.0 || observed_ms <= 0.0) return 0.0;
  const double mean_rate = observed_bytes / observed_ms;

  double max_end = static_cast<double>(map_start);
  std::vector<double> slot_free;
  std::vector<double> queued_durations;
  int running = 0;
  for (const auto& task : tasks) {
    if (task.end) {
      max_end = std::max(max_end, static_cast<double>(*task.end));
    } else if (task.start) {
      const double elapsed = static_cast<double>(t - *task.start);
      const double rate =
          task.processed_bytes > 0 && elapsed > 0.0
              ? static_cast<double>(task.processed_bytes) / elapsed
              : mean_rate;
      const double remaining =
          static_cast<double>(task.total_bytes - task.processed_bytes) / rate;
      const double end = static_cast<double>(t) + remaining;
      max_end = std::max(max_end, end);
      slot_free.push_back(end);
      ++running;
    } else {
      queued_durations.push_back(static_cast<double>(task.total_bytes) /
                                 mean_rate);
    }
  }
  if (!queued_durations.empty()) {
    for (int s = running; s < parallelism; ++s) {
      slot_free.push_back(static_cast<double>(t));
    }
    const auto starts = predict_starts(slot_free, queued_durations);
    for (std::size_t i = 0; i < starts.size(); ++i) {
      max_end = std::max(max_end, starts[i] + queued_durations[i]);
    }
  }
  if (max_end <= static_cast<double>(map_start)) return 100.0;
  return static_cast<double>(t - map_start) /
         (max_end - static_cast<double>(map_start)) * 100.0;
}

double shuffle_phase_progress(std::uint64_t bytes_moved,
                              std::uint64_t total_bytes) {
  if (total_bytes == 0) return 100.0;
  const double frac = static_cast<double>(std::min(bytes_moved, total_bytes)) /
                      static_cast<double>(total_bytes);
  return frac * 100.0;
}

}  // namespace mrsim
