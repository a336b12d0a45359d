#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "mrsim/types.hpp"

namespace mrsim {

/// Byte-level view of one map task at query time: totals plus what has
/// been consumed so far, and the start/end times if the task has reached
/// them.
struct MapTaskView {
  std::uint64_t total_bytes = 0;
  std::uint64_t processed_bytes = 0;
  std::optional<SimTime> start;
  std::optional<SimTime> end;
};

/// Map-phase progress under a linear byte-rate model: running tasks
/// extrapolate at their observed per-task rate, queued tasks are placed by
/// a greedy mirror of the slot scheduler at the mean observed rate, and the
/// returned percentage is elapsed over the estimated phase end. With a
/// constant rate and a single wave this reduces to processed / total bytes.
double map_phase_progress(std::span<const MapTaskView> tasks, int parallelism,
                          SimTime map_start, SimTime t);

/// Shuffle-phase progress: bytes moved over total shuffle bytes.
double shuffle_phase_progress(std::uint64_t bytes_moved,
                              std::uint64_t total_bytes);

}  // namespace mrsim
