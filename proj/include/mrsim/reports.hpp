#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mrsim/metrics.hpp"
#include "mrsim/replay.hpp"
#include "mrsim/simulator.hpp"

namespace mrsim {

struct IndicatorSummary {
  std::string indicator;
  ErrorSummary errors;
  OverheadReport overhead;
};

/// progress.csv: t_ms,indicator,estimated_progress,optimal_progress,error.
/// One row per (query time, indicator); error = |estimated - optimal| in
/// percentage points, printed with enough precision that summary values
/// can be recomputed from the file.
void write_progress_csv(const std::filesystem::path& path,
                        const ExecutionTrace& trace,
                        std::span<const IndicatorRun> runs);

/// swimlanes.csv: task_id,worker,start_ms,end_ms,kind (one row per task).
void write_swimlanes_csv(const std::filesystem::path& path,
                         const ExecutionTrace& trace);

/// summary.csv: indicator,avg_err,max_err,map_profile_bytes,
/// reduce_profile_bytes,shuffle_bytes,overhead_pct.
void write_summary_csv(const std::filesystem::path& path,
                       std::span<const IndicatorSummary> rows);

/// trace_events.csv: event,task_id,key_hash,size_bytes,t_ms. Events are
/// map_start/map_end/reduce_start/reduce_end per task plus reduce_fn per
/// function completion.
void write_trace_events_csv(const std::filesystem::path& path,
                            const ExecutionTrace& trace);

/// Self-contained SVG charts, no external assets.
void write_progress_svg(const std::filesystem::path& path,
                        const ExecutionTrace& trace,
                        std::span<const IndicatorRun> runs);
void write_swimlanes_svg(const std::filesystem::path& path,
                         const ExecutionTrace& trace);

/// Per-indicator summaries recomputed from the replay series against the
/// trace's optimal progress.
std::vector<IndicatorSummary> summarize_runs(const ExecutionTrace& trace,
                                             std::span<const IndicatorRun> runs);

}  // namespace mrsim
