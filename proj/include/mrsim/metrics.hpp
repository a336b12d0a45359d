#pragma once

#include <cstdint>
#include <span>

#include "mrsim/types.hpp"

namespace mrsim {

/// Absolute percentage-point gap between the progress implied by an
/// estimated phase end and the optimal progress:
/// |(t-ts)/(est-ts) - (t-ts)/(true-ts)| * 100.
/// Throws std::invalid_argument when either end does not exceed t_start.
double error_at(double estimated_end, double true_end, SimTime t,
                SimTime t_start);

struct ErrorSummary {
  double avg = 0.0;
  double max = 0.0;
};

/// Mean and maximum over the per-query errors. Throws on an empty series.
ErrorSummary summarize(std::span<const double> errors);

struct OverheadReport {
  std::uint64_t map_profile_bytes = 0;
  std::uint64_t reduce_profile_bytes = 0;
  std::uint64_t shuffle_bytes = 0;
  double overhead_pct = 0.0;  // (map + reduce) / shuffle * 100
};

OverheadReport make_overhead(std::uint64_t map_profile_bytes,
                             std::uint64_t reduce_profile_bytes,
                             std::uint64_t shuffle_bytes);

}  // namespace mrsim
