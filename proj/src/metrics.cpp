#include "mrsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mrsim {

double error_at(double estimated_end, double true_end, SimTime t,
                SimTime t_start) {
  const double start = static_cast<double>(t_start);
  if (!(estimated_end > start) || !(true_end > start)) {
    throw std::invalid_argument(
        "error_at: phase ends must lie strictly after the phase start");
  }
  const double elapsed = static_cast<double>(t - t_start);
  return std::abs(elapsed / (estimated_end - start) -
                  elapsed / (true_end - start)) *
         100.0;
}

ErrorSummary summarize(std::span<const double> errors) {
  if (errors.empty()) {
    throw std::invalid_argument("summarize: empty error series");
  }
  ErrorSummary s;
  double sum = 0.0;
  for (double e : errors) {
    sum += e;
    s.max = std::max(s.max, e);
  }
  s.avg = sum / static_cast<double>(errors.size());
  return s;
}

OverheadReport make_overhead(std::uint64_t map_profile_bytes,
                             std::uint64_t reduce_profile_bytes,
                             std::uint64_t shuffle_bytes) {
  OverheadReport r;
  r.map_profile_bytes = map_profile_bytes;
  r.reduce_profile_bytes = reduce_profile_bytes;
  r.shuffle_bytes = shuffle_bytes;
  if (shuffle_bytes > 0) {
    r.overhead_pct =
        static_cast<double>(map_profile_bytes + reduce_profile_bytes) /
        static_cast<double>(shuffle_bytes) * 100.0;
  }
  return r;
}

}  // namespace mrsim
