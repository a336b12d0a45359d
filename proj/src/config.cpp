#include "mrsim/config.hpp"

#include <stdexcept>

namespace mrsim {

std::uint64_t JobSpec::total_shuffle_bytes() const {
  std::uint64_t s = 0;
  for (const auto& k : intermediate_keys) s += k.total_bytes();
  return s;
}

void JobSpec::validate() const {
  if (reducer_count < 1) {
    throw std::invalid_argument("job.reducer_count: must be >= 1");
  }
  if (map_splits.empty()) {
    throw std::invalid_argument("job.map_splits: at least one split required");
  }
  if (shuffle_rate < 0.0) {
    throw std::invalid_argument("job.shuffle_rate: must be >= 0");
  }
  for (const auto& k : intermediate_keys) {
    if (k.bytes_per_map_task.size() != map_splits.size()) {
      throw std::invalid_argument(
          "job.intermediate_keys: per-map-task size vector must have one "
          "entry per map split");
    }
  }
}

void ClusterSpec::validate() const {
  if (worker_count < 1) {
    throw std::invalid_argument("cluster.worker_count: must be >= 1");
  }
  if (slots_per_worker < 1) {
    throw std::invalid_argument("cluster.slots_per_worker: must be >= 1");
  }
}

void NearestFitConfig::validate() const {
  if (explicit_key_budget == 0) {
    throw std::invalid_argument("nearestfit.lambda: must be positive");
  }
  if (delta_floor_bytes < 0.0 || delta_fraction < 0.0 ||
      (delta_floor_bytes == 0.0 && delta_fraction == 0.0)) {
    throw std::invalid_argument(
        "nearestfit.delta: floor and fraction must be >= 0 and not both 0");
  }
  if (r2_threshold <= 0.0 || r2_threshold > 1.0) {
    throw std::invalid_argument("nearestfit.r2_threshold: must lie in (0,1]");
  }
  if (smoothing_window_ms < 0) {
    throw std::invalid_argument(
        "nearestfit.smoothing_window_ms: must be >= 0");
  }
  if (update_interval_ms <= 0) {
    throw std::invalid_argument(
        "nearestfit.update_interval_ms: must be positive");
  }
  if (explicit_match_tolerance < 0.0) {
    throw std::invalid_argument(
        "nearestfit.explicit_match_tolerance: must be >= 0");
  }
  if (histogram_capacity == 0) {
    throw std::invalid_argument(
        "nearestfit.histogram_capacity: must be positive");
  }
}

void BaselineConfig::validate() const {
  if (ewma_alpha <= 0.0 || ewma_alpha > 1.0) {
    throw std::invalid_argument("baselines.ewma_alpha: must lie in (0,1]");
  }
  if (taskratio_warmup_fraction < 0.0 || taskratio_warmup_fraction > 1.0) {
    throw std::invalid_argument(
        "baselines.taskratio_warmup_fraction: must lie in [0,1]");
  }
}

}  // namespace mrsim
