#include "mrsim/nearest_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace mrsim {

MapTaskProfile build_map_task_profile(int map_task,
                                      std::span<const MapEmission> emissions,
                                      std::size_t lambda, int reducer_count) {
  MapTaskProfile profile;
  profile.map_task = map_task;

  std::vector<std::size_t> order(emissions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (emissions[a].size_bytes != emissions[b].size_bytes) {
      return emissions[a].size_bytes > emissions[b].size_bytes;
    }
    return emissions[a].key < emissions[b].key;
  });

  const std::size_t explicit_count = std::min(lambda, order.size());
  profile.explicit_entries.reserve(explicit_count);
  for (std::size_t i = 0; i < explicit_count; ++i) {
    const auto& e = emissions[order[i]];
    profile.explicit_entries.emplace_back(e.key, e.size_bytes);
  }
  profile.implicit_per_reduce.assign(
      static_cast<std::size_t>(reducer_count), {0, 0});
  for (std::size_t i = explicit_count; i < order.size(); ++i) {
    const auto& e = emissions[order[i]];
    auto& agg = profile.implicit_per_reduce[
        static_cast<std::size_t>(e.reduce_task)];
    agg.first += 1;
    agg.second += e.size_bytes;
  }
  return profile;
}

KeyDistributionProfile merge_map_profiles(
    std::span<const MapTaskProfile> profiles, int reducer_count,
    const std::function<int(KeyId)>& task_of_key,
    std::size_t sketch_capacity) {
  const auto r = static_cast<std::size_t>(reducer_count);
  const std::size_t per_task_capacity =
      std::max<std::size_t>(1, sketch_capacity / r);

  std::vector<SpaceSavingSketch> sketches;
  sketches.reserve(r);
  for (std::size_t i = 0; i < r; ++i) sketches.emplace_back(per_task_capacity);

  KeyDistributionProfile out;
  out.explicit_sizes.assign(r, {});
  out.implicit_bytes.assign(r, 0);

  for (const auto& profile : profiles) {
    out.map_profile_bytes += profile.profile_bytes();
    for (const auto& [key, bytes] : profile.explicit_entries) {
      sketches[static_cast<std::size_t>(task_of_key(key))].offer(key, bytes);
    }
    for (std::size_t i = 0; i < profile.implicit_per_reduce.size(); ++i) {
      out.implicit_bytes[i] += profile.implicit_per_reduce[i].second;
    }
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (const auto& e : sketches[i].entries()) {
      out.explicit_sizes[i].push_back(e.estimate);
    }
    std::sort(out.explicit_sizes[i].begin(), out.explicit_sizes[i].end());
  }
  return out;
}

KeyDistributionProfile exact_key_distribution(const ExecutionTrace& trace) {
  KeyDistributionProfile out;
  const auto r = static_cast<std::size_t>(trace.job.reducer_count);
  out.explicit_sizes.assign(r, {});
  out.implicit_bytes.assign(r, 0);
  for (std::size_t i = 0; i < trace.job.intermediate_keys.size(); ++i) {
    const auto total = trace.job.intermediate_keys[i].total_bytes();
    out.explicit_sizes[static_cast<std::size_t>(trace.key_task[i])].push_back(
        total);
  }
  for (auto& sizes : out.explicit_sizes) {
    std::sort(sizes.begin(), sizes.end());
  }
  for (const auto& emissions : trace.map_emissions) {
    out.map_profile_bytes += 16 * emissions.size();
  }
  return out;
}

KeyDistributionProfile approximate_key_distribution(
    const ExecutionTrace& trace, const NearestFitConfig& cfg) {
  std::vector<MapTaskProfile> profiles;
  profiles.reserve(trace.map_emissions.size());
  for (std::size_t j = 0; j < trace.map_emissions.size(); ++j) {
    profiles.push_back(build_map_task_profile(
        static_cast<int>(j), trace.map_emissions[j], cfg.explicit_key_budget,
        trace.job.reducer_count));
  }
  std::unordered_map<KeyId, int> task_of;
  task_of.reserve(trace.job.intermediate_keys.size());
  for (std::size_t i = 0; i < trace.job.intermediate_keys.size(); ++i) {
    task_of.emplace(trace.job.intermediate_keys[i].key, trace.key_task[i]);
  }
  return merge_map_profiles(
      profiles, trace.job.reducer_count,
      [&task_of](KeyId k) { return task_of.at(k); },
      cfg.resolved_sketch_capacity());
}

// ---- NearestFitIndicator ---------------------------------------------------

NearestFitIndicator::NearestFitIndicator(NearestFitMode mode,
                                         NearestFitConfig cfg,
                                         KeyDistributionProfile profile)
    : mode_(mode),
      cfg_(cfg),
      profile_(std::move(profile)),
      delta_{cfg.delta_floor_bytes, cfg.delta_fraction},
      histogram_(cfg.histogram_capacity) {
  cfg_.validate();
}

void NearestFitIndicator::begin_phase(const ReducePhaseContext& ctx) {
  ctx_ = ctx;
  if (profile_.explicit_sizes.size() != ctx.tasks.size()) {
    throw std::invalid_argument(
        "NearestFit: key distribution profile does not match the task count");
  }
  tasks_.clear();
  tasks_.reserve(ctx.tasks.size());
  const DurationMs window =
      mode_ == NearestFitMode::oracle ? 0 : cfg_.smoothing_window_ms;
  for (std::size_t i = 0; i < ctx.tasks.size(); ++i) {
    TaskState st(window, cfg_.burst_size_threshold_bytes,
                 cfg_.burst_skip_threshold);
    st.pending_explicit.insert(profile_.explicit_sizes[i].begin(),
                               profile_.explicit_sizes[i].end());
    st.pending_implicit = profile_.implicit_bytes[i];
    st.profile_time = ctx.reduce_start;
    tasks_.push_back(std::move(st));
  }
}

void NearestFitIndicator::on_task_start(int task, SimTime t) {
  auto& st = tasks_[static_cast<std::size_t>(task)];
  st.started = true;
  st.profile_time = t;  // p_i starts at the task start, not the phase start
}

void NearestFitIndicator::apply_points(TaskState& st,
                                       std::span<const ProfilePoint> pts,
                                       SimTime timestamp) {
  if (pts.empty()) return;
  st.profile_time = timestamp;
  reduce_profile_bytes_ += 16 * pts.size();
  for (const auto& p : pts) {
    // Match the observed size against an unprocessed explicit size; a miss
    // means the group was implicit, so its bytes leave the implicit pool.
    bool matched = false;
    if (!st.pending_explicit.empty()) {
      auto it = st.pending_explicit.lower_bound(p.size_bytes);
      auto best = st.pending_explicit.end();
      if (it != st.pending_explicit.end()) best = it;
      if (it != st.pending_explicit.begin()) {
        auto prev = std::prev(it);
        // Ties go to the smaller size.
        if (best == st.pending_explicit.end() ||
            p.size_bytes - *prev <= *best - p.size_bytes) {
          best = prev;
        }
      }
      if (best != st.pending_explicit.end()) {
        const std::uint64_t s = *best;
        const std::uint64_t diff = s > p.size_bytes ? s - p.size_bytes
                                                    : p.size_bytes - s;
        const double tol = cfg_.explicit_match_tolerance *
                           static_cast<double>(std::max(s, p.size_bytes));
        if (static_cast<double>(diff) <= tol) {
          st.consumed_explicit += s;
          st.pending_explicit.erase(best);
          matched = true;
        }
      }
    }
    if (!matched) {
      const std::uint64_t dec = std::min(st.pending_implicit, p.size_bytes);
      st.pending_implicit -= dec;
      st.consumed_implicit += dec;
    }
    st.points.insert(p.size_bytes, p.time_ms);
    histogram_.record(p.size_bytes);
    observed_bytes_ += p.size_bytes;
    observed_time_ += p.time_ms;
  }
  st.dirty = true;
}

void NearestFitIndicator::on_reduce_function(const ReduceProfileEvent& ev) {
  auto& st = tasks_[static_cast<std::size_t>(ev.task)];
  if (mode_ == NearestFitMode::oracle) {
    const ProfilePoint p{ev.size_bytes, ev.elapsed_ms};
    apply_points(st, std::span<const ProfilePoint>(&p, 1), ev.timestamp);
    return;
  }
  const auto delivered = st.burst.record(ev.size_bytes, ev.elapsed_ms);
  apply_points(st, delivered, ev.timestamp);
}

void NearestFitIndicator::on_task_finish(int task, SimTime t) {
  auto& st = tasks_[static_cast<std::size_t>(task)];
  const auto delivered = st.burst.flush();
  apply_points(st, delivered, t);
  st.finished = true;
  st.finish_time = t;
  st.profile_time = t;
}

void NearestFitIndicator::refresh(const TaskState& st) const {
  if (!st.dirty) return;
  st.view = to_points(st.points);
  st.fit = fit_power(st.view);
  st.dirty = false;
}

double NearestFitIndicator::fallback_rate(double bytes) const {
  if (observed_bytes_ > 0) {
    return bytes * (static_cast<double>(observed_time_) /
                    static_cast<double>(observed_bytes_));
  }
  if (ctx_.shuffle_rate > 0.0) return bytes / ctx_.shuffle_rate;
  return 0.0;
}

RoutedPrediction NearestFitIndicator::predict(const TaskState& st,
                                              double size_bytes) const {
  refresh(st);
  std::vector<const PointSet*> all_points;
  std::vector<const FitModel*> all_fits;
  all_points.reserve(tasks_.size());
  for (const auto& other : tasks_) {
    refresh(other);
    all_points.push_back(&other.view);
    if (other.fit) all_fits.push_back(&*other.fit);
  }
  const auto p = combined_predict(st.view, st.fit, all_points, all_fits,
                                  size_bytes, delta_, cfg_.r2_threshold);
  if (p) {
    return {std::max(0.0, p->time_ms),
            static_cast<PredictionRoute>(static_cast<int>(p->step))};
  }
  if (observed_bytes_ > 0) {
    return {fallback_rate(size_bytes), PredictionRoute::fallback_rate};
  }
  return {fallback_rate(size_bytes), PredictionRoute::fallback_shuffle};
}

RoutedPrediction NearestFitIndicator::routed_predict(
    int task, std::uint64_t size_bytes) const {
  return predict(tasks_[static_cast<std::size_t>(task)],
                 static_cast<double>(size_bytes));
}

double NearestFitIndicator::remaining_ms(const TaskState& st) const {
  double remaining = 0.0;
  // Distinct sizes repeat heavily; memoize per distinct size.
  std::unordered_map<std::uint64_t, double> memo;
  auto predict_size = [&](std::uint64_t s) {
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    const double v = predict(st, static_cast<double>(s)).time_ms;
    memo.emplace(s, v);
    return v;
  };
  for (auto s : st.pending_explicit) remaining += predict_size(s);
  if (st.pending_implicit > 0) {
    const auto buckets = histogram_.partition(st.pending_implicit);
    if (buckets) {
      for (const auto& b : *buckets) {
        remaining += b.count * predict_size(b.size_bytes);
      }
    } else {
      remaining += fallback_rate(static_cast<double>(st.pending_implicit));
    }
  }
  return remaining;
}

double NearestFitIndicator::progress_at(SimTime t) const {
  if (t < ctx_.reduce_start) {
    throw std::invalid_argument(
        "progress_at: query precedes the reduce phase start");
  }
  double max_end = static_cast<double>(ctx_.reduce_start);
  std::vector<double> slot_free;
  std::vector<std::size_t> pending;
  int running = 0;
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    const auto& st = tasks_[i];
    if (st.finished) {
      max_end = std::max(max_end, static_cast<double>(st.finish_time));
    } else if (st.started) {
      const double end =
          static_cast<double>(st.profile_time) + remaining_ms(st);
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
      // Unscheduled tasks have no local observations, so the combination
      // naturally lands on the global routes. The per-task shuffle fetch
      // term is zero under the aggregate shuffle model.
      durations.push_back(remaining_ms(tasks_[i]));
    }
    const auto starts = predict_starts(slot_free, durations);
    for (std::size_t p = 0; p < pending.size(); ++p) {
      max_end = std::max(max_end, starts[p] + durations[p]);
    }
  }
  if (max_end <= static_cast<double>(ctx_.reduce_start)) {
    max_end = static_cast<double>(ctx_.reduce_start) + 1.0;
  }
  return (static_cast<double>(t - ctx_.reduce_start) /
          (max_end - static_cast<double>(ctx_.reduce_start))) *
         100.0;
}

NearestFitIndicator::TaskAccounting NearestFitIndicator::accounting(
    int task) const {
  const auto& st = tasks_[static_cast<std::size_t>(task)];
  TaskAccounting acc;
  for (auto s : st.pending_explicit) acc.pending_explicit_bytes += s;
  acc.pending_implicit_bytes = st.pending_implicit;
  acc.consumed_explicit_bytes = st.consumed_explicit;
  acc.consumed_implicit_bytes = st.consumed_implicit;
  return acc;
}

}  // namespace mrsim
