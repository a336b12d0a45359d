#include "mrsim/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace mrsim {

PointSet to_points(const SmoothedPointSet& set) {
  PointSet out;
  const auto snap = set.snapshot();
  out.reserve(snap.size());
  for (const auto& p : snap) {
    out.push_back({static_cast<double>(p.size_bytes), p.mean_time_ms(),
                   static_cast<double>(p.count)});
  }
  return out;
}

double FitModel::predict(double size_bytes) const {
  const double y = a + b * std::pow(size_bytes, c);
  return y > 0.0 ? y : 0.0;
}

double FitModel::sse(const PointSet& points) const {
  double s = 0.0;
  for (const auto& p : points) {
    const double r = a + b * std::pow(p.size_bytes, c) - p.time_ms;
    s += p.weight * r * r;
  }
  return s;
}

std::optional<double> nn_predict(const PointSet& points, double size_bytes,
                                 const DeltaPolicy& policy) {
  const double radius = policy.radius(size_bytes);
  double weighted_time = 0.0;
  double weight = 0.0;
  for (const auto& p : points) {
    if (std::abs(p.size_bytes - size_bytes) <= radius) {
      weighted_time += p.weight * p.time_ms;
      weight += p.weight;
    }
  }
  if (weight <= 0.0) return std::nullopt;
  return weighted_time / weight;
}

namespace {

constexpr double kExponentMin = 0.0;
constexpr double kExponentMax = 6.0;

struct LinearSolution {
  double a = 0.0;
  double b = 0.0;
  double sse = std::numeric_limits<double>::infinity();
};

// Exact weighted least squares for y ~ a + b * x^c at a fixed exponent.
LinearSolution solve_at_exponent(const PointSet& pts, double c) {
  double sw = 0, sz = 0, szz = 0, sy = 0, szy = 0;
  for (const auto& p : pts) {
    const double z = std::pow(p.size_bytes, c);
    sw += p.weight;
    sz += p.weight * z;
    szz += p.weight * z * z;
    sy += p.weight * p.time_ms;
    szy += p.weight * z * p.time_ms;
  }
  LinearSolution sol;
  const double det = sw * szz - sz * sz;
  const double scale = sw * szz + sz * sz;
  if (!(det > scale * 1e-14) || !std::isfinite(det)) {
    // Degenerate basis (x^c nearly constant): plain weighted mean.
    sol.a = sw > 0 ? sy / sw : 0.0;
    sol.b = 0.0;
  } else {
    sol.b = (sw * szy - sz * sy) / det;
    sol.a = (szz * sy - sz * szy) / det;
  }
  double sse = 0.0;
  for (const auto& p : pts) {
    const double r = sol.a + sol.b * std::pow(p.size_bytes, c) - p.time_ms;
    sse += p.weight * r * r;
  }
  sol.sse = sse;
  return sol;
}

// Slope of the log-log regression of (x, y - min_y), used to seed the
// exponent search near the data's apparent growth rate.
std::optional<double> loglog_exponent(const PointSet& pts) {
  double min_y = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) min_y = std::min(min_y, p.time_ms);
  double sw = 0, sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (const auto& p : pts) {
    const double dy = p.time_ms - min_y;
    if (!(dy > 0.0) || !(p.size_bytes > 0.0)) continue;
    const double lx = std::log(p.size_bytes);
    const double ly = std::log(dy);
    sw += p.weight;
    sx += p.weight * lx;
    sxx += p.weight * lx * lx;
    sy += p.weight * ly;
    sxy += p.weight * lx * ly;
  }
  const double det = sw * sxx - sx * sx;
  if (!(det > 1e-12)) return std::nullopt;
  return (sw * sxy - sx * sy) / det;
}

}  // namespace

std::optional<FitModel> fit_power(const PointSet& points) {
  if (points.size() < 3) return std::nullopt;
  std::set<double> distinct;
  for (const auto& p : points) distinct.insert(p.size_bytes);
  if (distinct.size() < 3) return std::nullopt;

  // Dense scan over the exponent range, plus the log-log seed.
  double best_c = 1.0;
  LinearSolution best;
  auto consider = [&](double c) {
    c = std::clamp(c, kExponentMin, kExponentMax);
    const auto sol = solve_at_exponent(points, c);
    if (sol.sse < best.sse) {
      best = sol;
      best_c = c;
    }
  };
  for (int i = 0; i <= 600; ++i) consider(kExponentMin + 0.01 * i);
  if (auto seed = loglog_exponent(points)) consider(*seed);

  // Step-halving descent around the best candidate.
  double step = 0.01;
  for (int iter = 0; iter < 200 && step > 1e-12; ++iter) {
    const double before = best.sse;
    consider(best_c + step);
    consider(best_c - step);
    if (best.sse >= before ||
        (before - best.sse) <= 1e-9 * std::max(before, 1e-300)) {
      step *= 0.5;
    }
  }

  FitModel model;
  model.a = best.a;
  model.b = best.b;
  model.c = best_c;

  double sw = 0, sy = 0;
  for (const auto& p : points) {
    sw += p.weight;
    sy += p.weight * p.time_ms;
  }
  const double mean = sy / sw;
  double sst = 0.0;
  for (const auto& p : points) {
    sst += p.weight * (p.time_ms - mean) * (p.time_ms - mean);
  }
  model.r2 = sst > 0.0 ? 1.0 - best.sse / sst : (best.sse <= 1e-12 ? 1.0 : 0.0);
  return model;
}

std::optional<Prediction> combined_predict(
    const PointSet& local, const std::optional<FitModel>& local_fit,
    const std::vector<const PointSet*>& all_points,
    const std::vector<const FitModel*>& all_fits, double size_bytes,
    const DeltaPolicy& policy, double r2_threshold) {
  // 1. local neighborhood
  if (auto t = nn_predict(local, size_bytes, policy)) {
    return Prediction{*t, PredictionStep::local_neighborhood};
  }
  // 2. local fit of acceptable quality
  if (local_fit && local_fit->r2 >= r2_threshold) {
    return Prediction{local_fit->predict(size_bytes),
                      PredictionStep::local_fit};
  }
  // 3. neighborhood over the union of every task's points
  {
    double weighted_time = 0.0;
    double weight = 0.0;
    const double radius = policy.radius(size_bytes);
    for (const PointSet* ps : all_points) {
      if (ps == nullptr) continue;
      for (const auto& p : *ps) {
        if (std::abs(p.size_bytes - size_bytes) <= radius) {
          weighted_time += p.weight * p.time_ms;
          weight += p.weight;
        }
      }
    }
    if (weight > 0.0) {
      return Prediction{weighted_time / weight,
                        PredictionStep::global_neighborhood};
    }
  }
  // 4. best available fit, judged on the local points (best r2 when the
  //    local set is empty)
  {
    const FitModel* chosen = nullptr;
    double chosen_score = std::numeric_limits<double>::infinity();
    for (const FitModel* fm : all_fits) {
      if (fm == nullptr) continue;
      const double score = local.empty() ? -fm->r2 : fm->sse(local);
      if (chosen == nullptr || score < chosen_score) {
        chosen = fm;
        chosen_score = score;
      }
    }
    if (chosen != nullptr) {
      return Prediction{chosen->predict(size_bytes),
                        PredictionStep::global_fit};
    }
  }
  return std::nullopt;
}

}  // namespace mrsim
