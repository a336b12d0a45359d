#pragma once

#include <optional>
#include <vector>

#include "mrsim/smoothing.hpp"

namespace mrsim {

/// One observation used by the regressors: `weight` counts how many raw
/// executions the point aggregates (smoothed points carry their merge
/// count).
struct RegressionPoint {
  double size_bytes = 0.0;
  double time_ms = 0.0;
  double weight = 1.0;
};

using PointSet = std::vector<RegressionPoint>;

PointSet to_points(const SmoothedPointSet& set);

/// Neighborhood rule for nearest-neighbor prediction: a point at size s is
/// a neighbor of query x when |s - x| <= radius(x), with
/// radius(x) = max(floor_bytes, fraction * x).
struct DeltaPolicy {
  double floor_bytes = 64.0;
  double fraction = 0.05;

  double radius(double size) const {
    const double rel = fraction * size;
    return floor_bytes > rel ? floor_bytes : rel;
  }
};

/// Fitted running-time model a + b * x^c together with its coefficient of
/// determination on the fitted data.
struct FitModel {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double r2 = 0.0;

  /// Clamped at zero: running times are never negative.
  double predict(double size_bytes) const;
  /// Weighted sum of squared residuals on the given points.
  double sse(const PointSet& points) const;
};

/// Count-weighted mean of the running times observed inside the
/// delta-neighborhood of `size_bytes`; absent when the neighborhood is
/// empty. Invariant under permutation of the point set.
std::optional<double> nn_predict(const PointSet& points, double size_bytes,
                                 const DeltaPolicy& policy);

/// Weighted least-squares fit of a + b * x^c. Needs at least three points
/// spanning at least three distinct sizes, otherwise absent. The exponent
/// is searched over [0, 6] (a dense scan refined by step-halving descent,
/// <= 200 refinement steps, relative SSE change < 1e-9); for each candidate
/// exponent the (a, b) pair is the exact linear least-squares optimum.
/// Deterministic for a given point set.
std::optional<FitModel> fit_power(const PointSet& points);

enum class PredictionStep {
  local_neighborhood = 1,  // neighbors inside this task's own points
  local_fit = 2,           // this task's model, if its fit quality passes
  global_neighborhood = 3, // neighbors pooled across every task
  global_fit = 4,          // best other-task model judged on local points
};

struct Prediction {
  double time_ms = 0.0;
  PredictionStep step = PredictionStep::local_neighborhood;
};

/// Ordered combination of the four prediction routes; the first applicable
/// step wins. Step 2 requires local_fit->r2 >= r2_threshold. Step 4 picks,
/// among all available fits, the one with the smallest SSE against the
/// local points (or the best r2 when the local set is empty). Returns
/// nullopt when no step applies; the caller is expected to fall back to a
/// global linear rate.
std::optional<Prediction> combined_predict(
    const PointSet& local, const std::optional<FitModel>& local_fit,
    const std::vector<const PointSet*>& all_points,
    const std::vector<const FitModel*>& all_fits, double size_bytes,
    const DeltaPolicy& policy, double r2_threshold);

}  // namespace mrsim
