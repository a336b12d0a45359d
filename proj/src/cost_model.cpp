#include "mrsim/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mrsim/hashing.hpp"

namespace mrsim {

CostModel CostModel::make_polynomial(double coefficient, double exponent,
                                     double noise) {
  CostModel m;
  m.kind = CostKind::polynomial;
  m.coefficient = coefficient;
  m.exponent = exponent;
  m.noise = noise;
  return m;
}

CostModel CostModel::make_product(double coefficient,
                                  std::uint64_t right_count, double noise) {
  CostModel m;
  m.kind = CostKind::product;
  m.coefficient = coefficient;
  m.right_count = right_count;
  m.noise = noise;
  return m;
}

CostModel CostModel::make_table(
    std::vector<std::pair<std::uint64_t, double>> t, double noise) {
  CostModel m;
  m.kind = CostKind::table;
  m.table = std::move(t);
  std::sort(m.table.begin(), m.table.end());
  m.noise = noise;
  return m;
}

namespace {

double table_cost(const CostModel& model, std::uint64_t size_bytes) {
  const auto& t = model.table;
  if (t.empty()) {
    throw std::invalid_argument("eval_cost: table model has no entries");
  }
  if (size_bytes <= t.front().first) return t.front().second;
  if (size_bytes >= t.back().first) return t.back().second;
  auto hi = std::lower_bound(
      t.begin(), t.end(), size_bytes,
      [](const auto& row, std::uint64_t s) { return row.first < s; });
  if (hi->first == size_bytes) return hi->second;
  auto lo = hi - 1;
  const double span = static_cast<double>(hi->first - lo->first);
  const double frac = static_cast<double>(size_bytes - lo->first) / span;
  return lo->second + frac * (hi->second - lo->second);
}

}  // namespace

double raw_cost(const CostModel& model, std::uint64_t size_bytes) {
  switch (model.kind) {
    case CostKind::polynomial: {
      if (model.exponent < 0.0) {
        throw std::invalid_argument("eval_cost: exponent must be >= 0");
      }
      return model.coefficient *
             std::pow(static_cast<double>(size_bytes), model.exponent);
    }
    case CostKind::product:
      return model.coefficient * static_cast<double>(size_bytes) *
             static_cast<double>(model.right_count);
    case CostKind::table:
      return model.coefficient * table_cost(model, size_bytes);
  }
  return 0.0;
}

DurationMs eval_cost(const CostModel& model, std::uint64_t size_bytes,
                     std::uint64_t rng_seed) {
  if (model.noise < 0.0 || model.noise >= 1.0) {
    throw std::invalid_argument("eval_cost: noise must lie in [0,1)");
  }
  double cost = raw_cost(model, size_bytes);
  if (model.noise > 0.0) {
    const double u = to_unit_double(mix64(rng_seed));
    cost *= 1.0 + (2.0 * u - 1.0) * model.noise;
  }
  if (cost < 0.0) cost = 0.0;
  return static_cast<DurationMs>(std::llround(cost));
}

}  // namespace mrsim
