#include "mrsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>

#include "mrsim/hashing.hpp"

namespace mrsim {

namespace {

std::uint64_t round_half_up(double x) {
  return static_cast<std::uint64_t>(std::floor(x + 0.5));
}

// Fresh distinct KeyIds from a counter; mix64 is bijective so no collisions.
KeyId fresh_key(std::uint64_t tag, std::uint64_t index) {
  return mix64(tag * 0x9e3779b97f4a7c15ULL + index + 1);
}

}  // namespace

std::vector<KeyGroup> gen_sigma_skew(const SkewSpec& spec) {
  if (!(spec.sigma > 1.0)) {
    throw std::invalid_argument("skew.sigma: must be > 1");
  }
  if (spec.max_group_bytes < 1) {
    throw std::invalid_argument("skew.max_group_bytes: must be >= 1");
  }
  std::vector<KeyGroup> out;
  const double n = static_cast<double>(spec.max_group_bytes);
  std::uint64_t emitted_bytes = 0;
  std::uint64_t index = 0;
  for (int level = 0;; ++level) {
    const double raw_size = n / std::pow(spec.sigma, level);
    if (raw_size < 1.0) break;
    const std::uint64_t size = round_half_up(raw_size);
    const std::uint64_t count = round_half_up(std::pow(spec.sigma, level));
    for (std::uint64_t c = 0; c < count; ++c) {
      if (spec.total_budget_bytes &&
          emitted_bytes + size > *spec.total_budget_bytes) {
        return out;
      }
      out.push_back({fresh_key(0xA1, index++), size});
      emitted_bytes += size;
    }
  }
  return out;
}

std::vector<KeyGroup> gen_zipf_relation(const ZipfSpec& spec,
                                        std::uint64_t seed) {
  if (!(spec.skew > 0.0)) {
    throw std::invalid_argument("zipf.skew: must be > 0");
  }
  if (spec.distinct_keys < 1) {
    throw std::invalid_argument("zipf.distinct_keys: must be >= 1");
  }
  if (spec.tuples < 1) {
    throw std::invalid_argument("zipf.tuples: must be >= 1");
  }
  std::vector<double> weights(spec.distinct_keys);
  double norm = 0.0;
  for (std::uint64_t r = 0; r < spec.distinct_keys; ++r) {
    weights[r] = std::pow(static_cast<double>(r + 1), -spec.skew);
    norm += weights[r];
  }

  std::vector<KeyGroup> out;
  if (!spec.sampled) {
    const double c = static_cast<double>(spec.tuples) / norm;
    for (std::uint64_t r = 0; r < spec.distinct_keys; ++r) {
      const auto mult = static_cast<std::uint64_t>(std::floor(c * weights[r]));
      if (mult == 0) continue;
      out.push_back({fresh_key(0xB2 ^ seed, r), mult});
    }
    return out;
  }

  // Sampled mode: draw ranks by inverse CDF over pinned uniform doubles.
  std::vector<double> cdf(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cdf.begin());
  std::vector<std::uint64_t> mult(spec.distinct_keys, 0);
  std::mt19937_64 rng(seed);
  for (std::uint64_t t = 0; t < spec.tuples; ++t) {
    const double u = to_unit_double(rng()) * norm;
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    const auto rank = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(it - cdf.begin(),
                                 static_cast<std::ptrdiff_t>(cdf.size()) - 1));
    ++mult[rank];
  }
  for (std::uint64_t r = 0; r < spec.distinct_keys; ++r) {
    if (mult[r] == 0) continue;
    out.push_back({fresh_key(0xB2 ^ seed, r), mult[r]});
  }
  return out;
}

std::vector<int> assign_lpt(const std::vector<double>& costs, int tasks) {
  if (tasks < 1) throw std::invalid_argument("assign_lpt: tasks must be >= 1");
  std::vector<std::size_t> order(costs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return costs[a] > costs[b];
                   });
  // (load, task) min-heap; ties resolved toward the lower task id.
  using Slot = std::pair<double, int>;
  std::priority_queue<Slot, std::vector<Slot>, std::greater<>> heap;
  for (int t = 0; t < tasks; ++t) heap.push({0.0, t});
  std::vector<int> assignment(costs.size(), 0);
  for (std::size_t idx : order) {
    auto [load, task] = heap.top();
    heap.pop();
    assignment[idx] = task;
    heap.push({load + costs[idx], task});
  }
  return assignment;
}

std::vector<int> assign_unbalanced(const std::vector<double>& costs, int tasks,
                                   std::size_t pinned_count) {
  if (tasks < 1) {
    throw std::invalid_argument("assign_unbalanced: tasks must be >= 1");
  }
  std::vector<std::size_t> order(costs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return costs[a] > costs[b];
                   });
  std::vector<int> assignment(costs.size(), 0);
  pinned_count = std::min(pinned_count, costs.size());
  if (tasks == 1) return assignment;
  // Top pinned_count costliest stay on task 0; the rest spread fairly
  // (LPT) over tasks 1..tasks-1.
  std::vector<double> rest_costs;
  std::vector<std::size_t> rest_idx;
  for (std::size_t i = pinned_count; i < order.size(); ++i) {
    rest_idx.push_back(order[i]);
    rest_costs.push_back(costs[order[i]]);
  }
  const auto rest_assignment = assign_lpt(rest_costs, tasks - 1);
  for (std::size_t i = 0; i < rest_idx.size(); ++i) {
    assignment[rest_idx[i]] = rest_assignment[i] + 1;
  }
  return assignment;
}

std::vector<double> MatMultAssignment::per_task_cost() const {
  std::vector<double> load(reduce_tasks, 0.0);
  for (const auto& p : products) load[p.task] += p.cost;
  return load;
}

MatMultAssignment gen_matmult_products(const MatMultSpec& spec,
                                       std::uint64_t seed) {
  const int q = static_cast<int>(std::llround(std::sqrt(
      static_cast<double>(spec.block_count))));
  if (q < 1 || q * q != spec.block_count) {
    throw std::invalid_argument("matmult.block_count: must be a perfect square");
  }
  if (spec.block_side < 1) {
    throw std::invalid_argument("matmult.block_side: must be >= 1");
  }
  if (spec.reduce_tasks < 1) {
    throw std::invalid_argument("matmult.reduce_tasks: must be >= 1");
  }

  const double n = spec.block_side;
  auto density_a = [&](int /*i*/, int j) {
    return spec.density == MatMultDensity::uniform
               ? 0.25
               : std::pow(2.0, -(q - 1 - j));
  };
  auto density_b = [&](int i, int /*j*/) {
    return spec.density == MatMultDensity::uniform
               ? 0.25
               : std::pow(2.0, -(q - 1 - i));
  };

  MatMultAssignment out;
  out.reduce_tasks = spec.reduce_tasks;
  std::vector<double> costs;
  std::uint64_t index = 0;
  for (int i = 0; i < q; ++i) {
    for (int l = 0; l < q; ++l) {
      for (int j = 0; j < q; ++j) {
        const double d = density_a(i, l);
        const double dp = density_b(l, j);
        BlockProduct p;
        p.key = fresh_key(0xC3, index++);
        p.size_bytes = std::max<std::uint64_t>(
            1, round_half_up(n * n * (d + dp)));
        p.cost = n * n * n * d * dp;
        out.products.push_back(p);
        costs.push_back(p.cost);
      }
    }
  }

  std::vector<int> assignment;
  switch (spec.balance) {
    case BalanceStrategy::optimal:
      assignment = assign_lpt(costs, spec.reduce_tasks);
      break;
    case BalanceStrategy::unbalanced:
      assignment = assign_unbalanced(
          costs, spec.reduce_tasks,
          static_cast<std::size_t>(spec.block_count));
      break;
    case BalanceStrategy::random: {
      std::mt19937_64 rng(seed);
      assignment.resize(costs.size());
      for (auto& a : assignment) {
        a = static_cast<int>(rng() % static_cast<std::uint64_t>(
                                         spec.reduce_tasks));
      }
      break;
    }
  }
  for (std::size_t i = 0; i < out.products.size(); ++i) {
    out.products[i].task = assignment[i];
  }
  return out;
}

}  // namespace mrsim
