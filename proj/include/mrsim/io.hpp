#pragma once

#include <filesystem>
#include <vector>

#include "mrsim/simulator.hpp"
#include "mrsim/types.hpp"

namespace mrsim {

/// Workload file: JSON document {"keys": [{"key": <u64>, "sizes": [<u64>
/// per map task>]}]}. Sizes are the per-map-task byte shares of the key's
/// value set.
void save_workload(const std::filesystem::path& path,
                   const std::vector<IntermediateKey>& keys);
std::vector<IntermediateKey> load_workload(const std::filesystem::path& path);

/// Full-fidelity trace round-trip (JSON): job echo, cluster, timelines,
/// phase bounds, per-map-task emissions.
void save_trace(const std::filesystem::path& path, const ExecutionTrace& trace);
ExecutionTrace load_trace(const std::filesystem::path& path);

}  // namespace mrsim
