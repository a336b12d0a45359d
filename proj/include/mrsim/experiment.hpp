#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrsim/config.hpp"
#include "mrsim/indicators.hpp"
#include "mrsim/replay.hpp"
#include "mrsim/reports.hpp"
#include "mrsim/simulator.hpp"
#include "mrsim/workload.hpp"

namespace mrsim {

struct WorkloadSpec {
  enum class Kind { sigma_skew, zipf_join, matmult, file };
  Kind kind = Kind::sigma_skew;
  SkewSpec skew;
  ZipfSpec zipf;
  MatMultSpec matmult;
  std::filesystem::path file;
};

/// Everything one experiment needs: workload recipe, job and cluster
/// shape, indicator selection and knobs, and where outputs go.
struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  WorkloadSpec workload;
  int map_tasks = 4;
  MapSplit map_split{1000, 100};
  CostModel map_cost = CostModel::make_polynomial(0.001, 1.0);
  CostModel reduce_cost = CostModel::make_polynomial(0.001, 1.0);
  ClusterSpec cluster;
  int reducers = 1;
  Partitioner partitioner = Partitioner::hash;
  double shuffle_rate = 0.0;
  DurationMs update_interval_ms = 1000;
  std::vector<std::string> indicators = {"nearestfit", "hadoop", "jobratio",
                                         "taskratio"};
  NearestFitConfig nearestfit;
  BaselineConfig baselines;
  std::filesystem::path output_dir = "out";
};

/// Parses and validates a config document; throws std::invalid_argument
/// naming the offending field.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Generates the workload and splits every key's bytes round-robin across
/// the map tasks (rotation offset follows the key index so small keys do
/// not pile onto task 0).
std::vector<IntermediateKey> build_intermediate_keys(
    const ExperimentConfig& cfg);
JobSpec build_job(const ExperimentConfig& cfg);

/// Indicator factory; names: optimal, hadoop, jobratio, taskratio,
/// nearestfit, nearestfit-oracle.
std::vector<std::unique_ptr<ProgressIndicator>> make_indicators(
    const std::vector<std::string>& names, const ExecutionTrace& trace,
    const NearestFitConfig& nf, const BaselineConfig& baselines);

struct ExperimentResult {
  ExecutionTrace trace;
  std::vector<IndicatorRun> runs;
  std::vector<IndicatorSummary> summaries;
};

/// generate -> simulate -> replay -> summarize, all in memory;
/// deterministic per (config, seed).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Writes trace.json, trace_events.csv, progress.csv, swimlanes.csv,
/// summary.csv, progress.svg, swimlanes.svg under cfg.output_dir.
void write_experiment_outputs(const ExperimentConfig& cfg,
                              const ExperimentResult& result);

struct SweepPoint {
  std::string value_text;
  std::vector<IndicatorSummary> summaries;
};

struct SweepResult {
  std::string parameter;
  std::vector<SweepPoint> points;
};

/// Sweep document: {"base": <experiment config>, "sweep": {"path":
/// "workload.sigma", "values": [...]}}. Each point runs the full pipeline
/// into its own subdirectory (points are independent and run in parallel);
/// sweep_summary.csv collects one row per (value, indicator).
SweepResult run_sweep(const nlohmann::json& doc,
                      const std::filesystem::path& output_dir);
void write_sweep_summary(const std::filesystem::path& path,
                         const SweepResult& sweep);

}  // namespace mrsim
