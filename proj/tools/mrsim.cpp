#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrsim/experiment.hpp"
#include "mrsim/io.hpp"
#include "mrsim/metrics.hpp"
#include "mrsim/nearest_fit.hpp"
#include "mrsim/reports.hpp"

namespace {

using mrsim::ExperimentConfig;
using nlohmann::json;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (begin <= s.size()) {
    const std::size_t comma = s.find(',', begin);
    out.push_back(s.substr(begin, comma - begin));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return out;
}

int run_gen(const std::string& kind, double sigma, std::uint64_t max_group,
            std::optional<std::uint64_t> budget, double zskew,
            std::uint64_t distinct, std::uint64_t tuples, bool sampled,
            int block_count, int block_side, int map_tasks,
            std::uint64_t seed, const std::string& out_path) {
  ExperimentConfig cfg;
  cfg.map_tasks = map_tasks;
  cfg.seed = seed;
  if (kind == "sigma_skew") {
    cfg.workload.kind = mrsim::WorkloadSpec::Kind::sigma_skew;
    cfg.workload.skew = {sigma, max_group, budget};
  } else if (kind == "zipf_join") {
    cfg.workload.kind = mrsim::WorkloadSpec::Kind::zipf_join;
    cfg.workload.zipf = {zskew, distinct, tuples, sampled};
  } else if (kind == "matmult") {
    cfg.workload.kind = mrsim::WorkloadSpec::Kind::matmult;
    cfg.workload.matmult.block_count = block_count;
    cfg.workload.matmult.block_side = block_side;
  } else {
    throw std::invalid_argument("gen --kind: unknown generator '" + kind + "'");
  }
  const auto keys = mrsim::build_intermediate_keys(cfg);
  mrsim::save_workload(out_path, keys);
  std::uint64_t bytes = 0;
  for (const auto& k : keys) bytes += k.total_bytes();
  std::printf("wrote %zu keys (%llu bytes) to %s\n", keys.size(),
              static_cast<unsigned long long>(bytes), out_path.c_str());
  return 0;
}

int run_simulate(const std::string& config_path, std::uint64_t seed,
                 const std::string& out_dir) {
  auto cfg = mrsim::load_experiment_config(config_path);
  cfg.seed = seed;  // --seed is mandatory and wins over the config
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  const auto job = mrsim::build_job(cfg);
  const auto trace = mrsim::run_job(job, cfg.cluster, cfg.seed);
  std::filesystem::create_directories(cfg.output_dir);
  mrsim::save_trace(cfg.output_dir / "trace.json", trace);
  mrsim::write_trace_events_csv(cfg.output_dir / "trace_events.csv", trace);
  std::printf("trace: map %lld ms, shuffle %lld ms, reduce %lld ms -> %s\n",
              static_cast<long long>(trace.phases.map_end),
              static_cast<long long>(trace.phases.reduce_start -
                                     trace.phases.map_end),
              static_cast<long long>(trace.reduce_phase_ms()),
              (cfg.output_dir / "trace.json").c_str());
  return 0;
}

int run_replay(const std::string& trace_path, const std::string& config_path,
               const std::string& indicator_csv, std::int64_t interval,
               const std::string& out_dir) {
  const auto trace = mrsim::load_trace(trace_path);
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = mrsim::load_experiment_config(config_path);
  if (!indicator_csv.empty()) cfg.indicators = split_csv(indicator_csv);
  if (interval > 0) cfg.update_interval_ms = interval;
  auto indicators = mrsim::make_indicators(cfg.indicators, trace,
                                           cfg.nearestfit, cfg.baselines);
  const auto runs =
      mrsim::replay_with_indicators(trace, indicators, cfg.update_interval_ms);
  std::filesystem::create_directories(out_dir);
  mrsim::write_progress_csv(std::filesystem::path(out_dir) / "progress.csv",
                            trace, runs);
  json meta;
  for (const auto& run : runs) {
    meta["profiles"][run.indicator] = {
        {"map_profile_bytes", run.map_profile_bytes},
        {"reduce_profile_bytes", run.reduce_profile_bytes}};
  }
  std::ofstream(std::filesystem::path(out_dir) / "replay_meta.json")
      << meta.dump(2) << '\n';
  std::printf("replayed %zu indicators over %zu query points -> %s\n",
              runs.size(), runs.empty() ? 0 : runs.front().series.size(),
              out_dir.c_str());
  return 0;
}

int run_report(const std::string& trace_path, const std::string& progress_path,
               const std::string& meta_path, const std::string& out_dir) {
  const auto trace = mrsim::load_trace(trace_path);
  std::filesystem::create_directories(out_dir);

  // Rebuild per-indicator series from progress.csv.
  std::ifstream in(progress_path);
  if (!in) throw std::runtime_error("cannot open " + progress_path);
  std::string line;
  std::getline(in, line);  // header
  std::vector<mrsim::IndicatorRun> runs;
  auto find_run = [&](const std::string& name) -> mrsim::IndicatorRun& {
    for (auto& r : runs) {
      if (r.indicator == name) return r;
    }
    runs.push_back({name, {}, 0, 0});
    return runs.back();
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() < 5) continue;
    find_run(cols[1]).series.push_back(
        {std::stoll(cols[0]), std::stod(cols[2])});
  }
  if (!meta_path.empty()) {
    std::ifstream meta_in(meta_path);
    if (meta_in) {
      json meta;
      meta_in >> meta;
      for (auto& run : runs) {
        if (meta.contains("profiles") &&
            meta.at("profiles").contains(run.indicator)) {
          const auto& p = meta.at("profiles").at(run.indicator);
          run.map_profile_bytes = p.value("map_profile_bytes", 0ULL);
          run.reduce_profile_bytes = p.value("reduce_profile_bytes", 0ULL);
        }
      }
    }
  }
  const auto summaries = mrsim::summarize_runs(trace, runs);
  const std::filesystem::path dir(out_dir);
  mrsim::write_summary_csv(dir / "summary.csv", summaries);
  mrsim::write_swimlanes_csv(dir / "swimlanes.csv", trace);
  mrsim::write_progress_svg(dir / "progress.svg", trace, runs);
  mrsim::write_swimlanes_svg(dir / "swimlanes.svg", trace);
  for (const auto& s : summaries) {
    std::printf("%-18s avgErr %8.4f  maxErr %8.4f  overhead %.6f%%\n",
                s.indicator.c_str(), s.errors.avg, s.errors.max,
                s.overhead.overhead_pct);
  }
  return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_dir) {
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open config " + config_path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("sweep config parse error: ") +
                                e.what());
  }
  const std::filesystem::path dir =
      out_dir.empty() ? std::filesystem::path(doc.value("output_dir", "sweep"))
                      : std::filesystem::path(out_dir);
  const auto result = mrsim::run_sweep(doc, dir);
  mrsim::write_sweep_summary(dir / "sweep_summary.csv", result);
  std::printf("swept %s over %zu values -> %s\n", result.parameter.c_str(),
              result.points.size(), (dir / "sweep_summary.csv").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "MapReduce execution simulator and progress-prediction laboratory"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a workload file");
  std::string gen_kind = "sigma_skew";
  double sigma = 1.4, zskew = 1.0;
  std::uint64_t max_group = 1024, distinct = 1000, tuples = 100000;
  std::uint64_t gen_seed = 0;
  std::optional<std::uint64_t> budget;
  bool sampled = false;
  int block_count = 16, block_side = 32, gen_map_tasks = 4;
  std::string gen_out = "workload.json";
  gen->add_option("--kind", gen_kind, "sigma_skew | zipf_join | matmult");
  gen->add_option("--sigma", sigma, "skew factor (> 1)");
  gen->add_option("--max-group-bytes", max_group, "largest group size");
  gen->add_option("--budget-bytes", budget, "total byte budget");
  gen->add_option("--skew", zskew, "zipf skew (> 0)");
  gen->add_option("--distinct-keys", distinct, "zipf distinct keys");
  gen->add_option("--tuples", tuples, "zipf tuple count");
  gen->add_flag("--sampled", sampled, "zipf: sample instead of quotas");
  gen->add_option("--block-count", block_count, "matmult blocks (square)");
  gen->add_option("--block-side", block_side, "matmult block side");
  gen->add_option("--map-tasks", gen_map_tasks, "map tasks to split across");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--output", gen_out, "output workload file");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run one job simulation");
  std::string sim_config, sim_out;
  std::uint64_t sim_seed = 0;
  sim->add_option("--config", sim_config, "experiment config (JSON)")
      ->required();
  sim->add_option("--seed", sim_seed, "simulation seed")->required();
  sim->add_option("-o,--output", sim_out, "output directory");

  // replay
  auto* rep = app.add_subcommand("replay", "replay a trace with indicators");
  std::string rep_trace, rep_config, rep_indicators, rep_out = "out";
  std::int64_t rep_interval = 0;
  rep->add_option("--trace", rep_trace, "trace.json path")->required();
  rep->add_option("--config", rep_config, "experiment config (JSON)");
  rep->add_option("--indicators", rep_indicators, "comma-separated names");
  rep->add_option("--update-interval-ms", rep_interval, "query interval");
  rep->add_option("-o,--output", rep_out, "output directory");

  // report
  auto* report = app.add_subcommand("report", "emit CSV/SVG reports");
  std::string report_trace, report_progress, report_meta, report_out = "out";
  report->add_option("--trace", report_trace, "trace.json path")->required();
  report->add_option("--progress", report_progress, "progress.csv path")
      ->required();
  report->add_option("--replay-meta", report_meta, "replay_meta.json path");
  report->add_option("-o,--output", report_out, "output directory");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  std::string sweep_config, sweep_out;
  sweep->add_option("--config", sweep_config, "sweep config (JSON)")
      ->required();
  sweep->add_option("-o,--output", sweep_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return run_gen(gen_kind, sigma, max_group, budget, zskew, distinct,
                     tuples, sampled, block_count, block_side, gen_map_tasks,
                     gen_seed, gen_out);
    }
    if (sim->parsed()) return run_simulate(sim_config, sim_seed, sim_out);
    if (rep->parsed()) {
      return run_replay(rep_trace, rep_config, rep_indicators, rep_interval,
                        rep_out);
    }
    if (report->parsed()) {
      return run_report(report_trace, report_progress, report_meta,
                        report_out);
    }
    if (sweep->parsed()) return run_sweep_cmd(sweep_config, sweep_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
