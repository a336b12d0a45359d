#include "mrsim/experiment.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "mrsim/io.hpp"
#include "mrsim/nearest_fit.hpp"

namespace mrsim {

using nlohmann::json;

namespace {

CostModel parse_cost(const json& j, const std::string& field) {
  CostModel m;
  const std::string kind = j.value("kind", std::string("polynomial"));
  if (kind == "polynomial") {
    m.kind = CostKind::polynomial;
  } else if (kind == "product") {
    m.kind = CostKind::product;
  } else if (kind == "table") {
    m.kind = CostKind::table;
  } else {
    throw std::invalid_argument(field + ".kind: unknown kind '" + kind + "'");
  }
  m.coefficient = j.value("coefficient", 1.0);
  m.exponent = j.value("exponent", 1.0);
  if (m.exponent < 0.0) {
    throw std::invalid_argument(field + ".exponent: must be >= 0");
  }
  m.right_count = j.value("right_count", std::uint64_t{1});
  m.noise = j.value("noise", 0.0);
  if (m.noise < 0.0 || m.noise >= 1.0) {
    throw std::invalid_argument(field + ".noise: must lie in [0,1)");
  }
  if (j.contains("table")) {
    for (const auto& row : j.at("table")) {
      if (row.size() != 2 || row.at(0).get<double>() < 0.0) {
        throw std::invalid_argument(field + ".table: rows are [size_bytes, ms]");
      }
      m.table.emplace_back(row.at(0).get<std::uint64_t>(),
                           row.at(1).get<double>());
    }
    std::sort(m.table.begin(), m.table.end());
  }
  return m;
}

WorkloadSpec parse_workload(const json& j) {
  WorkloadSpec w;
  const std::string kind = j.value("kind", std::string("sigma_skew"));
  if (kind == "sigma_skew") {
    w.kind = WorkloadSpec::Kind::sigma_skew;
    w.skew.sigma = j.value("sigma", 1.4);
    if (!(w.skew.sigma > 1.0)) {
      throw std::invalid_argument("workload.sigma: must be > 1");
    }
    w.skew.max_group_bytes = j.value("max_group_bytes", std::uint64_t{1024});
    if (w.skew.max_group_bytes < 1) {
      throw std::invalid_argument("workload.max_group_bytes: must be >= 1");
    }
    if (j.contains("total_budget_bytes") && !j.at("total_budget_bytes").is_null()) {
      w.skew.total_budget_bytes = j.at("total_budget_bytes").get<std::uint64_t>();
    }
  } else if (kind == "zipf_join") {
    w.kind = WorkloadSpec::Kind::zipf_join;
    w.zipf.skew = j.value("skew", 1.0);
    if (!(w.zipf.skew > 0.0)) {
      throw std::invalid_argument("workload.skew: must be > 0");
    }
    w.zipf.distinct_keys = j.value("distinct_keys", std::uint64_t{1000});
    w.zipf.tuples = j.value("tuples", std::uint64_t{100000});
    if (w.zipf.distinct_keys < 1 || w.zipf.tuples < 1) {
      throw std::invalid_argument(
          "workload.distinct_keys/tuples: must be >= 1");
    }
    w.zipf.sampled = j.value("sampled", false);
  } else if (kind == "matmult") {
    w.kind = WorkloadSpec::Kind::matmult;
    w.matmult.block_count = j.value("block_count", 16);
    w.matmult.block_side = j.value("block_side", 32);
    const std::string density = j.value("density", std::string("positional"));
    if (density == "uniform") {
      w.matmult.density = MatMultDensity::uniform;
    } else if (density == "positional") {
      w.matmult.density = MatMultDensity::positional;
    } else {
      throw std::invalid_argument("workload.density: uniform or positional");
    }
  } else if (kind == "file") {
    w.kind = WorkloadSpec::Kind::file;
    if (!j.contains("path")) {
      throw std::invalid_argument("workload.path: required for kind=file");
    }
    w.file = j.at("path").get<std::string>();
  } else {
    throw std::invalid_argument("workload.kind: unknown kind '" + kind + "'");
  }
  return w;
}

Partitioner parse_partitioner(const std::string& s) {
  if (s == "hash") return Partitioner::hash;
  if (s == "random") return Partitioner::random;
  if (s == "unbalanced") return Partitioner::unbalanced;
  if (s == "optimal") return Partitioner::optimal;
  throw std::invalid_argument("partitioner: unknown strategy '" + s + "'");
}

void set_dotted_path(json& doc, const std::string& path, const json& value) {
  json* node = &doc;
  std::size_t begin = 0;
  for (;;) {
    const std::size_t dot = path.find('.', begin);
    const std::string seg = path.substr(begin, dot - begin);
    if (seg.empty()) {
      throw std::invalid_argument("sweep.path: empty segment in '" + path + "'");
    }
    if (dot == std::string::npos) {
      (*node)[seg] = value;
      return;
    }
    node = &(*node)[seg];
    begin = dot + 1;
  }
}

}  // namespace

ExperimentConfig parse_experiment_config(const json& doc) {
  ExperimentConfig cfg;
  cfg.name = doc.value("name", std::string("experiment"));
  cfg.seed = doc.value("seed", std::uint64_t{0});
  if (doc.contains("workload")) cfg.workload = parse_workload(doc.at("workload"));
  cfg.map_tasks = doc.value("map_tasks", 4);
  if (cfg.map_tasks < 1) {
    throw std::invalid_argument("map_tasks: must be >= 1");
  }
  if (doc.contains("map_split")) {
    cfg.map_split.pairs = doc.at("map_split").value("pairs", std::uint64_t{1000});
    cfg.map_split.bytes_per_pair =
        doc.at("map_split").value("bytes_per_pair", std::uint64_t{100});
  }
  if (doc.contains("map_cost")) {
    cfg.map_cost = parse_cost(doc.at("map_cost"), "map_cost");
  }
  if (doc.contains("reduce_cost")) {
    cfg.reduce_cost = parse_cost(doc.at("reduce_cost"), "reduce_cost");
  }
  if (doc.contains("cluster")) {
    cfg.cluster.worker_count = doc.at("cluster").value("workers", 1);
    cfg.cluster.slots_per_worker =
        doc.at("cluster").value("slots_per_worker", 1);
  }
  cfg.cluster.validate();
  cfg.reducers = doc.value("reducers", 1);
  if (cfg.reducers < 1) {
    throw std::invalid_argument("reducers: must be >= 1");
  }
  cfg.partitioner =
      parse_partitioner(doc.value("partitioner", std::string("hash")));
  cfg.shuffle_rate = doc.value("shuffle_rate_bytes_per_ms", 0.0);
  if (cfg.shuffle_rate < 0.0) {
    throw std::invalid_argument("shuffle_rate_bytes_per_ms: must be >= 0");
  }
  cfg.update_interval_ms =
      doc.value("update_interval_ms", DurationMs{1000});
  if (cfg.update_interval_ms <= 0) {
    throw std::invalid_argument("update_interval_ms: must be positive");
  }
  if (doc.contains("indicators")) {
    cfg.indicators = doc.at("indicators").get<std::vector<std::string>>();
  }
  if (doc.contains("nearestfit")) {
    const json& nf = doc.at("nearestfit");
    cfg.nearestfit.explicit_key_budget =
        nf.value("lambda", std::size_t{2000});
    cfg.nearestfit.master_sketch_capacity =
        nf.value("master_sketch_capacity", std::size_t{0});
    cfg.nearestfit.delta_floor_bytes = nf.value("delta_floor_bytes", 64.0);
    cfg.nearestfit.delta_fraction = nf.value("delta_fraction", 0.05);
    cfg.nearestfit.r2_threshold = nf.value("r2_threshold", 0.9);
    cfg.nearestfit.smoothing_window_ms =
        nf.value("smoothing_window_ms", DurationMs{500});
    cfg.nearestfit.burst_size_threshold_bytes =
        nf.value("burst_size_threshold_bytes", std::uint64_t{50});
    cfg.nearestfit.burst_skip_threshold =
        nf.value("burst_skip_threshold", std::size_t{100});
    cfg.nearestfit.explicit_match_tolerance =
        nf.value("explicit_match_tolerance", 0.05);
    cfg.nearestfit.histogram_capacity =
        nf.value("histogram_capacity", std::size_t{1024});
  }
  cfg.nearestfit.update_interval_ms = cfg.update_interval_ms;
  cfg.nearestfit.validate();
  if (doc.contains("baselines")) {
    const json& b = doc.at("baselines");
    cfg.baselines.ewma_enabled = b.value("ewma_enabled", false);
    cfg.baselines.ewma_alpha = b.value("ewma_alpha", 0.3);
    cfg.baselines.taskratio_warmup_fraction =
        b.value("taskratio_warmup_fraction", 0.05);
  }
  cfg.baselines.validate();
  cfg.output_dir = doc.value("output_dir", std::string("out"));
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config " + path.string());
  }
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config parse error in " + path.string() +
                                ": " + e.what());
  }
  return parse_experiment_config(doc);
}

std::vector<IntermediateKey> build_intermediate_keys(
    const ExperimentConfig& cfg) {
  std::vector<KeyGroup> groups;
  switch (cfg.workload.kind) {
    case WorkloadSpec::Kind::sigma_skew:
      groups = gen_sigma_skew(cfg.workload.skew);
      break;
    case WorkloadSpec::Kind::zipf_join:
      groups = gen_zipf_relation(cfg.workload.zipf, cfg.seed);
      break;
    case WorkloadSpec::Kind::matmult: {
      auto spec = cfg.workload.matmult;
      spec.reduce_tasks = cfg.reducers;
      const auto assignment = gen_matmult_products(spec, cfg.seed);
      for (const auto& p : assignment.products) {
        groups.push_back({p.key, p.size_bytes});
      }
      break;
    }
    case WorkloadSpec::Kind::file: {
      return load_workload(cfg.workload.file);
    }
  }

  const auto m = static_cast<std::uint64_t>(cfg.map_tasks);
  std::vector<IntermediateKey> keys;
  keys.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    IntermediateKey ik;
    ik.key = groups[i].key;
    ik.bytes_per_map_task.assign(m, groups[i].size_bytes / m);
    const std::uint64_t rem = groups[i].size_bytes % m;
    const std::uint64_t offset = i % m;
    for (std::uint64_t r = 0; r < rem; ++r) {
      ik.bytes_per_map_task[(offset + r) % m] += 1;
    }
    keys.push_back(std::move(ik));
  }
  return keys;
}

JobSpec build_job(const ExperimentConfig& cfg) {
  JobSpec job;
  job.map_splits.assign(static_cast<std::size_t>(cfg.map_tasks),
                        cfg.map_split);
  job.map_cost = cfg.map_cost;
  job.reduce_cost = cfg.reduce_cost;
  job.intermediate_keys = build_intermediate_keys(cfg);
  job.reducer_count = cfg.reducers;
  job.partitioner = cfg.partitioner;
  job.shuffle_rate = cfg.shuffle_rate;
  job.validate();
  return job;
}

std::vector<std::unique_ptr<ProgressIndicator>> make_indicators(
    const std::vector<std::string>& names, const ExecutionTrace& trace,
    const NearestFitConfig& nf, const BaselineConfig& baselines) {
  std::vector<std::unique_ptr<ProgressIndicator>> out;
  for (const auto& name : names) {
    if (name == "optimal") {
      out.push_back(std::make_unique<OptimalIndicator>(trace.phases.job_end));
    } else if (name == "hadoop") {
      out.push_back(std::make_unique<HadoopIndicator>());
    } else if (name == "jobratio") {
      out.push_back(
          std::make_unique<RatioIndicator>(RatioScope::job, baselines));
    } else if (name == "taskratio") {
      out.push_back(
          std::make_unique<RatioIndicator>(RatioScope::task, baselines));
    } else if (name == "nearestfit") {
      out.push_back(std::make_unique<NearestFitIndicator>(
          NearestFitMode::approximate, nf,
          approximate_key_distribution(trace, nf)));
    } else if (name == "nearestfit-oracle") {
      out.push_back(std::make_unique<NearestFitIndicator>(
          NearestFitMode::oracle, nf, exact_key_distribution(trace)));
    } else {
      throw std::invalid_argument("indicators: unknown indicator '" + name +
                                  "'");
    }
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  const JobSpec job = build_job(cfg);
  result.trace = run_job(job, cfg.cluster, cfg.seed);
  auto indicators = make_indicators(cfg.indicators, result.trace,
                                    cfg.nearestfit, cfg.baselines);
  result.runs = replay_with_indicators(result.trace, indicators,
                                       cfg.update_interval_ms);
  result.summaries = summarize_runs(result.trace, result.runs);
  return result;
}

void write_experiment_outputs(const ExperimentConfig& cfg,
                              const ExperimentResult& result) {
  const auto& dir = cfg.output_dir;
  std::filesystem::create_directories(dir);
  save_trace(dir / "trace.json", result.trace);
  write_trace_events_csv(dir / "trace_events.csv", result.trace);
  write_progress_csv(dir / "progress.csv", result.trace, result.runs);
  write_swimlanes_csv(dir / "swimlanes.csv", result.trace);
  write_summary_csv(dir / "summary.csv", result.summaries);
  write_progress_svg(dir / "progress.svg", result.trace, result.runs);
  write_swimlanes_svg(dir / "swimlanes.svg", result.trace);
}

SweepResult run_sweep(const json& doc,
                      const std::filesystem::path& output_dir) {
  if (!doc.contains("base") || !doc.contains("sweep")) {
    throw std::invalid_argument("sweep config: needs 'base' and 'sweep'");
  }
  const json& sweep = doc.at("sweep");
  if (!sweep.contains("path") || !sweep.contains("values")) {
    throw std::invalid_argument("sweep: needs 'path' and 'values'");
  }
  const std::string path = sweep.at("path").get<std::string>();
  const json values = sweep.at("values");
  if (!values.is_array() || values.empty()) {
    throw std::invalid_argument("sweep.values: non-empty array required");
  }

  SweepResult result;
  result.parameter = path;
  result.points.resize(values.size());

  // Parse every point up front so validation errors surface before any
  // simulation work starts.
  std::vector<ExperimentConfig> cfgs;
  for (std::size_t i = 0; i < values.size(); ++i) {
    json point = doc.at("base");
    set_dotted_path(point, path, values[i]);
    std::string text = values[i].dump();
    std::erase(text, '"');
    point["output_dir"] =
        (output_dir / (path.substr(path.rfind('.') + 1) + "=" + text))
            .string();
    cfgs.push_back(parse_experiment_config(point));
    result.points[i].value_text = text;
  }

  // Points are isolated pipelines; run them in parallel.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    try {
      const auto res = run_experiment(cfgs[i]);
      write_experiment_outputs(cfgs[i], res);
      result.points[i].summaries = res.summaries;
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

void write_sweep_summary(const std::filesystem::path& path,
                         const SweepResult& sweep) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "parameter,value,indicator,avg_err,max_err,overhead_pct\n";
  char buf[64];
  for (const auto& point : sweep.points) {
    for (const auto& row : point.summaries) {
      std::snprintf(buf, sizeof(buf), "%.4f,%.4f,%.6f", row.errors.avg,
                    row.errors.max, row.overhead.overhead_pct);
      out << sweep.parameter << ',' << point.value_text << ','
          << row.indicator << ',' << buf << '\n';
    }
  }
}

}  // namespace mrsim
