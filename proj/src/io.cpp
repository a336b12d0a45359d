#include "mrsim/io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mrsim {

using nlohmann::json;

namespace {

json to_json(const CostModel& m) {
  json j;
  switch (m.kind) {
    case CostKind::polynomial: j["kind"] = "polynomial"; break;
    case CostKind::product: j["kind"] = "product"; break;
    case CostKind::table: j["kind"] = "table"; break;
  }
  j["coefficient"] = m.coefficient;
  j["exponent"] = m.exponent;
  j["right_count"] = m.right_count;
  j["noise"] = m.noise;
  if (m.kind == CostKind::table) j["table"] = m.table;
  return j;
}

CostModel cost_from_json(const json& j) {
  CostModel m;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "polynomial") {
    m.kind = CostKind::polynomial;
  } else if (kind == "product") {
    m.kind = CostKind::product;
  } else if (kind == "table") {
    m.kind = CostKind::table;
  } else {
    throw std::invalid_argument("cost.kind: unknown kind '" + kind + "'");
  }
  m.coefficient = j.value("coefficient", 1.0);
  m.exponent = j.value("exponent", 1.0);
  m.right_count = j.value("right_count", std::uint64_t{1});
  m.noise = j.value("noise", 0.0);
  if (j.contains("table")) {
    m.table =
        j.at("table").get<std::vector<std::pair<std::uint64_t, double>>>();
  }
  return m;
}

const char* partitioner_name(Partitioner p) {
  switch (p) {
    case Partitioner::hash: return "hash";
    case Partitioner::random: return "random";
    case Partitioner::unbalanced: return "unbalanced";
    case Partitioner::optimal: return "optimal";
  }
  return "hash";
}

Partitioner partitioner_from_name(const std::string& s) {
  if (s == "hash") return Partitioner::hash;
  if (s == "random") return Partitioner::random;
  if (s == "unbalanced") return Partitioner::unbalanced;
  if (s == "optimal") return Partitioner::optimal;
  throw std::invalid_argument("partitioner: unknown strategy '" + s + "'");
}

json to_json(const TaskTimeline& t) {
  json j;
  j["task_id"] = t.task_id;
  j["kind"] = t.kind == TaskKind::map ? "map" : "reduce";
  j["worker"] = t.worker;
  j["start"] = t.start;
  j["end"] = t.end;
  j["input_bytes"] = t.input_bytes;
  j["pairs"] = t.pairs;
  json fns = json::array();
  for (const auto& f : t.functions) {
    fns.push_back({{"key", f.key},
                   {"size", f.size_bytes},
                   {"start", f.start},
                   {"end", f.end}});
  }
  j["functions"] = std::move(fns);
  return j;
}

TaskTimeline timeline_from_json(const json& j) {
  TaskTimeline t;
  t.task_id = j.at("task_id").get<int>();
  t.kind = j.at("kind").get<std::string>() == "map" ? TaskKind::map
                                                    : TaskKind::reduce;
  t.worker = j.at("worker").get<int>();
  t.start = j.at("start").get<SimTime>();
  t.end = j.at("end").get<SimTime>();
  t.input_bytes = j.at("input_bytes").get<std::uint64_t>();
  t.pairs = j.at("pairs").get<std::uint64_t>();
  for (const auto& f : j.at("functions")) {
    t.functions.push_back({f.at("key").get<KeyId>(),
                           f.at("size").get<std::uint64_t>(),
                           f.at("start").get<SimTime>(),
                           f.at("end").get<SimTime>()});
  }
  return t;
}

json open_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  json j;
  in >> j;
  return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

}  // namespace

void save_workload(const std::filesystem::path& path,
                   const std::vector<IntermediateKey>& keys) {
  json j;
  json arr = json::array();
  for (const auto& k : keys) {
    arr.push_back({{"key", k.key}, {"sizes", k.bytes_per_map_task}});
  }
  j["keys"] = std::move(arr);
  write_json(path, j);
}

std::vector<IntermediateKey> load_workload(const std::filesystem::path& path) {
  const json j = open_json(path);
  std::vector<IntermediateKey> keys;
  for (const auto& k : j.at("keys")) {
    IntermediateKey ik;
    ik.key = k.at("key").get<KeyId>();
    ik.bytes_per_map_task = k.at("sizes").get<std::vector<std::uint64_t>>();
    keys.push_back(std::move(ik));
  }
  return keys;
}

void save_trace(const std::filesystem::path& path,
                const ExecutionTrace& trace) {
  json j;
  json job;
  json splits = json::array();
  for (const auto& s : trace.job.map_splits) {
    splits.push_back({{"pairs", s.pairs}, {"bytes_per_pair", s.bytes_per_pair}});
  }
  job["map_splits"] = std::move(splits);
  job["map_cost"] = to_json(trace.job.map_cost);
  job["reduce_cost"] = to_json(trace.job.reduce_cost);
  json keys = json::array();
  for (const auto& k : trace.job.intermediate_keys) {
    keys.push_back({{"key", k.key}, {"sizes", k.bytes_per_map_task}});
  }
  job["intermediate_keys"] = std::move(keys);
  job["reducer_count"] = trace.job.reducer_count;
  job["partitioner"] = partitioner_name(trace.job.partitioner);
  job["shuffle_rate"] = trace.job.shuffle_rate;
  j["job"] = std::move(job);

  j["cluster"] = {{"worker_count", trace.cluster.worker_count},
                  {"slots_per_worker", trace.cluster.slots_per_worker}};
  j["seed"] = trace.seed;
  j["phases"] = {{"map_start", trace.phases.map_start},
                 {"map_end", trace.phases.map_end},
                 {"reduce_start", trace.phases.reduce_start},
                 {"job_end", trace.phases.job_end}};
  json maps = json::array();
  for (const auto& t : trace.map_tasks) maps.push_back(to_json(t));
  j["map_tasks"] = std::move(maps);
  json reds = json::array();
  for (const auto& t : trace.reduce_tasks) reds.push_back(to_json(t));
  j["reduce_tasks"] = std::move(reds);

  json emissions = json::array();
  for (const auto& per_task : trace.map_emissions) {
    json arr = json::array();
    for (const auto& e : per_task) {
      arr.push_back({{"key", e.key}, {"size", e.size_bytes},
                     {"task", e.reduce_task}});
    }
    emissions.push_back(std::move(arr));
  }
  j["map_emissions"] = std::move(emissions);
  j["key_task"] = trace.key_task;
  j["total_shuffle_bytes"] = trace.total_shuffle_bytes;
  write_json(path, j);
}

ExecutionTrace load_trace(const std::filesystem::path& path) {
  const json j = open_json(path);
  ExecutionTrace trace;
  const json& job = j.at("job");
  for (const auto& s : job.at("map_splits")) {
    trace.job.map_splits.push_back(
        {s.at("pairs").get<std::uint64_t>(),
         s.at("bytes_per_pair").get<std::uint64_t>()});
  }
  trace.job.map_cost = cost_from_json(job.at("map_cost"));
  trace.job.reduce_cost = cost_from_json(job.at("reduce_cost"));
  for (const auto& k : job.at("intermediate_keys")) {
    IntermediateKey ik;
    ik.key = k.at("key").get<KeyId>();
    ik.bytes_per_map_task = k.at("sizes").get<std::vector<std::uint64_t>>();
    trace.job.intermediate_keys.push_back(std::move(ik));
  }
  trace.job.reducer_count = job.at("reducer_count").get<int>();
  trace.job.partitioner =
      partitioner_from_name(job.at("partitioner").get<std::string>());
  trace.job.shuffle_rate = job.at("shuffle_rate").get<double>();

  trace.cluster.worker_count = j.at("cluster").at("worker_count").get<int>();
  trace.cluster.slots_per_worker =
      j.at("cluster").at("slots_per_worker").get<int>();
  trace.seed = j.at("seed").get<std::uint64_t>();
  trace.phases.map_start = j.at("phases").at("map_start").get<SimTime>();
  trace.phases.map_end = j.at("phases").at("map_end").get<SimTime>();
  trace.phases.reduce_start = j.at("phases").at("reduce_start").get<SimTime>();
  trace.phases.job_end = j.at("phases").at("job_end").get<SimTime>();
  for (const auto& t : j.at("map_tasks")) {
    trace.map_tasks.push_back(timeline_from_json(t));
  }
  for (const auto& t : j.at("reduce_tasks")) {
    trace.reduce_tasks.push_back(timeline_from_json(t));
  }
  for (const auto& per_task : j.at("map_emissions")) {
    std::vector<MapEmission> v;
    for (const auto& e : per_task) {
      v.push_back({e.at("key").get<KeyId>(), e.at("size").get<std::uint64_t>(),
                   e.at("task").get<int>()});
    }
    trace.map_emissions.push_back(std::move(v));
  }
  trace.key_task = j.at("key_task").get<std::vector<int>>();
  trace.total_shuffle_bytes = j.at("total_shuffle_bytes").get<std::uint64_t>();
  return trace;
}

}  // namespace mrsim
