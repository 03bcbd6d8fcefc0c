#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "teamcoord/scenario.hpp"
#include "teamcoord/simulator.hpp"
#include "teamcoord/trace_io.hpp"

namespace teamcoord {

struct ExperimentSpec {
  std::size_t num_graphs = 10;
  std::size_t num_nodes = 20;
  double edge_density = 0.5;
  double risky_fraction = 0.2;
  std::size_t num_robots = 7;
  std::vector<std::size_t> type_counts{2};
  std::vector<double> sensing_factors{0.2, 0.4, 0.6};
  std::vector<double> communication_factors{0.2, 0.4, 0.6};
  std::vector<Variant> variants{Variant::naive, Variant::full, Variant::no_c3, Variant::epsilon};
  std::uint64_t base_seed = 1;
  // Run parameters shared by every scenario of the sweep.
  ScenarioParams params;

  std::size_t run_count() const {
    return num_graphs * type_counts.size() * sensing_factors.size() * communication_factors.size() * variants.size();
  }

  void validate() const {
    if (num_graphs == 0 || type_counts.empty() || sensing_factors.empty() || communication_factors.empty() ||
        variants.empty())
      throw std::invalid_argument("experiment spec: every dimension needs at least one value");
  }
};

inline ExperimentSpec experiment_from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  auto get = [&](const char* key, auto& into) {
    if (j.contains(key)) into = j.at(key).get<std::decay_t<decltype(into)>>();
  };
  get("num_graphs", spec.num_graphs);
  get("num_nodes", spec.num_nodes);
  get("edge_density", spec.edge_density);
  get("risky_fraction", spec.risky_fraction);
  get("num_robots", spec.num_robots);
  get("type_counts", spec.type_counts);
  get("sensing_factors", spec.sensing_factors);
  get("communication_factors", spec.communication_factors);
  get("base_seed", spec.base_seed);
  if (j.contains("variants")) {
    spec.variants.clear();
    for (const auto& v : j.at("variants")) spec.variants.push_back(parse_variant(v.get<std::string>()));
  }
  auto& p = spec.params;
  get("T", p.time_limit);
  get("alpha", p.alpha);
  get("epsilon", p.epsilon);
  get("K", p.subgoal_cap);
  get("J_max", p.exact_group_cap);
  spec.validate();
  return spec;
}

inline ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open experiment spec " + path);
  return experiment_from_json(nlohmann::json::parse(in));
}

struct MetricsRow {
  std::uint64_t graph_seed = 0;
  Variant variant = Variant::full;
  std::size_t num_types = 1;
  double sensing_factor = 0.0;
  double communication_factor = 0.0;
  double total_cost = 0.0;
  std::size_t steps_used = 0;
  bool truncated = false;
  double runtime_ms = 0.0;
  std::size_t messages_sent = 0;
  std::string status = "ok";
};

inline constexpr const char* kMetricsHeader =
    "graph_seed,variant,H,sensing_factor,communication_factor,total_cost,steps_used,truncated,runtime_ms,"
    "messages_sent,status";

inline void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << kMetricsHeader << '\n';
  for (const auto& r : rows) {
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << r.graph_seed << ',' << to_string(r.variant) << ',' << r.num_types << ',' << format_double(r.sensing_factor)
        << ',' << format_double(r.communication_factor) << ',' << format_double(r.total_cost) << ',' << r.steps_used
        << ',' << (r.truncated ? 1 : 0) << ',' << format_double(r.runtime_ms) << ',' << r.messages_sent << ','
        << status << '\n';
  }
}

struct ExperimentCell {
  std::uint64_t graph_seed;
  std::size_t num_types;
  double sensing_factor;
  double communication_factor;
  Variant variant;
};

// Factorial order: graph, H, sensing, communication, variant (last fastest).
inline std::vector<ExperimentCell> experiment_cells(const ExperimentSpec& spec) {
  std::vector<ExperimentCell> cells;
  for (std::size_t g = 0; g < spec.num_graphs; ++g)
    for (std::size_t h : spec.type_counts)
      for (double s : spec.sensing_factors)
        for (double c : spec.communication_factors)
          for (Variant v : spec.variants) cells.push_back({spec.base_seed + g, h, s, c, v});
  return cells;
}

inline ScenarioConfig experiment_scenario(const ExperimentSpec& spec, const ExperimentCell& cell) {
  GeneratorOptions opt;
  opt.num_nodes = spec.num_nodes;
  opt.edge_density = spec.edge_density;
  opt.risky_fraction = spec.risky_fraction;
  opt.num_robots = spec.num_robots;
  opt.num_types = cell.num_types;
  opt.seed = cell.graph_seed;
  auto scenario = generate_scenario(opt);
  scenario.params = spec.params;
  scenario.params.sensing_factor = cell.sensing_factor;
  scenario.params.communication_factor = cell.communication_factor;
  scenario.params.seed = cell.graph_seed;
  return scenario;
}

inline MetricsRow run_cell(const ExperimentSpec& spec, const ExperimentCell& cell) {
  MetricsRow row;
  row.graph_seed = cell.graph_seed;
  row.variant = cell.variant;
  row.num_types = cell.num_types;
  row.sensing_factor = cell.sensing_factor;
  row.communication_factor = cell.communication_factor;
  try {
    const auto scenario = experiment_scenario(spec, cell);
    const auto result = run(scenario, cell.variant);
    row.total_cost = result.total_cost;
    row.steps_used = result.steps_used;
    row.truncated = result.truncated;
    row.runtime_ms = result.runtime_ms;
    row.messages_sent = result.messages_sent;
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

// Runs every cell on `jobs` worker threads; rows come back in cell order.
inline std::vector<MetricsRow> run_experiment(const ExperimentSpec& spec, std::size_t jobs = 0) {
  spec.validate();
  const auto cells = experiment_cells(spec);
  std::vector<MetricsRow> rows(cells.size());
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cells.size();) rows[i] = run_cell(spec, cells[i]);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < jobs; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace teamcoord
