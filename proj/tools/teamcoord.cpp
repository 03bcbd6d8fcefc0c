#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "teamcoord/teamcoord.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kFailure = 2, kInvalid = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerateArgs {
  teamcoord::GeneratorOptions gen;
  teamcoord::ScenarioParams params;
  std::string out;
};

struct RunArgs {
  std::string scenario;
  std::string variant = "full";
  std::string trace;
  std::string handshakes;
  bool validate = false;
};

struct ExperimentArgs {
  std::string spec_file;
  teamcoord::ExperimentSpec spec;
  std::vector<std::string> variants;
  std::string out;
  std::size_t jobs = 0;
};

void add_param_flags(CLI::App* cmd, teamcoord::ScenarioParams& p) {
  cmd->add_option("--T", p.time_limit, "time limit in steps (0: 10 x nodes)");
  cmd->add_option("--alpha", p.alpha, "teammate-proximity weight")->check(CLI::NonNegativeNumber);
  cmd->add_option("--epsilon", p.epsilon, "probability of the best pick")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--K", p.subgoal_cap, "sub-goal candidate cap")->check(CLI::PositiveNumber);
  cmd->add_option("--jmax", p.exact_group_cap, "largest group solved jointly")->check(CLI::PositiveNumber);
}

int cmd_generate(GenerateArgs& a) {
  if (a.gen.num_robots > a.gen.num_nodes)
    throw UsageError("--robots (" + std::to_string(a.gen.num_robots) + ") exceeds --nodes (" +
                     std::to_string(a.gen.num_nodes) + ")");
  auto scenario = teamcoord::generate_scenario(a.gen);
  const auto sensing = scenario.params.sensing_factor;
  const auto comm = scenario.params.communication_factor;
  scenario.params = a.params;
  scenario.params.sensing_factor = sensing;
  scenario.params.communication_factor = comm;
  scenario.params.seed = a.gen.seed;
  scenario.validate();
  if (a.out.empty() || a.out == "-")
    std::cout << teamcoord::scenario_to_string(scenario);
  else
    teamcoord::save_scenario(scenario, a.out);
  std::cerr << "seed " << a.gen.seed << '\n';
  return kOk;
}

int cmd_run(const RunArgs& a) {
  const auto variant = teamcoord::parse_variant(a.variant);
  const auto scenario = teamcoord::load_scenario(a.scenario);
  const auto result = teamcoord::run(scenario, variant);
  std::printf("total_cost %.6f\n", result.total_cost);
  std::printf("steps %zu\n", result.steps_used);
  std::printf("truncated %s\n", result.truncated ? "yes" : "no");
  std::printf("messages %zu\n", result.messages_sent);
  std::printf("runtime_ms %.3f\n", result.runtime_ms);
  if (!a.trace.empty()) {
    std::ofstream out(a.trace);
    if (!out) throw std::runtime_error("cannot open " + a.trace);
    teamcoord::write_trace_csv(out, result.records);
  }
  if (!a.handshakes.empty()) {
    std::ofstream out(a.handshakes);
    if (!out) throw std::runtime_error("cannot open " + a.handshakes);
    teamcoord::write_handshake_csv(out, teamcoord::collect_handshakes(result.records));
  }
  if (a.validate) {
    const auto violations = teamcoord::validate(scenario, result);
    for (const auto& v : violations)
      std::fprintf(stderr, "violation t=%zu robot=%zu %s: %s\n", v.t, v.robot, teamcoord::to_string(v.constraint),
                   v.detail.c_str());
    if (!violations.empty()) return kInvalid;
    std::printf("valid\n");
  }
  return kOk;
}

int cmd_experiment(ExperimentArgs& a) {
  auto spec = a.spec;
  if (!a.spec_file.empty()) spec = teamcoord::load_experiment_spec(a.spec_file);
  if (!a.variants.empty()) {
    spec.variants.clear();
    for (const auto& v : a.variants) spec.variants.push_back(teamcoord::parse_variant(v));
  }
  spec.validate();
  const auto rows = teamcoord::run_experiment(spec, a.jobs);
  if (a.out.empty() || a.out == "-") {
    teamcoord::write_metrics_csv(std::cout, rows);
  } else {
    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot open " + a.out);
    teamcoord::write_metrics_csv(out, rows);
  }

  std::map<std::string, std::pair<double, std::size_t>> mean;
  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (r.status != "ok") {
      ++failed;
      continue;
    }
    auto& m = mean[teamcoord::to_string(r.variant)];
    m.first += r.total_cost;
    ++m.second;
  }
  std::fprintf(stderr, "%zu runs, %zu failed\n", rows.size(), failed);
  for (const auto& [name, m] : mean) std::fprintf(stderr, "  %-8s mean cost %.4f\n", name.c_str(), m.first / m.second);
  return failed ? kFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous robot team coordination on graphs with risky edges"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "write a random scenario file");
  g->add_option("--nodes", gen.gen.num_nodes, "number of nodes")->check(CLI::PositiveNumber);
  g->add_option("--density", gen.gen.edge_density, "fraction of all node pairs that get an edge")
      ->check(CLI::Range(0.0, 1.0));
  g->add_option("--risky", gen.gen.risky_fraction, "fraction of edges that are risky")->check(CLI::Range(0.0, 1.0));
  g->add_option("--robots", gen.gen.num_robots, "number of robots");
  g->add_option("--types", gen.gen.num_types, "number of robot types")
      ->check(CLI::Range(std::size_t{1}, teamcoord::kMaxRobotTypes));
  g->add_option("--sensing", gen.gen.sensing_factor, "sensing factor")->check(CLI::NonNegativeNumber);
  g->add_option("--comm", gen.gen.communication_factor, "communication factor")->check(CLI::NonNegativeNumber);
  g->add_option("--seed", gen.gen.seed, "generator and run seed");
  g->add_option("-o,--out", gen.out, "output file (default stdout)");
  add_param_flags(g, gen.params);

  RunArgs run;
  auto* r = app.add_subcommand("run", "simulate one scenario");
  r->add_option("scenario", run.scenario, "scenario file")->required();
  r->add_option("--variant", run.variant, "naive, full, no_c3 or epsilon");
  r->add_option("--trace", run.trace, "write per-step trace CSV");
  r->add_option("--handshake", run.handshakes, "write handshake log CSV");
  r->add_flag("--validate", run.validate, "check the trace against the movement constraints");

  ExperimentArgs exp;
  auto* e = app.add_subcommand("experiment", "run a factorial sweep and write metrics CSV");
  e->add_option("--spec", exp.spec_file, "JSON experiment spec (overrides the flags below)");
  e->add_option("--graphs", exp.spec.num_graphs, "graphs per setting")->check(CLI::PositiveNumber);
  e->add_option("--nodes", exp.spec.num_nodes, "nodes per graph")->check(CLI::PositiveNumber);
  e->add_option("--density", exp.spec.edge_density, "edge density")->check(CLI::Range(0.0, 1.0));
  e->add_option("--risky", exp.spec.risky_fraction, "risky fraction")->check(CLI::Range(0.0, 1.0));
  e->add_option("--robots", exp.spec.num_robots, "robots per scenario");
  e->add_option("--types", exp.spec.type_counts, "robot type counts H")->delimiter(',');
  e->add_option("--sensing", exp.spec.sensing_factors, "sensing factors")->delimiter(',');
  e->add_option("--comm", exp.spec.communication_factors, "communication factors")->delimiter(',');
  e->add_option("--variants", exp.variants, "variants to run")->delimiter(',');
  e->add_option("--seed", exp.spec.base_seed, "seed of the first graph");
  e->add_option("--out", exp.out, "metrics CSV (default stdout)");
  e->add_option("--jobs", exp.jobs, "worker threads (0: all cores)");
  add_param_flags(e, exp.spec.params);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return cmd_generate(gen);
    if (*r) return cmd_run(run);
    if (*e) return cmd_experiment(exp);
  } catch (const UsageError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
