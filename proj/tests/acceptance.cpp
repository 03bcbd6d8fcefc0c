// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "teamcoord/teamcoord.hpp"

using namespace teamcoord;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

constexpr Variant kAll[] = {Variant::naive, Variant::full, Variant::no_c3, Variant::epsilon};

ScenarioConfig generated(std::uint64_t seed, double sensing, double comm) {
  GeneratorOptions opt;
  opt.num_nodes = 20;
  opt.edge_density = 0.5;
  opt.risky_fraction = 0.2;
  opt.num_robots = 7;
  opt.num_types = 2;
  opt.seed = seed;
  auto s = generate_scenario(opt);
  s.params.sensing_factor = sensing;
  s.params.communication_factor = comm;
  return s;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::size_t instances = 0, matched = 0, supported = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; instances < 60; ++seed) {
    ScenarioConfig s;
    try {
      s = oracle::small_instance(seed, 2);
    } catch (const GraphError&) {
      continue;
    }
    ++instances;
    const auto result = run(s, Variant::full);
    const auto map = oracle::full_map(s.graph);
    const oracle::JointBruteForce brute(s.graph, map, {s.robots[0].type, s.robots[1].type});
    const double best = brute.optimum({s.robots[0].start, s.robots[1].start}, {s.robots[0].goal, s.robots[1].goal});
    const double gap = std::abs(result.total_cost - best);
    worst = std::max(worst, gap);
    if (!result.truncated && gap <= 1e-9) ++matched;
    supported += best < run(s, Variant::naive).total_cost - 1e-9;
  }
  const double secs = seconds_since(t0);
  return {matched == instances && secs < 10.0,
          fmt("%zu/%zu instances match brute-force optimum (%zu gain from support), max gap %.3g, %.2f s",
              matched, instances, supported, worst, secs)};
}

Outcome shortest_path_oracle() {
  Rng rng(2718);
  std::size_t instances = 0, queries = 0, mismatches = 0;
  while (instances < 120) {
    GeneratorOptions opt;
    opt.num_nodes = 3 + rng.index(6);
    opt.edge_density = rng.uniform(0.3, 1.0);
    opt.risky_fraction = 0.3;
    opt.num_robots = 1;
    opt.num_types = 1 + rng.index(3);
    opt.seed = rng.next();
    ScenarioConfig s;
    try {
      s = generate_scenario(opt);
    } catch (const GraphError&) {
      continue;
    }
    ++instances;
    const auto& g = s.graph;
    auto map = oracle::full_map(g);
    if (instances % 2) {
      map = {};
      for (int k = 0; k < 2; ++k) absorb(map, sense(g, rng.index(g.num_nodes()), 0, rng.uniform(0.2, 0.8)));
    }
    for (const auto& [from, a] : map.nodes)
      for (const auto& [to, b] : map.nodes)
        for (TypeId t = 0; t < g.num_types(); ++t) {
          ++queries;
          const double want = oracle::min_simple_path_cost(g, map, from, to, t);
          const auto got = shortest_path(g, map, from, to, t);
          if (std::isinf(want) ? got.has_value() : (!got || got->cost != want)) {
            // exact match except summation order; allow only representation noise
            if (!(got && std::abs(got->cost - want) <= 1e-12 * std::max(1.0, want))) ++mismatches;
          }
        }
  }
  return {mismatches == 0, fmt("%zu instances, %zu queries, %zu mismatches", instances, queries, mismatches)};
}

Outcome coordination_benefit() {
  const auto fixture = oracle::support_fixture();
  const double full_fx = run(fixture, Variant::full).total_cost;
  const double naive_fx = run(fixture, Variant::naive).total_cost;
  const bool fixture_ok = full_fx == 3.0 && naive_fx == 10.0;

  double full_sum = 0.0, naive_sum = 0.0;
  const int n = 25;
  for (int seed = 1; seed <= n; ++seed) {
    const auto s = generated(static_cast<std::uint64_t>(seed), 2.0, 2.0);
    full_sum += run(s, Variant::full).total_cost;
    naive_sum += run(s, Variant::naive).total_cost;
  }
  const bool mean_ok = full_sum <= naive_sum;
  return {fixture_ok && mean_ok, fmt("fixture full %.6g naive %.6g; %d scenarios mean full %.4f vs naive %.4f", full_fx,
                                     naive_fx, n, full_sum / n, naive_sum / n)};
}

Outcome constraint_suite() {
  std::size_t runs = 0, violations = 0;
  std::string first;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const double sensing = 0.2 + 0.2 * static_cast<double>(seed % 3);
    const double comm = 0.2 * static_cast<double>(seed % 4);
    const auto s = generated(1000 + seed, sensing, comm);
    for (Variant v : kAll) {
      const auto r = run(s, v);
      const auto found = validate(s, r);
      ++runs;
      violations += found.size();
      if (!found.empty() && first.empty())
        first = fmt(" (first: seed %llu %s t=%zu %s)", static_cast<unsigned long long>(seed), to_string(v),
                    found[0].t, found[0].detail.c_str());
    }
  }
  return {violations == 0, fmt("%zu runs, %zu violations", runs, violations) + first};
}

bool includes(const PartialMap& big, const PartialMap& small) {
  for (const auto& [n, c] : small.nodes)
    if (!big.contains(n)) return false;
  for (const auto& [id, e] : small.edges)
    if (!big.knows_edge(id)) return false;
  for (NodeId n : small.adjacency_complete)
    if (!big.adjacency_complete.count(n)) return false;
  return true;
}

Outcome map_algebra() {
  Rng rng(1618);
  std::size_t fixtures = 0, failures = 0;
  auto observe = [&](const WorldGraph& g) {
    PartialMap m;
    const std::size_t discs = rng.index(4);
    for (std::size_t i = 0; i < discs; ++i)
      absorb(m, sense_radius(g, rng.index(g.num_nodes()), rng.uniform(0.0, 0.7) * g.graph_length()));
    return m;
  };
  for (; fixtures < 1200; ++fixtures) {
    GeneratorOptions opt;
    opt.num_nodes = 3 + rng.index(15);
    opt.edge_density = 0.7;
    opt.num_robots = 1;
    opt.seed = rng.next();
    const auto g = generate_scenario(opt).graph;
    const auto a = observe(g), b = observe(g), c = observe(g);
    const auto ab = merge_maps(a, b);
    const bool ok = ab == merge_maps(b, a) && merge_maps(ab, c) == merge_maps(a, merge_maps(b, c)) &&
                    merge_maps(a, a) == a && merge_maps(a, {}) == a && includes(ab, a) && includes(ab, b) &&
                    update_map(a, b) == ab;
    failures += !ok;
  }

  // Per-robot monotonicity over simulated runs.
  std::size_t steps = 0, shrinks = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Simulation sim(generated(seed, 0.3, 0.4), Variant::full);
    std::vector<PartialMap> last(sim.robots().size());
    while (sim.step()) {
      ++steps;
      for (const auto& r : sim.robots()) {
        shrinks += !includes(r.map, last[r.id]);
        last[r.id] = r.map;
      }
    }
  }
  return {failures == 0 && shrinks == 0,
          fmt("%zu fixtures, %zu law failures; %zu simulated steps, %zu map shrinks", fixtures, failures, steps, shrinks)};
}

Outcome degenerate_equivalence() {
  std::size_t same = 0;
  const std::size_t n = 25;
  for (std::uint64_t seed = 0; seed < n; ++seed) {
    const auto s = generated(500 + seed, 0.2 + 0.2 * static_cast<double>(seed % 3), 0.0);
    same += trace_csv(run(s, Variant::full).records) == trace_csv(run(s, Variant::naive).records);
  }
  return {same == n, fmt("%zu/%zu seeds give identical full and naive traces", same, n)};
}

Outcome determinism() {
  std::size_t same = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto s = generated(700 + seed, 0.2 + 0.2 * static_cast<double>(seed % 3), 0.4);
    // Round-trip the scenario so the rerun starts from the serialized form.
    const auto again = scenario_from_string(scenario_to_string(s));
    for (Variant v : kAll) {
      ++total;
      same += trace_csv(run(s, v).records) == trace_csv(run(again, v).records);
    }
  }
  return {same == total, fmt("%zu/%zu (seed, variant) reruns byte-identical", same, total)};
}

Outcome qualitative_trend() {
  const ExperimentSpec spec;
  const auto t0 = Clock::now();
  const auto rows = run_experiment(spec, 0);
  const double secs = seconds_since(t0);

  std::map<double, std::map<Variant, std::pair<double, int>>> by;
  std::size_t failed = 0;
  for (const auto& r : rows) {
    if (r.status != "ok") {
      ++failed;
      continue;
    }
    auto& m = by[r.sensing_factor][r.variant];
    m.first += r.total_cost;
    ++m.second;
  }
  int settings_ok = 0;
  std::string table;
  for (const auto& [sf, means] : by) {
    const double naive = means.at(Variant::naive).first / means.at(Variant::naive).second;
    bool ok = true;
    table += fmt(" [sf %.1f: naive %.3f", sf, naive);
    for (Variant v : {Variant::full, Variant::no_c3, Variant::epsilon}) {
      const double mean = means.at(v).first / means.at(v).second;
      table += fmt(" %s %.3f", to_string(v), mean);
      ok = ok && naive >= mean;
    }
    table += "]";
    settings_ok += ok;
  }
  return {failed == 0 && settings_ok >= 2 && secs < 600.0,
          fmt("%zu runs in %.1f s, naive highest in %d/%zu sensing settings;", rows.size(), secs, settings_ok,
              by.size()) +
              table};
}

Outcome epsilon_frequency() {
  const std::vector<int> candidates{0, 1, 2};
  Rng rng(20240601);
  int best = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) best += epsilon_greedy_pick(std::span<const int>(candidates), 0.5, rng) == 0;
  const double freq = best / static_cast<double>(draws);
  return {std::abs(freq - 0.5) <= 0.03, fmt("best picked %.4f of %d draws", freq, draws)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
      {"oracle-equivalence", oracle_equivalence},
      {"shortest-path-oracle", shortest_path_oracle},
      {"coordination-benefit", coordination_benefit},
      {"constraint-suite", constraint_suite},
      {"map-algebra", map_algebra},
      {"degenerate-equivalence", degenerate_equivalence},
      {"determinism", determinism},
      {"qualitative-trend", qualitative_trend},
      {"epsilon-greedy-frequency", epsilon_frequency},
  };
  int failed = 0;
  for (const auto& [name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
