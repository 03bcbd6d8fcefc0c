#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "teamcoord/rng.hpp"
#include "teamcoord/world_graph.hpp"

namespace teamcoord {

struct RobotSpec {
  TypeId type = 0;
  NodeId start = 0;
  NodeId goal = 0;
  friend bool operator==(const RobotSpec&, const RobotSpec&) = default;
};

struct ScenarioParams {
  double sensing_factor = 1.0;
  double communication_factor = 1.0;
  // Time limit in steps; 0 means "10 x number of nodes".
  std::size_t time_limit = 0;
  double alpha = 1.0;
  double epsilon = 0.9;
  std::size_t subgoal_cap = 4;
  std::size_t exact_group_cap = 3;
  std::uint64_t seed = 0;
  friend bool operator==(const ScenarioParams&, const ScenarioParams&) = default;
};

struct ScenarioConfig {
  WorldGraph graph;
  std::vector<RobotSpec> robots;
  ScenarioParams params;

  std::size_t effective_time_limit() const {
    return params.time_limit > 0 ? params.time_limit : 10 * graph.num_nodes();
  }

  void validate() const {
    if (robots.empty()) throw std::invalid_argument("scenario has no robots");
    for (std::size_t i = 0; i < robots.size(); ++i) {
      const auto& r = robots[i];
      if (r.start >= graph.num_nodes() || r.goal >= graph.num_nodes())
        throw std::invalid_argument("robot " + std::to_string(i) + ": start/goal out of range");
      if (r.type >= graph.num_types())
        throw std::invalid_argument("robot " + std::to_string(i) + ": unknown type");
    }
    if (!(params.sensing_factor >= 0.0) || !(params.communication_factor >= 0.0))
      throw std::invalid_argument("sensing/communication factors must be non-negative");
    if (!(params.alpha >= 0.0)) throw std::invalid_argument("alpha must be non-negative");
    if (!(params.epsilon >= 0.0 && params.epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in [0,1]");
    if (params.subgoal_cap == 0 || params.exact_group_cap == 0)
      throw std::invalid_argument("K and J_max must be positive");
  }

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct GeneratorOptions {
  std::size_t num_nodes = 20;
  double edge_density = 0.5;
  double risky_fraction = 0.2;
  std::size_t num_robots = 7;
  // Robots get types round-robin over [0, num_types).
  std::size_t num_types = 1;
  double sensing_factor = 1.0;
  double communication_factor = 1.0;
  std::uint64_t seed = 0;
};

inline constexpr double kRiskyCostFactor = 10.0;
inline constexpr std::size_t kMaxRobotTypes = 16;

// Per-type table used by the generator. Multipliers stay below the bound
// that keeps every folded cost under the unsupported cost.
inline std::vector<RobotTypeSpec> default_robot_types(std::size_t count) {
  if (count == 0 || count > kMaxRobotTypes)
    throw std::invalid_argument("number of robot types must be in [1, " + std::to_string(kMaxRobotTypes) + "]");
  std::vector<RobotTypeSpec> types;
  for (std::size_t h = 0; h < count; ++h) {
    const double k = static_cast<double>(h);
    types.push_back({1.0 + 0.25 * k, 1.0 + 0.2 * k, 1.0 + 0.1 * k});
  }
  return types;
}

// Random scenario: nodes uniform in the unit square, a random spanning tree
// plus uniformly chosen extra edges, a fraction of edges marked risky.
inline ScenarioConfig generate_scenario(const GeneratorOptions& opt) {
  const std::size_t n = opt.num_nodes;
  if (n < 2) throw std::invalid_argument("num_nodes must be >= 2");
  if (!(opt.edge_density > 0.0 && opt.edge_density <= 1.0)) throw std::invalid_argument("edge_density must be in (0,1]");
  if (!(opt.risky_fraction >= 0.0 && opt.risky_fraction <= 1.0))
    throw std::invalid_argument("risky_fraction must be in [0,1]");
  if (opt.num_robots == 0) throw std::invalid_argument("num_robots must be positive");
  if (opt.num_robots > n) throw std::invalid_argument("num_robots exceeds num_nodes");
  auto types = default_robot_types(opt.num_types);

  const std::size_t max_edges = n * (n - 1) / 2;
  const auto edge_count = static_cast<std::size_t>(std::llround(opt.edge_density * static_cast<double>(max_edges)));
  if (edge_count < n - 1) throw GraphError("edge_density too low to connect the graph");
  const auto risky_count = static_cast<std::size_t>(std::llround(opt.risky_fraction * static_cast<double>(edge_count)));
  if (risky_count > 0 && n < 3) throw GraphError("risky edges need at least one non-endpoint support node");

  Rng rng(opt.seed);
  std::vector<Coord> nodes(n);
  for (auto& c : nodes) {
    c.x = rng.uniform01();
    c.y = rng.uniform01();
  }

  std::vector<std::vector<bool>> present(n, std::vector<bool>(n, false));
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), NodeId{0});
  rng.shuffle(order);
  for (std::size_t i = 1; i < n; ++i) {
    const NodeId a = order[i];
    const NodeId b = order[rng.index(i)];
    present[a][b] = present[b][a] = true;
    pairs.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::vector<std::pair<NodeId, NodeId>> rest;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (!present[a][b]) rest.emplace_back(a, b);
  rng.shuffle(rest);
  rest.resize(edge_count - pairs.size());
  pairs.insert(pairs.end(), rest.begin(), rest.end());
  std::sort(pairs.begin(), pairs.end());

  std::vector<EdgeSpec> edges;
  edges.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    EdgeSpec e;
    e.u = a;
    e.v = b;
    const double length = distance(nodes[a], nodes[b]);
    e.base_cost = std::max(length * rng.uniform(1.0, 2.0), 1e-6);
    edges.push_back(std::move(e));
  }

  std::vector<EdgeId> ids(edges.size());
  std::iota(ids.begin(), ids.end(), EdgeId{0});
  rng.shuffle(ids);
  ids.resize(risky_count);
  std::sort(ids.begin(), ids.end());
  const std::size_t h = types.size();
  double min_mult = types[0].edge_cost_multiplier;
  for (const auto& t : types) min_mult = std::min(min_mult, t.edge_cost_multiplier);
  for (EdgeId id : ids) {
    auto& e = edges[id];
    const double pre = e.base_cost;
    e.risky = true;
    e.base_cost = pre * kRiskyCostFactor;

    const Coord mid{(nodes[e.u].x + nodes[e.v].x) / 2.0, (nodes[e.u].y + nodes[e.v].y) / 2.0};
    std::vector<std::pair<double, NodeId>> near;
    for (NodeId k = 0; k < n; ++k)
      if (k != e.u && k != e.v) near.emplace_back(distance(nodes[k], mid), k);
    std::sort(near.begin(), near.end());
    const std::size_t count = std::min<std::size_t>(1 + rng.index(2), near.size());
    for (std::size_t i = 0; i < count; ++i) e.support_nodes.push_back(near[i].second);
    std::sort(e.support_nodes.begin(), e.support_nodes.end());

    e.reduced_cost.assign(h, std::vector<double>(h, 0.0));
    for (TypeId r = 0; r < h; ++r)
      for (TypeId s = 0; s < h; ++s)
        e.reduced_cost[r][s] = pre * types[r].edge_cost_multiplier * types[s].edge_cost_multiplier;
    e.support_cost.resize(h);
    for (TypeId s = 0; s < h; ++s)
      e.support_cost[s] = rng.uniform(0.0, 0.5 * pre * min_mult * types[s].edge_cost_multiplier);
  }

  ScenarioConfig config;
  config.graph = WorldGraph(std::move(nodes), std::move(edges), std::move(types));

  std::vector<NodeId> starts(n);
  std::iota(starts.begin(), starts.end(), NodeId{0});
  rng.shuffle(starts);
  std::vector<NodeId> goals(n);
  std::iota(goals.begin(), goals.end(), NodeId{0});
  // Goal draws are retried so that no robot starts on its own goal.
  for (int attempt = 0; attempt < 1000; ++attempt) {
    rng.shuffle(goals);
    bool clash = false;
    for (std::size_t i = 0; i < opt.num_robots; ++i) clash = clash || goals[i] == starts[i];
    if (!clash) break;
  }
  for (std::size_t i = 0; i < opt.num_robots; ++i)
    config.robots.push_back({i % opt.num_types, starts[i], goals[i]});

  config.params.sensing_factor = opt.sensing_factor;
  config.params.communication_factor = opt.communication_factor;
  config.params.seed = opt.seed;
  return config;
}

}  // namespace teamcoord
