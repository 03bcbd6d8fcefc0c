#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "teamcoord/partial_map.hpp"
#include "teamcoord/rng.hpp"
#include "teamcoord/world_graph.hpp"

namespace teamcoord {

using Path = std::vector<NodeId>;

struct PlanResult {
  Path path;
  double cost = 0.0;
  friend bool operator==(const PlanResult&, const PlanResult&) = default;
};

// Single-source shortest paths inside a partial map, priced at each edge's
// unsupported cost for `robot_type`. Ties between equal-cost paths go to the
// lexicographically smallest node sequence.
inline std::map<NodeId, PlanResult> shortest_path_tree(const WorldGraph& world, const PartialMap& map, NodeId from,
                                                      TypeId robot_type) {
  std::map<NodeId, PlanResult> settled;
  if (!map.contains(from)) return settled;
  const auto adj = map.adjacency();
  using Label = std::pair<double, Path>;
  std::set<Label> open;
  std::map<NodeId, Label> best;
  best[from] = {0.0, {from}};
  open.insert(best[from]);
  while (!open.empty()) {
    Label top = *open.begin();
    open.erase(open.begin());
    const NodeId node = top.second.back();
    if (settled.count(node)) continue;
    settled[node] = {top.second, top.first};
    for (const auto& inc : adj.at(node)) {
      if (settled.count(inc.neighbor)) continue;
      Label next{top.first + edge_cost(world, map.edges.at(inc.edge), robot_type), top.second};
      next.second.push_back(inc.neighbor);
      auto it = best.find(inc.neighbor);
      if (it == best.end() || next < it->second) {
        if (it != best.end()) open.erase(it->second);
        best[inc.neighbor] = next;
        open.insert(std::move(next));
      }
    }
  }
  return settled;
}

inline std::optional<PlanResult> shortest_path(const WorldGraph& world, const PartialMap& map, NodeId from, NodeId to,
                                               TypeId robot_type) {
  auto tree = shortest_path_tree(world, map, from, robot_type);
  auto it = tree.find(to);
  if (it == tree.end()) return std::nullopt;
  return it->second;
}

// Sub-goal candidates for a robot at `current` heading to `final_goal`.
// A known goal is the only candidate. Otherwise: frontier nodes (known but
// not adjacency-complete), minus the current node and minus frontier nodes
// whose known neighbors are all known leaves, truncated to the `cap` nodes
// nearest the goal. An empty result means there is nowhere to go.
inline std::vector<NodeId> candidate_subgoals(const WorldGraph& world, const PartialMap& map, NodeId current,
                                              NodeId final_goal, std::size_t cap) {
  if (map.contains(final_goal)) return {final_goal};
  const auto adj = map.adjacency();
  auto dead_end = [&](NodeId n) {
    return n != current && map.adjacency_complete.count(n) && adj.at(n).size() <= 1;
  };
  std::vector<std::pair<double, NodeId>> ranked;
  for (const auto& [n, c] : map.nodes) {
    if (n == current || map.adjacency_complete.count(n)) continue;
    const auto& known = adj.at(n);
    const bool trapped = std::all_of(known.begin(), known.end(), [&](const auto& inc) { return dead_end(inc.neighbor); });
    if (trapped) continue;
    ranked.emplace_back(euclid(world, n, final_goal), n);
  }
  std::sort(ranked.begin(), ranked.end());
  if (ranked.size() > cap) ranked.resize(cap);
  std::vector<NodeId> out;
  for (const auto& [d, n] : ranked) out.push_back(n);
  return out;
}

struct SubgoalCandidate {
  NodeId node = 0;
  double in_map_cost = 0.0;  // C1
  double heuristic = 0.0;    // C2
  Path path;
  double score() const { return in_map_cost + heuristic; }
};

// Ranking used everywhere a best sub-goal is chosen: score, then C1, then id.
inline bool better_candidate(const SubgoalCandidate& a, const SubgoalCandidate& b) {
  if (a.score() != b.score()) return a.score() < b.score();
  if (a.in_map_cost != b.in_map_cost) return a.in_map_cost < b.in_map_cost;
  return a.node < b.node;
}

// Reachable candidates scored by C1 + C2 and sorted best first.
inline std::vector<SubgoalCandidate> score_candidates(const WorldGraph& world, const PartialMap& map, NodeId current,
                                                      NodeId final_goal, TypeId robot_type, std::size_t cap) {
  std::vector<SubgoalCandidate> scored;
  const auto nodes = candidate_subgoals(world, map, current, final_goal, cap);
  if (nodes.empty()) return scored;
  const auto tree = shortest_path_tree(world, map, current, robot_type);
  for (NodeId n : nodes) {
    auto it = tree.find(n);
    if (it == tree.end()) continue;
    scored.push_back({n, it->second.cost, euclid(world, n, final_goal), it->second.path});
  }
  std::sort(scored.begin(), scored.end(), better_candidate);
  return scored;
}

// With probability epsilon take the first (best) item, otherwise one of the
// others uniformly. `ranked` must be sorted best first.
template <class T>
std::size_t epsilon_greedy_pick(std::span<const T> ranked, double epsilon, Rng& rng) {
  if (ranked.size() <= 1) return 0;
  if (rng.uniform01() < epsilon) return 0;
  return 1 + rng.index(ranked.size() - 1);
}

struct IndividualPlan {
  PlanResult plan;
  std::optional<NodeId> subgoal;  // empty: no candidate, the robot stays
  double score = 0.0;
};

struct ExplorationPolicy {
  double epsilon = 1.0;
  Rng* rng = nullptr;  // null: always greedy
};

inline IndividualPlan individual_plan(const WorldGraph& world, const PartialMap& map, NodeId current, NodeId final_goal,
                                      TypeId robot_type, std::size_t cap, ExplorationPolicy policy = {}) {
  const auto scored = score_candidates(world, map, current, final_goal, robot_type, cap);
  if (scored.empty()) return {{{current}, 0.0}, std::nullopt, 0.0};
  std::size_t pick = 0;
  if (policy.rng) pick = epsilon_greedy_pick(std::span<const SubgoalCandidate>(scored), policy.epsilon, *policy.rng);
  const auto& c = scored[pick];
  return {{c.path, c.in_map_cost}, c.node, c.score()};
}

}  // namespace teamcoord
