#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "teamcoord/individual_planner.hpp"
#include "teamcoord/joint_solver.hpp"
#include "teamcoord/partial_map.hpp"
#include "teamcoord/rng.hpp"
#include "teamcoord/world_graph.hpp"

namespace teamcoord {

// Index of the member whose final goal is nearest to member `n`'s, ties to
// the smaller index; nullopt for a singleton.
inline std::optional<std::size_t> best_teammate(const WorldGraph& world, std::size_t n,
                                                std::span<const NodeId> final_goals) {
  std::optional<std::size_t> best;
  double best_d = 0.0;
  for (std::size_t m = 0; m < final_goals.size(); ++m) {
    if (m == n) continue;
    const double d = euclid(world, final_goals[n], final_goals[m]);
    if (!best || d < best_d) {
      best = m;
      best_d = d;
    }
  }
  return best;
}

inline std::vector<std::size_t> best_teammates(const WorldGraph& world, std::span<const NodeId> final_goals) {
  std::vector<std::size_t> tm(final_goals.size(), kNone);
  for (std::size_t n = 0; n < final_goals.size(); ++n)
    if (auto m = best_teammate(world, n, final_goals)) tm[n] = *m;
  return tm;
}

// Connected components of {n, teammate[n]}; each sorted, ordered by first member.
inline std::vector<std::vector<std::size_t>> clusters(std::span<const std::size_t> teammate) {
  const std::size_t k = teammate.size();
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t n = 0; n < k; ++n)
    if (teammate[n] != kNone) parent[find(n)] = find(teammate[n]);
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> slot(k, kNone);
  for (std::size_t n = 0; n < k; ++n) {
    const std::size_t r = find(n);
    if (slot[r] == kNone) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].push_back(n);
  }
  return out;
}

// Sum over members of d(SG_n, SG_TM(n)) for one assignment, computed directly.
inline double c3_direct(const WorldGraph& world, std::span<const std::size_t> teammate,
                        std::span<const NodeId> assignment) {
  double sum = 0.0;
  for (std::size_t n = 0; n < teammate.size(); ++n)
    if (teammate[n] != kNone) sum += euclid(world, assignment[n], assignment[teammate[n]]);
  return sum;
}

// The same sum factored by cluster: each cluster's share depends only on its
// own members' choices, so it is tabulated once per cluster combination.
class ClusterC3Table {
 public:
  ClusterC3Table(const WorldGraph& world, std::vector<std::size_t> teammate,
                 const std::vector<std::vector<NodeId>>& candidates)
      : clusters_(clusters(teammate)) {
    for (const auto& members : clusters_) {
      std::vector<std::size_t> radix(members.size(), 1);
      std::size_t size = 1;
      for (std::size_t i = 0; i < members.size(); ++i) {
        radix[i] = size;
        size *= candidates[members[i]].size();
      }
      std::vector<double> table(size, 0.0);
      std::vector<NodeId> chosen(teammate.size(), 0);
      for (std::size_t idx = 0; idx < size; ++idx) {
        for (std::size_t i = 0; i < members.size(); ++i) {
          const auto& list = candidates[members[i]];
          chosen[members[i]] = list[(idx / radix[i]) % list.size()];
        }
        double s = 0.0;
        for (std::size_t n : members)
          if (teammate[n] != kNone) s += euclid(world, chosen[n], chosen[teammate[n]]);
        table[idx] = s;
      }
      radices_.push_back(std::move(radix));
      tables_.push_back(std::move(table));
    }
  }

  // `choice[n]` is the index into member n's candidate list.
  double sum(std::span<const std::size_t> choice) const {
    double total = 0.0;
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < clusters_[c].size(); ++i) idx += choice[clusters_[c][i]] * radices_[c][i];
      total += tables_[c][idx];
    }
    return total;
  }

  const std::vector<std::vector<std::size_t>>& cluster_list() const { return clusters_; }

 private:
  std::vector<std::vector<std::size_t>> clusters_;
  std::vector<std::vector<std::size_t>> radices_;
  std::vector<std::vector<double>> tables_;
};

struct CoordinationRequest {
  std::vector<NodeId> positions;
  std::vector<NodeId> final_goals;
  std::vector<TypeId> types;
  std::size_t subgoal_cap = 4;
  double alpha = 1.0;
  JointSolverOptions solver;
  ExplorationPolicy policy;  // epsilon-greedy over whole assignments when rng is set
};

struct ScoredAssignment {
  std::vector<NodeId> subgoals;
  double score = 0.0;
};

struct CoordinationResult {
  JointPlanResult plan;
  std::vector<NodeId> subgoals;
  double score = 0.0;
  // Members that had no reachable candidate and were given their own node.
  std::vector<bool> no_candidates;
  // Every feasible assignment, best first (kept for inspection and tests).
  std::vector<ScoredAssignment> ranking;
};

inline bool better_assignment(const ScoredAssignment& a, const ScoredAssignment& b) {
  if (a.score != b.score) return a.score < b.score;
  return a.subgoals < b.subgoals;
}

// Group sub-goal assignment: each member picks one candidate, every
// combination is scored as sum of C1 (joint in-map cost) + C2 (Euclidean
// to final goal) + alpha * C3 (distance to the best teammate's sub-goal),
// and the cheapest combination's joint plan is returned.
inline CoordinationResult coordination_plan(const WorldGraph& world, const PartialMap& shared_map,
                                            const CoordinationRequest& req) {
  const std::size_t k = req.positions.size();
  std::vector<std::vector<NodeId>> candidates(k);
  CoordinationResult result;
  result.no_candidates.assign(k, false);
  for (std::size_t n = 0; n < k; ++n) {
    const auto scored = score_candidates(world, shared_map, req.positions[n], req.final_goals[n], req.types[n],
                                         req.subgoal_cap);
    for (const auto& c : scored) candidates[n].push_back(c.node);
    std::sort(candidates[n].begin(), candidates[n].end());
    if (candidates[n].empty()) {
      candidates[n].push_back(req.positions[n]);
      result.no_candidates[n] = true;
    }
  }

  const auto teammate = best_teammates(world, req.final_goals);
  const ClusterC3Table c3(world, teammate, candidates);
  JointSolver solver(world, shared_map, req.types, req.final_goals, req.solver);

  std::vector<std::size_t> choice(k, 0);
  std::vector<NodeId> assignment(k);
  for (;;) {
    for (std::size_t n = 0; n < k; ++n) assignment[n] = candidates[n][choice[n]];
    if (auto c1 = solver.costs(req.positions, assignment)) {
      double score = 0.0;
      for (std::size_t n = 0; n < k; ++n) score += (*c1)[n] + euclid(world, assignment[n], req.final_goals[n]);
      score += req.alpha * c3.sum(choice);
      result.ranking.push_back({assignment, score});
    }
    std::size_t n = 0;
    while (n < k && ++choice[n] == candidates[n].size()) choice[n++] = 0;
    if (n == k) break;
  }

  if (result.ranking.empty()) {
    // Unreachable only if the map lost a member's own node; stay put.
    result.subgoals = req.positions;
    result.plan = *solver.plan(req.positions, req.positions);
    return result;
  }
  std::sort(result.ranking.begin(), result.ranking.end(), better_assignment);
  std::size_t pick = 0;
  if (req.policy.rng)
    pick = epsilon_greedy_pick(std::span<const ScoredAssignment>(result.ranking), req.policy.epsilon, *req.policy.rng);
  result.subgoals = result.ranking[pick].subgoals;
  result.score = result.ranking[pick].score;
  result.plan = *solver.plan(req.positions, result.subgoals);
  return result;
}

}  // namespace teamcoord
