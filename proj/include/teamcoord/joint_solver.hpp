#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "teamcoord/individual_planner.hpp"
#include "teamcoord/partial_map.hpp"
#include "teamcoord/world_graph.hpp"

namespace teamcoord {

// Indices in a SupportPair refer to positions in the solved robot tuple.
struct SupportPair {
  std::size_t receiver = 0;
  std::size_t supporter = 0;
  EdgeId edge = 0;
  friend bool operator==(const SupportPair&, const SupportPair&) = default;
};

struct CoordAction {
  std::vector<std::pair<NodeId, NodeId>> moves;  // per robot; from == to is a stay
  std::vector<SupportPair> support;
  friend bool operator==(const CoordAction&, const CoordAction&) = default;
};

struct JointPlanResult {
  std::vector<Path> paths;     // equal lengths, padded with stays
  std::vector<double> costs;   // C1 per robot
  std::vector<CoordAction> trace;
  bool fallback = false;       // independent paths were used for some block

  std::size_t steps() const { return trace.size(); }
  double total_cost() const {
    double sum = 0.0;
    for (double c : costs) sum += c;
    return sum;
  }
};

struct JointSolverOptions {
  std::size_t exact_group_cap = 3;
  // Maximum plan length in steps; 0 means 3 x number of known nodes.
  std::size_t horizon = 0;
  std::size_t expansion_limit = 200000;
};

// Joint planning for a robot tuple inside one shared map.
//
// Tuples up to the exact cap are solved optimally by A* over position
// tuples. Every action moves one robot along a known edge, either alone at
// its unsupported cost or across a risky edge while a teammate stands on one
// of the edge's support nodes, at the folded cost (the supporter pays
// nothing). Since stays are free this sequential action model has the same
// optimum as simultaneous moves; the action sequence is then packed into
// parallel steps. Larger tuples are split into pairs by closeness of their
// final goals, each pair solved exactly.
class JointSolver {
 public:
  JointSolver(const WorldGraph& world, const PartialMap& map, std::vector<TypeId> types,
              std::vector<NodeId> final_goals, JointSolverOptions options = {})
      : world_(world), map_(map), types_(std::move(types)), options_(options) {
    if (options_.horizon == 0) options_.horizon = 3 * map_.nodes.size();
    for (const auto& [n, c] : map_.nodes) {
      dense_of_[n] = dense_.size();
      dense_.push_back(n);
    }
    neighbors_.resize(dense_.size());
    for (const auto& [id, e] : map_.edges) {
      neighbors_[dense_of_.at(e.u)].push_back({dense_of_.at(e.v), id});
      neighbors_[dense_of_.at(e.v)].push_back({dense_of_.at(e.u), id});
    }
    for (auto& list : neighbors_) std::sort(list.begin(), list.end());
    blocks_ = partition(final_goals);
  }

  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }

  // Per-robot C1, or nullopt if some sub-goal is unreachable.
  std::optional<std::vector<double>> costs(const std::vector<NodeId>& starts, const std::vector<NodeId>& subgoals) {
    std::vector<double> out(types_.size(), 0.0);
    for (const auto& block : blocks_) {
      auto sub = solve_block(block, starts, subgoals);
      if (!sub) return std::nullopt;
      for (std::size_t i = 0; i < block.size(); ++i) out[block[i]] = sub->costs[i];
    }
    return out;
  }

  std::optional<JointPlanResult> plan(const std::vector<NodeId>& starts, const std::vector<NodeId>& subgoals) {
    const std::size_t k = types_.size();
    std::vector<std::shared_ptr<const JointPlanResult>> parts;
    std::size_t steps = 0;
    for (const auto& block : blocks_) {
      auto sub = solve_block(block, starts, subgoals);
      if (!sub) return std::nullopt;
      steps = std::max(steps, sub->steps());
      parts.push_back(std::move(sub));
    }
    JointPlanResult out;
    out.paths.resize(k);
    out.costs.assign(k, 0.0);
    out.trace.assign(steps, CoordAction{std::vector<std::pair<NodeId, NodeId>>(k), {}});
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      const auto& block = blocks_[b];
      const auto& sub = *parts[b];
      out.fallback = out.fallback || sub.fallback;
      for (std::size_t i = 0; i < block.size(); ++i) {
        out.costs[block[i]] = sub.costs[i];
        Path p = sub.paths[i];
        p.resize(steps + 1, p.back());
        out.paths[block[i]] = std::move(p);
      }
      for (std::size_t t = 0; t < sub.trace.size(); ++t)
        for (const auto& sp : sub.trace[t].support)
          out.trace[t].support.push_back({block[sp.receiver], block[sp.supporter], sp.edge});
    }
    for (std::size_t t = 0; t < steps; ++t) {
      for (std::size_t r = 0; r < k; ++r) out.trace[t].moves[r] = {out.paths[r][t], out.paths[r][t + 1]};
      std::sort(out.trace[t].support.begin(), out.trace[t].support.end(),
                [](const SupportPair& a, const SupportPair& b) { return a.receiver < b.receiver; });
    }
    return out;
  }

 private:
  using Key = std::vector<std::size_t>;

  std::vector<std::vector<std::size_t>> partition(const std::vector<NodeId>& final_goals) const {
    const std::size_t k = types_.size();
    std::vector<std::vector<std::size_t>> blocks;
    if (k <= options_.exact_group_cap) {
      blocks.emplace_back(k);
      for (std::size_t i = 0; i < k; ++i) blocks[0][i] = i;
      return blocks;
    }
    if (options_.exact_group_cap < 2 || final_goals.size() != k) {
      for (std::size_t i = 0; i < k; ++i) blocks.push_back({i});
      return blocks;
    }
    std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        pairs.emplace_back(euclid(world_, final_goals[i], final_goals[j]), i, j);
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> used(k, false);
    for (const auto& [d, i, j] : pairs) {
      if (used[i] || used[j]) continue;
      used[i] = used[j] = true;
      blocks.push_back({i, j});
    }
    for (std::size_t i = 0; i < k; ++i)
      if (!used[i]) blocks.push_back({i});
    std::sort(blocks.begin(), blocks.end());
    return blocks;
  }

  std::shared_ptr<const JointPlanResult> solve_block(const std::vector<std::size_t>& block,
                                                     const std::vector<NodeId>& starts,
                                                     const std::vector<NodeId>& subgoals) {
    Key key;
    for (std::size_t i : block) {
      key.push_back(i);
      key.push_back(starts[i]);
      key.push_back(subgoals[i]);
    }
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::shared_ptr<const JointPlanResult> result;
    if (auto solved = solve_exact(block, starts, subgoals)) result = std::make_shared<const JointPlanResult>(std::move(*solved));
    cache_.emplace(std::move(key), result);
    return result;
  }

  std::optional<JointPlanResult> independent(const std::vector<std::size_t>& block, const std::vector<NodeId>& starts,
                                             const std::vector<NodeId>& subgoals) const {
    JointPlanResult out;
    std::size_t steps = 0;
    for (std::size_t i : block) {
      auto sp = shortest_path(world_, map_, starts[i], subgoals[i], types_[i]);
      if (!sp) return std::nullopt;
      steps = std::max(steps, sp->path.size() - 1);
      out.paths.push_back(std::move(sp->path));
      out.costs.push_back(sp->cost);
    }
    for (auto& p : out.paths) p.resize(steps + 1, p.back());
    for (std::size_t t = 0; t < steps; ++t) {
      CoordAction a;
      for (const auto& p : out.paths) a.moves.emplace_back(p[t], p[t + 1]);
      out.trace.push_back(std::move(a));
    }
    return out;
  }

  double unsupported(EdgeId e, std::size_t robot) const {
    return edge_cost(world_, map_.edges.at(e), types_[robot]);
  }

  // Per-robot lower bound on remaining cost: Dijkstra towards the sub-goal
  // with each risky edge priced at its cheapest supported or unsupported cost.
  std::vector<double> relaxed_distances(std::size_t robot, const std::vector<std::size_t>& block,
                                        std::size_t goal_dense) const {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(dense_.size(), inf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
    dist[goal_dense] = 0.0;
    open.push({0.0, goal_dense});
    while (!open.empty()) {
      auto [d, u] = open.top();
      open.pop();
      if (d > dist[u]) continue;
      for (const auto& [v, e] : neighbors_[u]) {
        const auto& spec = map_.edges.at(e);
        double w = unsupported(e, robot);
        if (spec.risky)
          for (std::size_t j : block)
            if (j != robot) w = std::min(w, folded_support_cost(world_, spec, types_[robot], types_[j]));
        if (d + w < dist[v]) {
          dist[v] = d + w;
          open.push({dist[v], v});
        }
      }
    }
    return dist;
  }

  struct Action {
    std::size_t mover = 0;  // local index within the block
    std::size_t to = 0;     // dense node
    std::size_t supporter = kNone;
    EdgeId edge = 0;
    double cost = 0.0;
  };

  std::optional<JointPlanResult> solve_exact(const std::vector<std::size_t>& block, const std::vector<NodeId>& starts,
                                             const std::vector<NodeId>& subgoals) const {
    const std::size_t k = block.size();
    for (std::size_t i : block)
      if (!map_.contains(starts[i]) || !map_.contains(subgoals[i])) return std::nullopt;
    if (k == 1) return independent(block, starts, subgoals);

    const std::uint64_t m = dense_.size();
    std::vector<std::uint64_t> radix(k, 1);
    for (std::size_t i = 1; i < k; ++i) {
      if (radix[i - 1] > std::numeric_limits<std::uint64_t>::max() / (m * m)) return independent(block, starts, subgoals);
      radix[i] = radix[i - 1] * m;
    }
    std::vector<std::vector<double>> h(k);
    for (std::size_t i = 0; i < k; ++i) {
      h[i] = relaxed_distances(block[i], block, dense_of_.at(subgoals[block[i]]));
      if (!std::isfinite(h[i][dense_of_.at(starts[block[i]])])) return std::nullopt;
    }
    auto encode = [&](const std::vector<std::size_t>& pos) {
      std::uint64_t code = 0;
      for (std::size_t i = 0; i < k; ++i) code += pos[i] * radix[i];
      return code;
    };
    auto decode = [&](std::uint64_t code) {
      std::vector<std::size_t> pos(k);
      for (std::size_t i = 0; i < k; ++i) pos[i] = static_cast<std::size_t>((code / radix[i]) % m);
      return pos;
    };
    auto heuristic = [&](const std::vector<std::size_t>& pos) {
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += h[i][pos[i]];
      return sum;
    };

    std::vector<std::size_t> start_pos(k), goal_pos(k);
    for (std::size_t i = 0; i < k; ++i) {
      start_pos[i] = dense_of_.at(starts[block[i]]);
      goal_pos[i] = dense_of_.at(subgoals[block[i]]);
    }
    const std::uint64_t start_code = encode(start_pos);
    const std::uint64_t goal_code = encode(goal_pos);

    struct Label {
      double g;
      std::size_t moves;
      std::uint64_t parent;
      Action action;
      bool closed;
    };
    std::unordered_map<std::uint64_t, Label> labels;
    // (f, moves, state, g); the trailing g identifies stale entries.
    using Entry = std::tuple<double, std::size_t, std::uint64_t, double>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    labels[start_code] = {0.0, 0, start_code, {}, false};
    open.push({heuristic(start_pos), 0, start_code, 0.0});

    std::size_t expansions = 0;
    bool found = false;
    while (!open.empty()) {
      const auto [f, moves, code, entry_g] = open.top();
      open.pop();
      Label& label = labels.at(code);
      if (label.closed || moves != label.moves || entry_g != label.g) continue;
      label.closed = true;
      if (code == goal_code) {
        found = true;
        break;
      }
      if (++expansions > options_.expansion_limit) break;
      const double g = label.g;
      const auto pos = decode(code);
      auto relax = [&](std::size_t mover, std::size_t to, std::size_t supporter, EdgeId edge, double cost) {
        auto next = pos;
        next[mover] = to;
        const std::uint64_t next_code = encode(next);
        const double ng = g + cost;
        auto [it, inserted] = labels.try_emplace(next_code, Label{ng, moves + 1, code, {mover, to, supporter, edge, cost}, false});
        if (!inserted) {
          Label& old = it->second;
          if (!(ng < old.g || (ng == old.g && moves + 1 < old.moves))) return;
          old = {ng, moves + 1, code, {mover, to, supporter, edge, cost}, false};
        }
        open.push({ng + heuristic(next), moves + 1, next_code, ng});
      };
      for (std::size_t i = 0; i < k; ++i) {
        for (const auto& [to, e] : neighbors_[pos[i]]) {
          const double plain = unsupported(e, block[i]);
          relax(i, to, kNone, e, plain);
          const auto& spec = map_.edges.at(e);
          if (!spec.risky) continue;
          for (std::size_t j = 0; j < k; ++j) {
            if (j == i || !spec.supported_from(dense_[pos[j]])) continue;
            const double folded = folded_support_cost(world_, spec, types_[block[i]], types_[block[j]]);
            if (folded < plain) relax(i, to, j, e, folded);
          }
        }
      }
    }
    if (!found) return independent_fallback(block, starts, subgoals);

    std::vector<Action> actions;
    for (std::uint64_t c = goal_code; c != start_code;) {
      const Label& l = labels.at(c);
      actions.push_back(l.action);
      c = l.parent;
    }
    std::reverse(actions.begin(), actions.end());

    // Pack sequential actions into parallel steps: an action goes one step
    // after the latest step already used by its mover or its supporter.
    std::vector<std::size_t> last(k, 0);
    std::vector<std::size_t> step_of(actions.size());
    std::size_t steps = 0;
    for (std::size_t a = 0; a < actions.size(); ++a) {
      const auto& act = actions[a];
      std::size_t s = last[act.mover];
      if (act.supporter != kNone) s = std::max(s, last[act.supporter]);
      step_of[a] = s + 1;
      last[act.mover] = s + 1;
      if (act.supporter != kNone) last[act.supporter] = s + 1;
      steps = std::max(steps, s + 1);
    }
    if (steps > options_.horizon) return independent_fallback(block, starts, subgoals);

    JointPlanResult out;
    out.costs.assign(k, 0.0);
    out.paths.assign(k, Path(steps + 1));
    std::vector<std::vector<std::size_t>> step_pos(steps + 1, start_pos);
    out.trace.assign(steps, CoordAction{std::vector<std::pair<NodeId, NodeId>>(k), {}});
    std::vector<std::vector<std::size_t>> moved_at(k, std::vector<std::size_t>(steps + 1, kNone));
    for (std::size_t a = 0; a < actions.size(); ++a) {
      moved_at[actions[a].mover][step_of[a]] = actions[a].to;
      out.costs[actions[a].mover] += actions[a].cost;
      if (actions[a].supporter != kNone)
        out.trace[step_of[a] - 1].support.push_back({actions[a].mover, actions[a].supporter, actions[a].edge});
    }
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t here = start_pos[i];
      out.paths[i][0] = dense_[here];
      for (std::size_t t = 1; t <= steps; ++t) {
        if (moved_at[i][t] != kNone) here = moved_at[i][t];
        out.paths[i][t] = dense_[here];
      }
    }
    for (std::size_t t = 0; t < steps; ++t)
      for (std::size_t i = 0; i < k; ++i) out.trace[t].moves[i] = {out.paths[i][t], out.paths[i][t + 1]};
    return out;
  }

  std::optional<JointPlanResult> independent_fallback(const std::vector<std::size_t>& block,
                                                      const std::vector<NodeId>& starts,
                                                      const std::vector<NodeId>& subgoals) const {
    auto out = independent(block, starts, subgoals);
    if (out) out->fallback = true;
    return out;
  }

  const WorldGraph& world_;
  const PartialMap& map_;
  std::vector<TypeId> types_;
  JointSolverOptions options_;
  std::vector<NodeId> dense_;
  std::map<NodeId, std::size_t> dense_of_;
  std::vector<std::vector<std::pair<std::size_t, EdgeId>>> neighbors_;
  std::vector<std::vector<std::size_t>> blocks_;
  std::map<Key, std::shared_ptr<const JointPlanResult>> cache_;
};

// One-shot joint solve; `final_goals` drives the pairing used above the exact cap.
inline std::optional<JointPlanResult> tcgre_local_solve(const WorldGraph& world, const PartialMap& shared_map,
                                                        const std::vector<NodeId>& starts,
                                                        const std::vector<NodeId>& subgoals,
                                                        const std::vector<TypeId>& types,
                                                        const std::vector<NodeId>& final_goals,
                                                        JointSolverOptions options = {}) {
  JointSolver solver(world, shared_map, types, final_goals.empty() ? subgoals : final_goals, options);
  return solver.plan(starts, subgoals);
}

}  // namespace teamcoord
