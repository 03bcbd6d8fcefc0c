#pragma once

#include <chrono>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "teamcoord/communication.hpp"
#include "teamcoord/coordination_planner.hpp"
#include "teamcoord/individual_planner.hpp"
#include "teamcoord/partial_map.hpp"
#include "teamcoord/rng.hpp"
#include "teamcoord/scenario.hpp"

namespace teamcoord {

enum class Variant { naive, full, no_c3, epsilon };

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::naive: return "naive";
    case Variant::full: return "full";
    case Variant::no_c3: return "no_c3";
    case Variant::epsilon: return "epsilon";
  }
  return "?";
}

inline Variant parse_variant(std::string_view name) {
  if (name == "naive") return Variant::naive;
  if (name == "full") return Variant::full;
  if (name == "no_c3") return Variant::no_c3;
  if (name == "epsilon") return Variant::epsilon;
  throw std::invalid_argument("unknown variant '" + std::string(name) + "' (expected naive, full, no_c3, epsilon)");
}

// Planner produced a move that the world does not allow.
class IntegrityFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum SupportRole : int { kSupporter = -1, kNoSupport = 0, kReceiver = 1 };

struct ExecutedMove {
  NodeId from = 0;
  NodeId to = 0;
  double cost = 0.0;
  int support_role = kNoSupport;
  RobotId partner = kNone;
  friend bool operator==(const ExecutedMove&, const ExecutedMove&) = default;
};

struct RobotState {
  RobotId id = 0;
  TypeId type = 0;
  NodeId position = 0;
  NodeId goal = 0;
  PartialMap map;
  bool done = false;
  std::vector<ExecutedMove> executed;
};

struct RobotStep {
  RobotId robot = 0;
  NodeId from = 0;
  NodeId to = 0;
  double cost = 0.0;
  int support_role = kNoSupport;
  RobotId partner = kNone;
  std::size_t group_id = 0;
  // Nothing was planned for this robot (no candidate or plan exhausted).
  bool idle = false;
  // The traversed edge was in the robot's partial map (always true for stays).
  bool known_edge = true;
  friend bool operator==(const RobotStep&, const RobotStep&) = default;
};

struct RecordedPair {
  RobotId receiver = 0;
  RobotId supporter = 0;
  EdgeId edge = 0;
  friend bool operator==(const RecordedPair&, const RecordedPair&) = default;
};

struct StepRecord {
  std::size_t t = 0;
  std::vector<std::vector<RobotId>> groups;
  std::vector<RobotStep> moves;  // one per robot active at this step, by id
  std::vector<RecordedPair> pairs;
  HandshakeLog handshakes;

  double cost() const {
    double sum = 0.0;
    for (const auto& m : moves) sum += m.cost;
    return sum;
  }
  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

struct RunResult {
  std::vector<Path> paths;
  double total_cost = 0.0;
  std::size_t steps_used = 0;
  bool truncated = false;
  std::vector<StepRecord> records;
  double runtime_ms = 0.0;
  std::size_t messages_sent = 0;
};

// Time-stepped team loop. Each step: sense, form communication groups and
// share maps, replan groups whose knowledge or membership changed, then
// every robot executes the first step of its plan.
class Simulation {
 public:
  static constexpr std::size_t kStuckSteps = 3;

  Simulation(const ScenarioConfig& scenario, Variant variant)
      : scenario_(scenario), variant_(variant), time_limit_(scenario.effective_time_limit()) {
    scenario_.validate();
    for (RobotId i = 0; i < scenario_.robots.size(); ++i) {
      const auto& spec = scenario_.robots[i];
      robots_.push_back({i, spec.type, spec.start, spec.goal, {}, false, {}});
      plans_.emplace_back();
      rngs_.emplace_back(mix_seed(scenario_.params.seed, i));
    }
  }

  const std::vector<RobotState>& robots() const { return robots_; }
  std::size_t time() const { return t_; }
  double total_cost() const { return total_cost_; }
  bool all_done() const {
    for (const auto& r : robots_)
      if (!r.done) return false;
    return true;
  }

  // One synchronized tick; nullopt once every robot is done or T is reached.
  std::optional<StepRecord> step() {
    settle_arrivals();
    if (all_done() || t_ >= time_limit_) return std::nullopt;

    std::vector<RobotId> active;
    for (auto& r : robots_) {
      if (r.done) continue;
      active.push_back(r.id);
      absorb(r.map, sense(scenario_.graph, r.position, r.type, scenario_.params.sensing_factor));
    }

    StepRecord record;
    record.t = t_;
    std::vector<RobotGroup> groups;
    if (variant_ == Variant::naive) {
      for (RobotId id : active) groups.push_back({{id}, {}});
    } else {
      std::vector<CommAgent> agents;
      for (RobotId id : active) agents.push_back({id, robots_[id].type, robots_[id].position, &robots_[id].map});
      auto grouping = build_groups(scenario_.graph, agents, scenario_.params.communication_factor, t_);
      groups = std::move(grouping.groups);
      record.handshakes = std::move(grouping.handshakes);
      for (const auto& g : groups)
        if (g.members.size() > 1)
          for (RobotId id : g.members) absorb(robots_[id].map, g.shared_map);
    }

    std::vector<std::size_t> group_of(robots_.size(), kNone);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      record.groups.push_back(groups[gi].members);
      for (RobotId id : groups[gi].members) group_of[id] = gi;
      if (needs_replan(groups[gi].members)) replan(groups[gi].members);
    }

    settle_arrivals();
    std::vector<RobotId> movers;
    for (RobotId id : active)
      if (!robots_[id].done) movers.push_back(id);
    if (movers.empty()) return std::nullopt;

    bool all_idle = true;
    for (RobotId id : movers) all_idle = all_idle && plans_[id].steps.empty();
    bool force = false;
    if (all_idle) {
      force = stuck_steps_ >= kStuckSteps;
      stuck_steps_ = force ? 0 : stuck_steps_ + 1;
    } else {
      stuck_steps_ = 0;
    }

    std::vector<RobotStep> moves;
    for (RobotId id : movers) {
      auto& r = robots_[id];
      auto& plan = plans_[id];
      RobotStep s;
      s.robot = id;
      s.from = r.position;
      s.to = r.position;
      s.group_id = group_of[id];
      if (!plan.steps.empty()) {
        const auto& next = plan.steps.front();
        s.to = next.to;
        s.support_role = next.role;
        s.partner = next.partner;
        plan.steps.pop_front();
      } else if (force) {
        if (auto to = cheapest_known_neighbor(r)) s.to = *to;
        else s.idle = true;
        plan.valid = false;
      } else {
        s.idle = true;
      }
      moves.push_back(s);
    }

    for (auto& s : moves) price(s, moves, record);
    for (auto& s : moves) {
      auto& r = robots_[s.robot];
      r.executed.push_back({s.from, s.to, s.cost, s.support_role, s.partner});
      r.position = s.to;
      total_cost_ += s.cost;
    }
    record.moves = std::move(moves);
    ++t_;
    return record;
  }

  RunResult run() {
    const auto begin = std::chrono::steady_clock::now();
    RunResult result;
    while (auto record = step()) {
      result.messages_sent += record->handshakes.size();
      result.records.push_back(std::move(*record));
    }
    settle_arrivals();
    result.total_cost = total_cost_;
    result.steps_used = t_;
    result.truncated = !all_done();
    for (const auto& r : robots_) {
      Path p{scenario_.robots[r.id].start};
      for (const auto& m : r.executed) p.push_back(m.to);
      result.paths.push_back(std::move(p));
    }
    result.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - begin).count();
    return result;
  }

 private:
  struct PlannedStep {
    NodeId to = 0;
    int role = kNoSupport;
    RobotId partner = kNone;
  };

  struct RobotPlan {
    bool valid = false;
    std::deque<PlannedStep> steps;
    std::vector<RobotId> group;
    std::size_t map_size = 0;
    bool no_candidates = false;
  };

  bool exhausted(const RobotPlan& plan, const RobotState& r) const {
    for (const auto& s : plan.steps)
      if (s.to != r.position || s.role != kNoSupport) return false;
    return true;
  }

  // Robots standing on their goal with nothing left to do leave the team.
  void settle_arrivals() {
    for (auto& r : robots_) {
      if (r.done || r.position != r.goal) continue;
      if (plans_[r.id].valid && exhausted(plans_[r.id], r)) r.done = true;
    }
  }

  bool needs_replan(const std::vector<RobotId>& members) const {
    for (RobotId id : members) {
      const auto& plan = plans_[id];
      const auto& r = robots_[id];
      if (!plan.valid || plan.group != members || plan.map_size != r.map.size()) return true;
      if (plan.steps.empty() && !plan.no_candidates && r.position != r.goal) return true;
    }
    return false;
  }

  ExplorationPolicy policy_for(RobotId id) {
    if (variant_ != Variant::epsilon) return {};
    return {scenario_.params.epsilon, &rngs_[id]};
  }

  void replan(const std::vector<RobotId>& members) {
    const auto& world = scenario_.graph;
    const auto& params = scenario_.params;
    if (members.size() == 1) {
      const RobotId id = members.front();
      auto& r = robots_[id];
      auto ip = individual_plan(world, r.map, r.position, r.goal, r.type, params.subgoal_cap, policy_for(id));
      auto& plan = plans_[id];
      plan = {true, {}, members, r.map.size(), !ip.subgoal.has_value()};
      for (std::size_t i = 1; i < ip.plan.path.size(); ++i) plan.steps.push_back({ip.plan.path[i], kNoSupport, kNone});
      return;
    }
    CoordinationRequest req;
    for (RobotId id : members) {
      req.positions.push_back(robots_[id].position);
      req.final_goals.push_back(robots_[id].goal);
      req.types.push_back(robots_[id].type);
    }
    req.subgoal_cap = params.subgoal_cap;
    req.alpha = variant_ == Variant::no_c3 ? 0.0 : params.alpha;
    req.solver.exact_group_cap = params.exact_group_cap;
    req.policy = policy_for(members.front());
    const auto& shared = robots_[members.front()].map;
    const auto result = coordination_plan(world, shared, req);
    for (std::size_t i = 0; i < members.size(); ++i) {
      auto& plan = plans_[members[i]];
      plan = {true, {}, members, robots_[members[i]].map.size(), result.no_candidates[i]};
      for (const auto& action : result.plan.trace) {
        PlannedStep s{action.moves[i].second, kNoSupport, kNone};
        for (const auto& sp : action.support) {
          if (sp.receiver == i) s = {s.to, kReceiver, members[sp.supporter]};
          if (sp.supporter == i) s = {s.to, kSupporter, members[sp.receiver]};
        }
        plan.steps.push_back(s);
      }
    }
  }

  std::optional<NodeId> cheapest_known_neighbor(const RobotState& r) const {
    std::optional<NodeId> best;
    double best_cost = 0.0;
    for (const auto& inc : r.map.incident(r.position)) {
      const double c = edge_cost(scenario_.graph, scenario_.graph.edge(inc.edge), r.type);
      if (!best || c < best_cost) {
        best = inc.neighbor;
        best_cost = c;
      }
    }
    return best;
  }

  void price(RobotStep& s, const std::vector<RobotStep>& all, StepRecord& record) const {
    const auto& world = scenario_.graph;
    const auto& r = robots_[s.robot];
    if (s.from == s.to) {
      s.cost = 0.0;
      if (s.support_role == kReceiver) throw IntegrityFault("receiver robot " + std::to_string(s.robot) + " did not move");
      return;
    }
    const auto edge = world.find_edge(s.from, s.to);
    if (!edge)
      throw IntegrityFault("robot " + std::to_string(s.robot) + " planned a move along a non-edge " +
                           std::to_string(s.from) + "-" + std::to_string(s.to));
    s.known_edge = r.map.knows_edge(*edge);
    const auto& spec = world.edge(*edge);
    if (s.support_role == kSupporter) throw IntegrityFault("supporter robot " + std::to_string(s.robot) + " moved");
    if (s.support_role != kReceiver) {
      s.cost = edge_cost(world, spec, r.type);
      return;
    }
    const RobotStep* partner = nullptr;
    for (const auto& o : all)
      if (o.robot == s.partner) partner = &o;
    if (!partner || partner->support_role != kSupporter || partner->partner != s.robot || partner->from != partner->to ||
        !spec.risky || !spec.supported_from(partner->from) || partner->group_id != s.group_id)
      throw IntegrityFault("robot " + std::to_string(s.robot) + " planned an invalid supported crossing");
    s.cost = folded_support_cost(world, spec, r.type, robots_[s.partner].type);
    record.pairs.push_back({s.robot, s.partner, *edge});
  }

  ScenarioConfig scenario_;
  Variant variant_;
  std::size_t time_limit_;
  std::vector<RobotState> robots_;
  std::vector<RobotPlan> plans_;
  std::vector<Rng> rngs_;
  std::size_t t_ = 0;
  std::size_t stuck_steps_ = 0;
  double total_cost_ = 0.0;
};

inline RunResult run(const ScenarioConfig& scenario, Variant variant) { return Simulation(scenario, variant).run(); }

inline RunResult run(const ScenarioConfig& scenario, std::string_view variant) {
  return run(scenario, parse_variant(variant));
}

inline RunResult run_naive(const ScenarioConfig& scenario) { return run(scenario, Variant::naive); }

}  // namespace teamcoord
