#pragma once

#include <map>
#include <string>
#include <vector>

#include "teamcoord/scenario.hpp"
#include "teamcoord/simulator.hpp"

namespace teamcoord {

enum class Constraint {
  single_coordination,   // each robot in at most one pair per step
  pair_antisymmetry,     // s_nm + s_mn = 0 between two distinct robots
  communication,         // coordination only inside a communication group
  start_goal,            // paths begin at starts and end at goals
  neighbor_move,         // known neighbor or stay
  no_stagnation,         // someone moves unless everyone is idle
};

inline const char* to_string(Constraint c) {
  switch (c) {
    case Constraint::single_coordination: return "single_coordination";
    case Constraint::pair_antisymmetry: return "pair_antisymmetry";
    case Constraint::communication: return "communication";
    case Constraint::start_goal: return "start_goal";
    case Constraint::neighbor_move: return "neighbor_move";
    case Constraint::no_stagnation: return "no_stagnation";
  }
  return "?";
}

struct Violation {
  std::size_t t = 0;
  RobotId robot = kNone;
  Constraint constraint = Constraint::single_coordination;
  std::string detail;
};

// Checks a recorded run against the movement and coordination constraints.
// An empty result means the trace is clean.
inline std::vector<Violation> validate(const ScenarioConfig& scenario, const std::vector<StepRecord>& records,
                                       bool truncated) {
  const auto& world = scenario.graph;
  std::vector<Violation> out;
  std::vector<NodeId> position;
  for (const auto& r : scenario.robots) position.push_back(r.start);

  for (const auto& rec : records) {
    std::map<RobotId, const RobotStep*> by_robot;
    for (const auto& m : rec.moves) by_robot[m.robot] = &m;

    std::map<RobotId, int> appearances;
    for (const auto& p : rec.pairs) {
      ++appearances[p.receiver];
      ++appearances[p.supporter];
    }
    for (const auto& [id, count] : appearances)
      if (count > 1)
        out.push_back({rec.t, id, Constraint::single_coordination, "robot appears in " + std::to_string(count) + " pairs"});

    for (const auto& p : rec.pairs) {
      auto rit = by_robot.find(p.receiver);
      auto sit = by_robot.find(p.supporter);
      if (p.receiver == p.supporter || rit == by_robot.end() || sit == by_robot.end()) {
        out.push_back({rec.t, p.receiver, Constraint::pair_antisymmetry, "pair needs two distinct active robots"});
        continue;
      }
      const auto& recv = *rit->second;
      const auto& sup = *sit->second;
      if (recv.support_role != kReceiver || recv.partner != p.supporter || sup.support_role != kSupporter ||
          sup.partner != p.receiver)
        out.push_back({rec.t, p.receiver, Constraint::pair_antisymmetry, "roles are not +1/-1 between the pair"});
      if (p.edge >= world.num_edges() || !world.edge(p.edge).risky || sup.from != sup.to ||
          !world.edge(p.edge).supported_from(sup.from) || !world.edge(p.edge).touches(recv.from) ||
          !world.edge(p.edge).touches(recv.to) || recv.from == recv.to)
        out.push_back({rec.t, p.receiver, Constraint::pair_antisymmetry, "supporter not stationed on a support node of the crossed risky edge"});
      if (recv.group_id != sup.group_id)
        out.push_back({rec.t, p.receiver, Constraint::communication, "coordination across communication groups"});
    }
    for (const auto& m : rec.moves) {
      if (m.support_role != kNoSupport && !appearances.count(m.robot))
        out.push_back({rec.t, m.robot, Constraint::pair_antisymmetry, "support role without a recorded pair"});
    }

    bool anyone_moved = false;
    bool everyone_idle = true;
    for (const auto& m : rec.moves) {
      if (m.robot < position.size() && m.from != position[m.robot])
        out.push_back({rec.t, m.robot, Constraint::neighbor_move, "move does not start at the robot's position"});
      if (m.from != m.to) {
        anyone_moved = true;
        if (!world.find_edge(m.from, m.to) || !m.known_edge)
          out.push_back({rec.t, m.robot, Constraint::neighbor_move, "move along an unknown or absent edge"});
      }
      everyone_idle = everyone_idle && m.idle;
      if (m.robot < position.size()) position[m.robot] = m.to;
    }
    if (!rec.moves.empty() && !anyone_moved && !everyone_idle)
      out.push_back({rec.t, kNone, Constraint::no_stagnation, "all active robots stayed"});
  }

  if (!truncated) {
    for (RobotId i = 0; i < scenario.robots.size(); ++i)
      if (position[i] != scenario.robots[i].goal)
        out.push_back({records.empty() ? 0 : records.back().t, i, Constraint::start_goal, "robot did not end at its goal"});
  }
  return out;
}

inline std::vector<Violation> validate(const ScenarioConfig& scenario, const RunResult& result) {
  return validate(scenario, result.records, result.truncated);
}

}  // namespace teamcoord
