#pragma once

#include <algorithm>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "teamcoord/partial_map.hpp"
#include "teamcoord/world_graph.hpp"

namespace teamcoord {

inline double transmission_distance(const WorldGraph& world, TypeId type, double communication_factor) {
  return communication_factor * world.graph_length() * world.robot_type(type).transmission_coefficient;
}

// A link between two robots needs both transmitters to reach: min of the two distances.
inline double comm_range(const WorldGraph& world, TypeId a, TypeId b, double communication_factor) {
  return std::min(transmission_distance(world, a, communication_factor),
                  transmission_distance(world, b, communication_factor));
}

enum class Message { hello, reply, confirm };

inline const char* to_string(Message m) {
  switch (m) {
    case Message::hello: return "hello";
    case Message::reply: return "reply";
    case Message::confirm: return "confirm";
  }
  return "?";
}

struct HandshakeEntry {
  std::size_t step = 0;
  RobotId sender = 0;
  RobotId receiver = 0;
  Message message = Message::hello;
  friend bool operator==(const HandshakeEntry&, const HandshakeEntry&) = default;
};

using HandshakeLog = std::vector<HandshakeEntry>;

inline void write_handshake_csv(std::ostream& out, const HandshakeLog& log) {
  out << "step,sender,receiver,message\n";
  for (const auto& e : log) out << e.step << ',' << e.sender << ',' << e.receiver << ',' << to_string(e.message) << '\n';
}

struct RobotGroup {
  // Sorted ascending.
  std::vector<RobotId> members;
  PartialMap shared_map;
};

struct CommAgent {
  RobotId id = 0;
  TypeId type = 0;
  NodeId position = 0;
  const PartialMap* map = nullptr;
};

struct GroupingResult {
  // Ordered by smallest member id.
  std::vector<RobotGroup> groups;
  HandshakeLog handshakes;
};

// Groups are the connected components of the link graph over `agents`
// (the active robots). Each link completes a hello/reply/confirm exchange
// within the step, and members' maps are merged into the group map.
inline GroupingResult build_groups(const WorldGraph& world, std::span<const CommAgent> agents,
                                   double communication_factor, std::size_t step) {
  const std::size_t k = agents.size();
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return agents[a].id < agents[b].id; });

  GroupingResult result;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto& a = agents[order[i]];
      const auto& b = agents[order[j]];
      const double range = comm_range(world, a.type, b.type, communication_factor);
      if (!(range > 0.0) || euclid(world, a.position, b.position) > range) continue;
      result.handshakes.push_back({step, a.id, b.id, Message::hello});
      result.handshakes.push_back({step, b.id, a.id, Message::reply});
      result.handshakes.push_back({step, a.id, b.id, Message::confirm});
      parent[find(order[i])] = find(order[j]);
    }
  }

  std::vector<std::size_t> slot(k, kNone);
  for (std::size_t i : order) {
    const std::size_t root = find(i);
    if (slot[root] == kNone) {
      slot[root] = result.groups.size();
      result.groups.emplace_back();
    }
    auto& g = result.groups[slot[root]];
    g.members.push_back(agents[i].id);
    if (agents[i].map) absorb(g.shared_map, *agents[i].map);
  }
  return result;
}

}  // namespace teamcoord
