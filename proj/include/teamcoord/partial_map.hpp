#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "teamcoord/world_graph.hpp"

namespace teamcoord {

class MapConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One robot's (or group's) accumulated knowledge of the world graph.
// Only grows: every operation here is a union.
struct PartialMap {
  std::map<NodeId, Coord> nodes;
  std::map<EdgeId, EdgeSpec> edges;
  // Nodes whose full incident edge list is known.
  std::set<NodeId> adjacency_complete;

  bool contains(NodeId n) const { return nodes.count(n) != 0; }
  bool knows_edge(EdgeId e) const { return edges.count(e) != 0; }
  bool empty() const { return nodes.empty(); }
  // Total element count; strictly increases whenever the map learns anything.
  std::size_t size() const { return nodes.size() + edges.size() + adjacency_complete.size(); }

  // Known incident (neighbor, edge) pairs of `n`, ordered by neighbor.
  std::vector<WorldGraph::Incidence> incident(NodeId n) const {
    std::vector<WorldGraph::Incidence> out;
    for (const auto& [id, e] : edges)
      if (e.touches(n)) out.push_back({e.other(n), id});
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.neighbor < b.neighbor; });
    return out;
  }

  // Adjacency lists for every known node; built once per planning call.
  std::map<NodeId, std::vector<WorldGraph::Incidence>> adjacency() const {
    std::map<NodeId, std::vector<WorldGraph::Incidence>> adj;
    for (const auto& [n, c] : nodes) adj[n];
    for (const auto& [id, e] : edges) {
      adj[e.u].push_back({e.v, id});
      adj[e.v].push_back({e.u, id});
    }
    for (auto& [n, list] : adj)
      std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.neighbor < b.neighbor; });
    return adj;
  }

  friend bool operator==(const PartialMap&, const PartialMap&) = default;
};

// In-place union; returns true if `into` grew.
inline bool absorb(PartialMap& into, const PartialMap& from) {
  const std::size_t before = into.size();
  for (const auto& [n, c] : from.nodes) {
    auto [it, inserted] = into.nodes.emplace(n, c);
    if (!inserted && !(it->second == c))
      throw MapConsistencyError("conflicting coordinates for node " + std::to_string(n));
  }
  for (const auto& [id, e] : from.edges) {
    auto [it, inserted] = into.edges.emplace(id, e);
    if (!inserted && !(it->second == e))
      throw MapConsistencyError("conflicting attributes for edge " + std::to_string(id));
  }
  into.adjacency_complete.insert(from.adjacency_complete.begin(), from.adjacency_complete.end());
  return into.size() != before;
}

inline PartialMap update_map(PartialMap map, const PartialMap& observation) {
  absorb(map, observation);
  return map;
}

inline PartialMap merge_maps(const PartialMap& a, const PartialMap& b) {
  PartialMap out = a;
  absorb(out, b);
  return out;
}

inline double sensing_radius(const WorldGraph& world, TypeId robot_type, double sensing_factor) {
  return sensing_factor * world.graph_length() * world.robot_type(robot_type).sensing_coefficient;
}

// Everything within `radius` of `position`: nodes inside the disc, edges with
// both endpoints inside, and nodes whose every neighbor is inside.
inline PartialMap sense_radius(const WorldGraph& world, NodeId position, double radius) {
  PartialMap obs;
  const Coord& here = world.coord(position);
  std::vector<bool> inside(world.num_nodes(), false);
  for (NodeId n = 0; n < world.num_nodes(); ++n) {
    if (n == position || distance(world.coord(n), here) <= radius) {
      inside[n] = true;
      obs.nodes.emplace(n, world.coord(n));
    }
  }
  for (const auto& [n, c] : obs.nodes) {
    bool complete = true;
    for (const auto& inc : world.incident(n)) {
      if (inside[inc.neighbor]) {
        if (n < inc.neighbor) obs.edges.emplace(inc.edge, world.edge(inc.edge));
      } else {
        complete = false;
      }
    }
    if (complete) obs.adjacency_complete.insert(n);
  }
  return obs;
}

inline PartialMap sense(const WorldGraph& world, NodeId position, TypeId robot_type, double sensing_factor) {
  return sense_radius(world, position, sensing_radius(world, robot_type, sensing_factor));
}

}  // namespace teamcoord
