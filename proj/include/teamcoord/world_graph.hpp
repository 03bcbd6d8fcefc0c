#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace teamcoord {

using NodeId = std::size_t;
using EdgeId = std::size_t;
using TypeId = std::size_t;
using RobotId = std::size_t;

inline constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Coord {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Coord&, const Coord&) = default;
};

inline double distance(const Coord& a, const Coord& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct RobotTypeSpec {
  double edge_cost_multiplier = 1.0;
  double sensing_coefficient = 1.0;
  double transmission_coefficient = 1.0;
  friend bool operator==(const RobotTypeSpec&, const RobotTypeSpec&) = default;
};

struct EdgeSpec {
  NodeId u = 0;
  NodeId v = 0;
  double base_cost = 0.0;
  bool risky = false;
  // Sorted ascending; empty iff !risky.
  std::vector<NodeId> support_nodes;
  // reduced_cost[receiver_type][supporter_type]; empty iff !risky.
  std::vector<std::vector<double>> reduced_cost;
  // support_cost[supporter_type]; empty iff !risky.
  std::vector<double> support_cost;

  NodeId other(NodeId n) const { return n == u ? v : u; }
  bool touches(NodeId n) const { return n == u || n == v; }
  bool supported_from(NodeId n) const {
    return std::binary_search(support_nodes.begin(), support_nodes.end(), n);
  }
  friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ground-truth world. Immutable after construction; the constructor checks
// structural invariants and builds the adjacency index.
class WorldGraph {
 public:
  struct Incidence {
    NodeId neighbor;
    EdgeId edge;
  };

  WorldGraph() = default;

  WorldGraph(std::vector<Coord> nodes, std::vector<EdgeSpec> edges,
             std::vector<RobotTypeSpec> robot_types)
      : nodes_(std::move(nodes)), edges_(std::move(edges)), types_(std::move(robot_types)) {
    if (types_.empty()) throw GraphError("world graph needs at least one robot type");
    for (const auto& t : types_) {
      if (!(t.edge_cost_multiplier >= 1.0) || !std::isfinite(t.edge_cost_multiplier))
        throw GraphError("robot type edge_cost_multiplier must be >= 1");
      if (!(t.sensing_coefficient > 0.0) || !(t.transmission_coefficient > 0.0))
        throw GraphError("robot type coefficients must be positive");
    }
    for (const auto& c : nodes_) {
      if (!std::isfinite(c.x) || !std::isfinite(c.y)) throw GraphError("node coordinates must be finite");
    }
    adjacency_.resize(nodes_.size());
    const std::size_t h = types_.size();
    for (EdgeId id = 0; id < edges_.size(); ++id) {
      auto& e = edges_[id];
      const std::string where = "edge " + std::to_string(id) + ": ";
      if (e.u >= nodes_.size() || e.v >= nodes_.size()) throw GraphError(where + "endpoint out of range");
      if (e.u == e.v) throw GraphError(where + "self-loops are implicit and must not be stored");
      if (e.u > e.v) std::swap(e.u, e.v);
      if (!(e.base_cost > 0.0) || !std::isfinite(e.base_cost)) throw GraphError(where + "base_cost must be positive");
      const double length = distance(nodes_[e.u], nodes_[e.v]);
      if (e.base_cost < length * (1.0 - 1e-12)) throw GraphError(where + "base_cost below Euclidean length");
      if (find_edge(e.u, e.v)) throw GraphError(where + "duplicate edge");
      std::sort(e.support_nodes.begin(), e.support_nodes.end());
      if (e.risky) {
        if (e.support_nodes.empty()) throw GraphError(where + "risky edge without support nodes");
        if (std::adjacent_find(e.support_nodes.begin(), e.support_nodes.end()) != e.support_nodes.end())
          throw GraphError(where + "duplicate support node");
        for (NodeId s : e.support_nodes)
          if (s >= nodes_.size()) throw GraphError(where + "support node out of range");
        if (e.reduced_cost.size() != h || e.support_cost.size() != h)
          throw GraphError(where + "risky cost tables must have one entry per robot type");
        for (const auto& row : e.reduced_cost) {
          if (row.size() != h) throw GraphError(where + "reduced_cost must be HxH");
          for (double c : row)
            if (!(c > 0.0) || !std::isfinite(c)) throw GraphError(where + "reduced_cost must be positive");
        }
        for (double c : e.support_cost)
          if (!(c >= 0.0) || !std::isfinite(c)) throw GraphError(where + "support_cost must be non-negative");
      } else if (!e.support_nodes.empty() || !e.reduced_cost.empty() || !e.support_cost.empty()) {
        throw GraphError(where + "non-risky edge carries support structure");
      }
      adjacency_[e.u].push_back({e.v, id});
      adjacency_[e.v].push_back({e.u, id});
    }
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end(),
                [](const Incidence& a, const Incidence& b) { return a.neighbor < b.neighbor; });
    }
    length_ = compute_length();
  }

  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_types() const { return types_.size(); }

  const std::vector<Coord>& nodes() const { return nodes_; }
  const std::vector<EdgeSpec>& edges() const { return edges_; }
  const std::vector<RobotTypeSpec>& robot_types() const { return types_; }

  const Coord& coord(NodeId n) const { return nodes_.at(n); }
  const EdgeSpec& edge(EdgeId e) const { return edges_.at(e); }
  const RobotTypeSpec& robot_type(TypeId t) const {
    if (t >= types_.size()) throw std::invalid_argument("unknown robot type " + std::to_string(t));
    return types_[t];
  }
  const std::vector<Incidence>& incident(NodeId n) const { return adjacency_.at(n); }

  std::optional<EdgeId> find_edge(NodeId a, NodeId b) const {
    if (a >= adjacency_.size()) return std::nullopt;
    for (const auto& inc : adjacency_[a])
      if (inc.neighbor == b) return inc.edge;
    return std::nullopt;
  }

  // Bounding-box diagonal of all node coordinates.
  double graph_length() const { return length_; }

  friend bool operator==(const WorldGraph& a, const WorldGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_ && a.types_ == b.types_;
  }

 private:
  double compute_length() const {
    if (nodes_.empty()) return 0.0;
    double min_x = nodes_[0].x, max_x = nodes_[0].x, min_y = nodes_[0].y, max_y = nodes_[0].y;
    for (const auto& c : nodes_) {
      min_x = std::min(min_x, c.x);
      max_x = std::max(max_x, c.x);
      min_y = std::min(min_y, c.y);
      max_y = std::max(max_y, c.y);
    }
    return std::hypot(max_x - min_x, max_y - min_y);
  }

  std::vector<Coord> nodes_;
  std::vector<EdgeSpec> edges_;
  std::vector<RobotTypeSpec> types_;
  std::vector<std::vector<Incidence>> adjacency_;
  double length_ = 0.0;
};

// Unsupported traversal cost of an edge for one robot type.
inline double edge_cost(const WorldGraph& graph, const EdgeSpec& edge, TypeId robot_type) {
  return edge.base_cost * graph.robot_type(robot_type).edge_cost_multiplier;
}

// Cost of moving from `from` to `to`; a stay costs nothing.
inline double move_cost(const WorldGraph& graph, NodeId from, NodeId to, TypeId robot_type) {
  if (from == to) {
    graph.robot_type(robot_type);
    return 0.0;
  }
  const auto e = graph.find_edge(from, to);
  if (!e) throw std::invalid_argument("no edge between nodes " + std::to_string(from) + " and " + std::to_string(to));
  return edge_cost(graph, graph.edge(*e), robot_type);
}

// Supported crossing cost with the supporter's cost attributed to the receiver.
inline double folded_support_cost(const WorldGraph& graph, const EdgeSpec& edge, TypeId receiver_type,
                                  TypeId supporter_type) {
  if (!edge.risky) throw std::invalid_argument("folded_support_cost: edge is not risky");
  graph.robot_type(receiver_type);
  graph.robot_type(supporter_type);
  return edge.reduced_cost[receiver_type][supporter_type] + edge.support_cost[supporter_type];
}

inline double euclid(const WorldGraph& graph, NodeId a, NodeId b) { return distance(graph.coord(a), graph.coord(b)); }

inline double graph_length(const WorldGraph& graph) { return graph.graph_length(); }

}  // namespace teamcoord
