#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "teamcoord/scenario.hpp"

namespace teamcoord {

class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

using ojson = nlohmann::ordered_json;

inline const ojson& require(const ojson& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ScenarioParseError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ScenarioParseError(path + ": missing field \"" + key + "\"");
  return *it;
}

template <class T>
T read_as(const ojson& value, const std::string& path) {
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioParseError(path + ": " + e.what());
  }
}

template <class T>
T field(const ojson& obj, const char* key, const std::string& path) {
  return read_as<T>(require(obj, key, path), path + "." + key);
}

inline const ojson& require_array(const ojson& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_array()) throw ScenarioParseError(path + "." + key + ": expected an array");
  return v;
}

}  // namespace detail

inline nlohmann::ordered_json scenario_to_json(const ScenarioConfig& config) {
  using detail::ojson;
  ojson doc;
  ojson nodes = ojson::array();
  for (const auto& c : config.graph.nodes()) nodes.push_back({c.x, c.y});
  doc["nodes"] = nodes;

  ojson edges = ojson::array();
  for (const auto& e : config.graph.edges()) {
    ojson je;
    je["u"] = e.u;
    je["v"] = e.v;
    je["base_cost"] = e.base_cost;
    je["risky"] = e.risky;
    je["support_nodes"] = e.support_nodes;
    je["reduced_cost"] = e.reduced_cost;
    je["support_cost"] = e.support_cost;
    edges.push_back(std::move(je));
  }
  doc["edges"] = edges;

  ojson types = ojson::array();
  for (const auto& t : config.graph.robot_types()) {
    ojson jt;
    jt["edge_cost_multiplier"] = t.edge_cost_multiplier;
    jt["sensing_coefficient"] = t.sensing_coefficient;
    jt["transmission_coefficient"] = t.transmission_coefficient;
    types.push_back(std::move(jt));
  }
  doc["robot_types"] = types;

  ojson robots = ojson::array();
  for (const auto& r : config.robots) {
    ojson jr;
    jr["type"] = r.type;
    jr["start"] = r.start;
    jr["goal"] = r.goal;
    robots.push_back(std::move(jr));
  }
  doc["robots"] = robots;

  const auto& p = config.params;
  ojson params;
  params["sensing_factor"] = p.sensing_factor;
  params["communication_factor"] = p.communication_factor;
  params["T"] = p.time_limit;
  params["alpha"] = p.alpha;
  params["epsilon"] = p.epsilon;
  params["K"] = p.subgoal_cap;
  params["J_max"] = p.exact_group_cap;
  params["seed"] = p.seed;
  doc["params"] = params;
  return doc;
}

inline std::string scenario_to_string(const ScenarioConfig& config) { return scenario_to_json(config).dump(2) + "\n"; }

inline ScenarioConfig scenario_from_json(const nlohmann::ordered_json& doc) {
  using namespace detail;
  const std::string root = "$";
  if (!doc.is_object()) throw ScenarioParseError("$: expected an object at top level");

  std::vector<Coord> nodes;
  const auto& jn = require_array(doc, "nodes", root);
  for (std::size_t i = 0; i < jn.size(); ++i) {
    const std::string path = "$.nodes[" + std::to_string(i) + "]";
    const auto& pt = jn[i];
    if (!pt.is_array() || pt.size() != 2) throw ScenarioParseError(path + ": expected [x, y]");
    nodes.push_back({read_as<double>(pt[0], path), read_as<double>(pt[1], path)});
  }

  std::vector<EdgeSpec> edges;
  const auto& je = require_array(doc, "edges", root);
  for (std::size_t i = 0; i < je.size(); ++i) {
    const std::string path = "$.edges[" + std::to_string(i) + "]";
    const auto& obj = je[i];
    EdgeSpec e;
    e.u = field<NodeId>(obj, "u", path);
    e.v = field<NodeId>(obj, "v", path);
    e.base_cost = field<double>(obj, "base_cost", path);
    e.risky = field<bool>(obj, "risky", path);
    e.support_nodes = field<std::vector<NodeId>>(obj, "support_nodes", path);
    e.reduced_cost = field<std::vector<std::vector<double>>>(obj, "reduced_cost", path);
    e.support_cost = field<std::vector<double>>(obj, "support_cost", path);
    edges.push_back(std::move(e));
  }

  std::vector<RobotTypeSpec> types;
  const auto& jt = require_array(doc, "robot_types", root);
  for (std::size_t i = 0; i < jt.size(); ++i) {
    const std::string path = "$.robot_types[" + std::to_string(i) + "]";
    types.push_back({field<double>(jt[i], "edge_cost_multiplier", path),
                     field<double>(jt[i], "sensing_coefficient", path),
                     field<double>(jt[i], "transmission_coefficient", path)});
  }

  ScenarioConfig config;
  try {
    config.graph = WorldGraph(std::move(nodes), std::move(edges), std::move(types));
  } catch (const GraphError& e) {
    throw ScenarioParseError(std::string("$: invalid graph: ") + e.what());
  }

  const auto& jr = require_array(doc, "robots", root);
  for (std::size_t i = 0; i < jr.size(); ++i) {
    const std::string path = "$.robots[" + std::to_string(i) + "]";
    config.robots.push_back({field<TypeId>(jr[i], "type", path), field<NodeId>(jr[i], "start", path),
                             field<NodeId>(jr[i], "goal", path)});
  }

  const auto& jp = require(doc, "params", root);
  const std::string pp = "$.params";
  auto& p = config.params;
  p.sensing_factor = field<double>(jp, "sensing_factor", pp);
  p.communication_factor = field<double>(jp, "communication_factor", pp);
  p.time_limit = field<std::size_t>(jp, "T", pp);
  p.alpha = field<double>(jp, "alpha", pp);
  p.epsilon = field<double>(jp, "epsilon", pp);
  p.subgoal_cap = field<std::size_t>(jp, "K", pp);
  p.exact_group_cap = field<std::size_t>(jp, "J_max", pp);
  p.seed = field<std::uint64_t>(jp, "seed", pp);

  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw ScenarioParseError(std::string("$: ") + e.what());
  }
  return config;
}

inline ScenarioConfig scenario_from_string(const std::string& text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ScenarioParseError(std::string("malformed scenario (byte ") + std::to_string(e.byte) + "): " + e.what());
  }
  return scenario_from_json(doc);
}

inline void save_scenario(const ScenarioConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << scenario_to_string(config);
  if (!out) throw std::runtime_error("failed writing " + path);
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open scenario file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return scenario_from_string(buffer.str());
  } catch (const ScenarioParseError& e) {
    throw ScenarioParseError(path + ": " + e.what());
  }
}

}  // namespace teamcoord
