#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "support/oracles.hpp"
#include "teamcoord/scenario_io.hpp"

using namespace teamcoord;

namespace {

std::string data_file(const char* name) { return std::string(TEAMCOORD_TEST_DATA) + "/" + name; }

std::string parse_error(const std::string& text) {
  try {
    scenario_from_string(text);
  } catch (const ScenarioParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(ScenarioIo, RoundTripGenerated) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorOptions opt;
    opt.seed = seed;
    opt.num_types = 1 + seed % 4;
    auto s = generate_scenario(opt);
    s.params.alpha = 0.25 * static_cast<double>(seed);
    s.params.time_limit = seed;
    const auto text = scenario_to_string(s);
    const auto back = scenario_from_string(text);
    EXPECT_EQ(back, s);
    EXPECT_EQ(scenario_to_string(back), text);
  }
}

TEST(ScenarioIo, RoundTripThroughFile) {
  GeneratorOptions opt;
  opt.seed = 9;
  const auto s = generate_scenario(opt);
  const auto path = (std::filesystem::temp_directory_path() / "teamcoord_roundtrip.json").string();
  save_scenario(s, path);
  EXPECT_EQ(load_scenario(path), s);
  std::remove(path.c_str());
}

TEST(ScenarioIo, StableKeyOrder) {
  const auto text = scenario_to_string(oracle::support_fixture());
  const auto nodes = text.find("\"nodes\"");
  const auto edges = text.find("\"edges\"");
  const auto types = text.find("\"robot_types\"");
  const auto robots = text.find("\"robots\"");
  const auto params = text.find("\"params\"");
  EXPECT_LT(nodes, edges);
  EXPECT_LT(edges, types);
  EXPECT_LT(types, robots);
  EXPECT_LT(robots, params);
}

TEST(ScenarioIo, HandWrittenFixtureMatchesConstructor) {
  EXPECT_EQ(load_scenario(data_file("support_fixture.json")), oracle::support_fixture());
  EXPECT_EQ(load_scenario(data_file("support_fixture_expensive.json")), oracle::support_fixture(11.0, 1.0));
}

TEST(ScenarioIo, MissingFieldIsNamed) {
  try {
    load_scenario(data_file("missing_goal.json"));
    FAIL() << "expected a parse error";
  } catch (const ScenarioParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("\"goal\""), std::string::npos) << msg;
    EXPECT_NE(msg.find("robots[0]"), std::string::npos) << msg;
  }
}

TEST(ScenarioIo, ErrorsCarryLocation) {
  EXPECT_NE(parse_error("{\"nodes\": [[0, 0]").find("byte"), std::string::npos);
  EXPECT_NE(parse_error("[]").find("top level"), std::string::npos);

  auto doc = scenario_to_json(oracle::support_fixture());
  doc["edges"][1]["base_cost"] = "cheap";
  EXPECT_NE(parse_error(doc.dump()).find("$.edges[1].base_cost"), std::string::npos);

  doc = scenario_to_json(oracle::support_fixture());
  doc["params"].erase("J_max");
  EXPECT_NE(parse_error(doc.dump()).find("\"J_max\""), std::string::npos);

  doc = scenario_to_json(oracle::support_fixture());
  doc["nodes"][2] = {1.0};
  EXPECT_NE(parse_error(doc.dump()).find("$.nodes[2]"), std::string::npos);

  doc = scenario_to_json(oracle::support_fixture());
  doc["robots"][0]["goal"] = 17;
  EXPECT_FALSE(parse_error(doc.dump()).empty());

  doc = scenario_to_json(oracle::support_fixture());
  doc["edges"][0]["support_nodes"] = nlohmann::ordered_json::array();
  EXPECT_NE(parse_error(doc.dump()).find("invalid graph"), std::string::npos);
}

TEST(ScenarioIo, UnreadableFile) {
  EXPECT_THROW(load_scenario(data_file("does_not_exist.json")), std::runtime_error);
}
