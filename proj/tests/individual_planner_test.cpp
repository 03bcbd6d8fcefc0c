#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "teamcoord/individual_planner.hpp"
#include "teamcoord/scenario.hpp"

using namespace teamcoord;
using oracle::plain_edge;

namespace {

WorldGraph triangle() {
  // A=0, B=1, C=2
  return WorldGraph({{0, 0}, {0.5, 0.5}, {1, 0}}, {plain_edge(0, 1, 1), plain_edge(1, 2, 1), plain_edge(0, 2, 3)},
                    {RobotTypeSpec{}});
}

// Sensed map where only `visible` nodes, their induced edges, and the
// listed complete nodes are known.
PartialMap restrict(const WorldGraph& g, std::set<NodeId> visible, std::set<NodeId> complete) {
  PartialMap m;
  for (NodeId n : visible) m.nodes.emplace(n, g.coord(n));
  for (EdgeId id = 0; id < g.num_edges(); ++id)
    if (visible.count(g.edge(id).u) && visible.count(g.edge(id).v)) m.edges.emplace(id, g.edge(id));
  m.adjacency_complete = std::move(complete);
  return m;
}

}  // namespace

TEST(ShortestPath, Identity) {
  const auto g = triangle();
  const auto p = shortest_path(g, oracle::full_map(g), 1, 1, 0);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->path, Path{1});
  EXPECT_EQ(p->cost, 0.0);
}

TEST(ShortestPath, PathGraph) {
  const WorldGraph g({{0, 0}, {1, 0}, {2, 0}}, {plain_edge(0, 1, 1), plain_edge(1, 2, 2)}, {RobotTypeSpec{}});
  const auto p = shortest_path(g, oracle::full_map(g), 0, 2, 0);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->path, (Path{0, 1, 2}));
  EXPECT_DOUBLE_EQ(p->cost, 3.0);
}

TEST(ShortestPath, TriangleTakesDetour) {
  const auto g = triangle();
  const auto p = shortest_path(g, oracle::full_map(g), 0, 2, 0);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->path, (Path{0, 1, 2}));
  EXPECT_DOUBLE_EQ(p->cost, 2.0);
}

TEST(ShortestPath, RiskyEdgePricedUnsupported) {
  const auto s = oracle::support_fixture();
  const auto p = shortest_path(s.graph, oracle::full_map(s.graph), 0, 1, 0);
  ASSERT_TRUE(p);
  EXPECT_DOUBLE_EQ(p->cost, 10.0);
}

TEST(ShortestPath, UnreachableAndUnknown) {
  const auto g = triangle();
  const auto m = restrict(g, {0, 2}, {});  // edge A-C known; B unknown
  EXPECT_FALSE(shortest_path(g, m, 0, 1, 0));
  auto split = restrict(g, {0, 1, 2}, {});
  split.edges.erase(*g.find_edge(0, 2));
  split.edges.erase(*g.find_edge(1, 2));
  EXPECT_FALSE(shortest_path(g, split, 0, 2, 0));
}

TEST(ShortestPath, TieBreakLexicographic) {
  // Two equal routes 0-1-3 and 0-2-3; the smaller sequence wins.
  const WorldGraph g({{0, 0}, {1, 1}, {1, -1}, {2, 0}},
                     {plain_edge(0, 2, 2), plain_edge(2, 3, 2), plain_edge(0, 1, 2), plain_edge(1, 3, 2)},
                     {RobotTypeSpec{}});
  const auto p = shortest_path(g, oracle::full_map(g), 0, 3, 0);
  ASSERT_TRUE(p);
  EXPECT_EQ(p->path, (Path{0, 1, 3}));
}

TEST(ShortestPath, MatchesSimplePathEnumeration) {
  Rng rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    GeneratorOptions opt;
    opt.num_nodes = 3 + rng.index(6);
    opt.edge_density = rng.uniform(0.4, 1.0);
    opt.risky_fraction = 0.3;
    opt.num_robots = 1;
    opt.num_types = 1 + rng.index(3);
    opt.seed = rng.next();
    ScenarioConfig s;
    try {
      s = generate_scenario(opt);
    } catch (const GraphError&) {
      continue;
    }
    const auto& g = s.graph;
    auto map = oracle::full_map(g);
    if (trial % 2) map = sense(g, rng.index(g.num_nodes()), 0, 0.5);  // partial
    for (const auto& [from, c1] : map.nodes)
      for (const auto& [to, c2] : map.nodes)
        for (TypeId t = 0; t < g.num_types(); ++t) {
          const double expected = oracle::min_simple_path_cost(g, map, from, to, t);
          const auto got = shortest_path(g, map, from, to, t);
          if (std::isinf(expected)) {
            EXPECT_FALSE(got);
          } else {
            ASSERT_TRUE(got);
            EXPECT_NEAR(got->cost, expected, 1e-12);
            double repriced = 0.0;
            for (std::size_t i = 0; i + 1 < got->path.size(); ++i) {
              const auto e = g.find_edge(got->path[i], got->path[i + 1]);
              ASSERT_TRUE(e && map.knows_edge(*e));
              repriced += edge_cost(g, g.edge(*e), t);
            }
            EXPECT_NEAR(repriced, got->cost, 1e-12);
          }
        }
  }
}

TEST(CandidateSubgoals, GoalInMapIsOnlyCandidate) {
  const auto g = triangle();
  const auto m = restrict(g, {0, 1, 2}, {0});
  EXPECT_EQ(candidate_subgoals(g, m, 0, 2, 4), std::vector<NodeId>{2});
}

TEST(CandidateSubgoals, FullyExploredWithoutGoalIsEmpty) {
  const WorldGraph g({{0, 0}, {1, 0}, {2, 0}, {3, 0}}, {plain_edge(0, 1, 1), plain_edge(1, 2, 1)},
                     {RobotTypeSpec{}});
  const auto m = restrict(g, {0, 1, 2}, {0, 1, 2});
  EXPECT_TRUE(candidate_subgoals(g, m, 0, 3, 4).empty());
}

TEST(CandidateSubgoals, SensedButUnvisitedBoundaryNode) {
  // Chain 0-1-2-3-goal(4); the robot at 0 has sensed 0..2, node 2 is on the boundary.
  std::vector<Coord> pts;
  std::vector<EdgeSpec> edges;
  for (NodeId i = 0; i < 5; ++i) pts.push_back({static_cast<double>(i), 0});
  for (NodeId i = 0; i + 1 < 5; ++i) edges.push_back(plain_edge(i, i + 1, 1.5));
  const WorldGraph g(pts, edges, {RobotTypeSpec{}});
  const auto m = sense_radius(g, 0, 2.0);
  EXPECT_EQ(candidate_subgoals(g, m, 0, 4, 4), std::vector<NodeId>{2});

  const auto plan = individual_plan(g, m, 0, 4, 0, 4);
  ASSERT_TRUE(plan.subgoal);
  EXPECT_EQ(*plan.subgoal, 2u);
  EXPECT_EQ(plan.plan.path, (Path{0, 1, 2}));
  EXPECT_DOUBLE_EQ(plan.plan.cost, 3.0);
  EXPECT_DOUBLE_EQ(plan.score, 3.0 + 2.0);
}

TEST(CandidateSubgoals, ExcludesCurrentAndDeadEndPockets) {
  // Goal 3 unknown. Frontier 4 hangs off the current node and leads to the
  // complete leaf 5.
  const WorldGraph g({{0, 0}, {1, 0}, {2, 0}, {0, 1}, {0, 2}, {0, 3}},
                     {plain_edge(0, 1, 1), plain_edge(1, 2, 1), plain_edge(0, 4, 2), plain_edge(4, 5, 1),
                      plain_edge(2, 3, 3)},
                     {RobotTypeSpec{}});
  // Known: 0,1,2,4,5. Complete: 1, 5. Frontier: 0 (current), 2, 4.
  // 4 still reaches the current node, which never counts as a dead end.
  auto m = restrict(g, {0, 1, 2, 4, 5}, {1, 5});
  auto c = candidate_subgoals(g, m, 0, 3, 4);
  EXPECT_EQ(std::count(c.begin(), c.end(), 0u), 0);
  EXPECT_EQ(std::count(c.begin(), c.end(), 2u), 1);
  EXPECT_EQ(std::count(c.begin(), c.end(), 4u), 1);

  // Drop edge 0-4 from the map: 4's only known neighbor is leaf 5, a pocket.
  m.edges.erase(*g.find_edge(0, 4));
  c = candidate_subgoals(g, m, 0, 3, 4);
  EXPECT_EQ(c, std::vector<NodeId>{2});
}

TEST(CandidateSubgoals, TruncatesToNearestGoal) {
  // Frontier nodes at increasing distance from the goal at x = 10.
  std::vector<Coord> pts{{0, 0}};
  std::vector<EdgeSpec> edges;
  for (NodeId i = 1; i <= 6; ++i) {
    pts.push_back({static_cast<double>(i), 1});
    edges.push_back(plain_edge(0, i, 10));
  }
  pts.push_back({10, 0});
  const WorldGraph g(pts, edges, {RobotTypeSpec{}});
  const auto m = restrict(g, {0, 1, 2, 3, 4, 5, 6}, {0});
  EXPECT_EQ(candidate_subgoals(g, m, 0, 7, 3), (std::vector<NodeId>{6, 5, 4}));
}

TEST(IndividualPlan, PicksLowestScoreWithTieBreaks) {
  // F1 = node 1: C1 = 2, C2 = 1. F2 = node 2: C1 = 1, C2 = 3.
  const WorldGraph g({{0, 0}, {0, 1}, {0, -1}, {0, 2}},
                     {plain_edge(0, 1, 2), plain_edge(0, 2, 1)}, {RobotTypeSpec{}});
  // Goal 3 sits at (0,2): d(1,3) = 1, d(2,3) = 3.
  const auto m = restrict(g, {0, 1, 2}, {0});
  const auto scored = score_candidates(g, m, 0, 3, 0, 4);
  ASSERT_EQ(scored.size(), 2u);
  EXPECT_EQ(scored[0].node, 1u);
  EXPECT_DOUBLE_EQ(scored[0].score(), 3.0);
  EXPECT_DOUBLE_EQ(scored[1].score(), 4.0);
  const auto plan = individual_plan(g, m, 0, 3, 0, 4);
  EXPECT_EQ(*plan.subgoal, 1u);
  EXPECT_DOUBLE_EQ(plan.score, 3.0);

  SubgoalCandidate a{5, 2.0, 1.0, {}}, b{4, 1.0, 2.0, {}}, c{3, 1.0, 2.0, {}};
  EXPECT_TRUE(better_candidate(b, a));  // equal score, smaller C1
  EXPECT_TRUE(better_candidate(c, b));  // equal score and C1, smaller id
}

TEST(IndividualPlan, NoCandidatesStays) {
  const auto g = triangle();
  const auto m = restrict(g, {0, 1}, {0, 1});  // goal 2 unknown, nothing left to explore
  const auto plan = individual_plan(g, m, 0, 2, 0, 4);
  EXPECT_FALSE(plan.subgoal);
  EXPECT_EQ(plan.plan.path, Path{0});
  EXPECT_EQ(plan.plan.cost, 0.0);
}

TEST(IndividualPlan, FullyObservedMatchesDijkstra) {
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    GeneratorOptions opt;
    opt.num_nodes = 10;
    opt.num_robots = 2;
    opt.seed = rng.next();
    const auto s = generate_scenario(opt);
    const auto map = oracle::full_map(s.graph);
    const auto& r = s.robots[0];
    const auto plan = individual_plan(s.graph, map, r.start, r.goal, r.type, 4);
    EXPECT_NEAR(plan.plan.cost, oracle::min_simple_path_cost(s.graph, map, r.start, r.goal, r.type), 1e-12);
    EXPECT_EQ(plan.plan.path.back(), r.goal);
  }
}

TEST(IndividualPlan, ReturnedCandidateMinimizesScore) {
  Rng rng(9);
  for (int trial = 0; trial < 60; ++trial) {
    GeneratorOptions opt;
    opt.num_nodes = 20;
    opt.num_robots = 2;
    opt.seed = rng.next();
    const auto s = generate_scenario(opt);
    const auto& r = s.robots[0];
    const auto map = sense(s.graph, r.start, 0, 0.3);
    const auto plan = individual_plan(s.graph, map, r.start, r.goal, r.type, 4);
    if (!plan.subgoal) continue;
    for (NodeId c : candidate_subgoals(s.graph, map, r.start, r.goal, 4)) {
      const auto sp = shortest_path(s.graph, map, r.start, c, r.type);
      if (!sp) continue;
      EXPECT_LE(plan.score, sp->cost + euclid(s.graph, c, r.goal) + 1e-12);
    }
  }
}

TEST(EpsilonGreedy, Degenerate) {
  const std::vector<int> three{0, 1, 2};
  const std::vector<int> one{0};
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    EXPECT_EQ(epsilon_greedy_pick(std::span<const int>(three), 1.0, rng), 0u);
    EXPECT_EQ(epsilon_greedy_pick(std::span<const int>(one), 0.0, rng), 0u);
    EXPECT_NE(epsilon_greedy_pick(std::span<const int>(three), 0.0, rng), 0u);
  }
}

TEST(EpsilonGreedy, FrequencyAtHalf) {
  const std::vector<int> three{0, 1, 2};
  Rng rng(12345);
  std::array<int, 3> counts{};
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) ++counts[epsilon_greedy_pick(std::span<const int>(three), 0.5, rng)];
  EXPECT_NEAR(counts[0] / double(draws), 0.50, 0.03);
  EXPECT_NEAR(counts[1] / double(draws), 0.25, 0.03);
  EXPECT_NEAR(counts[2] / double(draws), 0.25, 0.03);
}

TEST(EpsilonGreedy, SeededIsReproducible) {
  const std::vector<int> five{0, 1, 2, 3, 4};
  Rng a(3), b(3);
  for (int i = 0; i < 100; ++i)
    EXPECT_EQ(epsilon_greedy_pick(std::span<const int>(five), 0.3, a),
              epsilon_greedy_pick(std::span<const int>(five), 0.3, b));
}
