#pragma once

#include "teamcoord/communication.hpp"
#include "teamcoord/coordination_planner.hpp"
#include "teamcoord/experiment.hpp"
#include "teamcoord/individual_planner.hpp"
#include "teamcoord/joint_solver.hpp"
#include "teamcoord/partial_map.hpp"
#include "teamcoord/rng.hpp"
#include "teamcoord/scenario.hpp"
#include "teamcoord/scenario_io.hpp"
#include "teamcoord/simulator.hpp"
#include "teamcoord/trace_io.hpp"
#include "teamcoord/validator.hpp"
#include "teamcoord/world_graph.hpp"
