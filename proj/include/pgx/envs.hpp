#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "pgx/mdp.hpp"

namespace pgx {

// Horizontal corridor of S tiles; actions left/right; the agent stays idle
// with probability p and otherwise moves one tile, clipped at the walls. The
// target tile S pays 100 once on arrival; afterwards the chain sits in an
// absorbed sink state with zero reward. State indices: 0..S-1 are tiles
// 1..S, index S is the sink.
struct CorridorConfig {
  int tiles = 15;
  double idle_prob = 0.7;
  double terminal_reward = 100.0;
  double gamma = 0.99;
};

MdpSpec make_corridor(const CorridorConfig& cfg = {});

inline int corridor_tile_state(int tile) { return tile - 1; }
inline int corridor_sink_state(const CorridorConfig& cfg) { return cfg.tiles; }

// Car in a two-floor valley. State (x, v); deterministic start at the higher
// floor; reward -h(x). Dynamics: v' = v + dt (a - g h'(x) - friction v),
// x' = x + dt v', with x clipped to [x_min, x_max] and actions clipped to
// [-action_bound, action_bound].
struct HillConfig {
  std::function<double(double)> profile;        // h(x)
  std::function<double(double)> profile_slope;  // h'(x)
  double x_initial = -3.0;
  double x_target = 3.0;
  double x_min = -6.0;
  double x_max = 6.0;
  double dt = 0.1;
  double gravity = 1.0;
  double friction = 0.3;
  double action_bound = 2.0;
  double gamma = 0.99;

  // Default double-well profile: minima near +-3, right floor deeper.
  static HillConfig defaults();
};

MdpSpec make_hill(const HillConfig& cfg = HillConfig::defaults());

// MiniGrid-style maze. State = (cell x, cell y, orientation N/E/S/W); actions
// turn-left, turn-right, move-forward, idle. Layouts are generated natively as
// deterministic functions of (name, layout_seed). Start: top-left floor cell
// facing East; goal: bottom-right floor cell, absorbing. The arrival move
// pays 1000 (dense mode additionally pays -1 per non-idle move).
struct GridMazeConfig {
  std::string layout = "Empty-8x8";
  bool dense = false;
  std::uint64_t layout_seed = 0;
  double gamma = 0.98;
};

enum class MazeAction { TurnLeft = 0, TurnRight = 1, Forward = 2, Idle = 3 };

struct MazeLayout {
  int width = 0;
  int height = 0;
  std::vector<std::string> rows;  // '#' wall, '.' floor, 'S' start, 'G' goal
  int start_x = 0, start_y = 0;
  int goal_x = 0, goal_y = 0;

  bool wall(int x, int y) const { return rows[y][x] == '#'; }
  std::string ascii() const;
};

MazeLayout make_maze_layout(const std::string& name, std::uint64_t seed);

struct MazeState {
  int x, y, orientation;  // orientation 0=N, 1=E, 2=S, 3=W
};

struct GridMaze {
  MdpSpec mdp;
  MazeLayout layout;
  std::vector<MazeState> states;  // per finite-state index
};

GridMaze make_grid_maze(const GridMazeConfig& cfg);

}  // namespace pgx
