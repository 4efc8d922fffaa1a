#include "pgx/envs.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace pgx {

// ---------------------------------------------------------------------------
// Corridor

MdpSpec make_corridor(const CorridorConfig& cfg) {
  if (cfg.tiles < 2) throw std::invalid_argument("corridor needs at least 2 tiles");
  if (cfg.idle_prob < 0.0 || cfg.idle_prob > 1.0)
    throw std::invalid_argument("idle probability must be in [0, 1]");

  // Indices 0..tiles-1 are tiles 1..S; index `tiles` is the absorbed sink
  // entered one step after arrival, so the terminal reward is paid exactly
  // once (on the step where the state is tile S).
  int n = cfg.tiles + 1;
  int target = cfg.tiles - 1;
  int sink = cfg.tiles;

  FiniteMdp fin;
  fin.num_states = n;
  fin.num_actions = 2;  // 0 = left, 1 = right
  fin.p0 = Eigen::VectorXd::Zero(n);
  fin.p0[0] = 1.0;
  fin.reward = Eigen::MatrixXd::Zero(n, 2);
  fin.reward.row(target).setConstant(cfg.terminal_reward);

  for (int a = 0; a < 2; ++a) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
    int dir = a == 0 ? -1 : +1;
    for (int s = 0; s < target; ++s) {
      int moved = std::clamp(s + dir, 0, target);
      P(s, s) += cfg.idle_prob;
      P(s, moved) += 1.0 - cfg.idle_prob;
    }
    P(target, sink) = 1.0;
    P(sink, sink) = 1.0;
    fin.transition.push_back(std::move(P));
  }

  fin.obs.resize(n);
  for (int s = 0; s < n; ++s)
    fin.obs[s] = Eigen::VectorXd::Constant(1, static_cast<double>(s + 1));

  return make_finite_mdp("corridor", std::move(fin), cfg.gamma);
}

// ---------------------------------------------------------------------------
// Hill car

HillConfig HillConfig::defaults() {
  HillConfig cfg;
  cfg.profile = [](double x) {
    double w = x * x - 9.0;
    return (w * w - 10.0 * x) / 100.0;
  };
  cfg.profile_slope = [](double x) {
    return (4.0 * x * (x * x - 9.0) - 10.0) / 100.0;
  };
  return cfg;
}

MdpSpec make_hill(const HillConfig& cfg) {
  if (!cfg.profile || !cfg.profile_slope)
    throw std::invalid_argument("hill profile and slope are required");

  MdpSpec mdp;
  mdp.name = "hill";
  mdp.gamma = cfg.gamma;
  mdp.r_max = std::max(std::abs(cfg.profile(cfg.x_min)),
                       std::abs(cfg.profile(cfg.x_max)));

  auto make_state = [](double x, double v) {
    State s;
    s.obs = Eigen::Vector2d(x, v);
    return s;
  };

  mdp.sample_initial = [cfg, make_state](Rng&) {
    return make_state(cfg.x_initial, 0.0);
  };
  mdp.step = [cfg, make_state](const State& s, const Action& a, Rng&) {
    double x = s.obs[0];
    double v = s.obs[1];
    double force = std::clamp(a.u, -cfg.action_bound, cfg.action_bound);
    double v_next =
        v + cfg.dt * (force - cfg.gravity * cfg.profile_slope(x) - cfg.friction * v);
    v_next = std::clamp(v_next, -8.0, 8.0);
    double x_next = x + cfg.dt * v_next;
    if (x_next < cfg.x_min) {
      x_next = cfg.x_min;
      v_next = 0.0;
    } else if (x_next > cfg.x_max) {
      x_next = cfg.x_max;
      v_next = 0.0;
    }
    if (!std::isfinite(x_next) || !std::isfinite(v_next))
      throw EnvironmentContractError("hill dynamics produced a non-finite state");
    return make_state(x_next, v_next);
  };
  mdp.reward = [cfg](const State& s, const Action&) { return -cfg.profile(s.obs[0]); };
  mdp.feature = [](const State& s) {
    return Eigen::VectorXd::Constant(1, s.obs[0]);
  };
  return mdp;
}

// ---------------------------------------------------------------------------
// Grid mazes

std::string MazeLayout::ascii() const {
  std::ostringstream out;
  for (int y = 0; y < height; ++y) {
    std::string row = rows[y];
    if (y == start_y) row[start_x] = 'S';
    if (y == goal_y) row[goal_x] = 'G';
    out << row << "\n";
  }
  return out.str();
}

namespace {

bool maze_connected(const MazeLayout& layout) {
  std::vector<std::vector<bool>> seen(layout.height,
                                      std::vector<bool>(layout.width, false));
  std::queue<std::pair<int, int>> frontier;
  frontier.emplace(layout.start_x, layout.start_y);
  seen[layout.start_y][layout.start_x] = true;
  while (!frontier.empty()) {
    auto [x, y] = frontier.front();
    frontier.pop();
    if (x == layout.goal_x && y == layout.goal_y) return true;
    const int dx[] = {1, -1, 0, 0};
    const int dy[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      int nx = x + dx[k], ny = y + dy[k];
      if (nx < 0 || ny < 0 || nx >= layout.width || ny >= layout.height) continue;
      if (layout.wall(nx, ny) || seen[ny][nx]) continue;
      seen[ny][nx] = true;
      frontier.emplace(nx, ny);
    }
  }
  return false;
}

MazeLayout empty_layout(int size) {
  MazeLayout layout;
  layout.width = layout.height = size;
  layout.rows.assign(size, std::string(size, '.'));
  for (int i = 0; i < size; ++i) {
    layout.rows[0][i] = layout.rows[size - 1][i] = '#';
    layout.rows[i][0] = layout.rows[i][size - 1] = '#';
  }
  layout.start_x = layout.start_y = 1;
  layout.goal_x = layout.goal_y = size - 2;
  return layout;
}

// N full-span crossing walls at even interior coordinates, one opening each
// at an odd coordinate. A draw can still seal a one-cell corridor between two
// parallel walls, so generation retries deterministically until the start and
// goal are connected.
MazeLayout crossing_layout_attempt(int size, int crossings, std::uint64_t seed) {
  MazeLayout layout = empty_layout(size);
  Rng rng(mix64(seed ^ 0x6d617a65ULL));

  std::vector<int> even_coords;
  for (int c = 2; c <= size - 3; c += 2) even_coords.push_back(c);
  std::vector<int> odd_coords;
  for (int c = 1; c <= size - 2; c += 2) odd_coords.push_back(c);

  std::vector<int> vertical = even_coords, horizontal = even_coords;
  std::shuffle(vertical.begin(), vertical.end(), rng.engine());
  std::shuffle(horizontal.begin(), horizontal.end(), rng.engine());

  int placed = 0;
  bool place_vertical = rng.uniform() < 0.5;
  while (placed < crossings) {
    std::vector<int>* pool = place_vertical ? &vertical : &horizontal;
    if (pool->empty()) pool = place_vertical ? &horizontal : &vertical;
    if (pool->empty())
      throw std::invalid_argument("too many crossings for this maze size");
    int coord = pool->back();
    pool->pop_back();
    int opening = odd_coords[static_cast<size_t>(rng.uniform() * odd_coords.size())];
    bool is_vertical = (pool == &vertical);
    for (int i = 1; i <= size - 2; ++i) {
      int x = is_vertical ? coord : i;
      int y = is_vertical ? i : coord;
      if ((is_vertical ? y : x) == opening) continue;
      layout.rows[y][x] = '#';
    }
    ++placed;
    place_vertical = !place_vertical;
  }
  return layout;
}

MazeLayout crossing_layout(int size, int crossings, std::uint64_t seed) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    MazeLayout layout = crossing_layout_attempt(
        size, crossings, derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    if (maze_connected(layout)) return layout;
  }
  throw std::invalid_argument("could not generate a connected crossing maze");
}

MazeLayout four_rooms_layout(int size, std::uint64_t seed) {
  MazeLayout layout = empty_layout(size);
  Rng rng(mix64(seed ^ 0x726f6f6dULL));
  int mid = size / 2;
  for (int i = 1; i <= size - 2; ++i) {
    layout.rows[mid][i] = '#';
    layout.rows[i][mid] = '#';
  }
  // One doorway per half-wall segment, at an odd coordinate.
  auto pick = [&](int lo, int hi) {
    std::vector<int> odds;
    for (int c = lo; c <= hi; ++c)
      if (c % 2 == 1 && c != mid) odds.push_back(c);
    return odds[static_cast<size_t>(rng.uniform() * odds.size())];
  };
  layout.rows[mid][pick(1, mid - 1)] = '.';
  layout.rows[mid][pick(mid + 1, size - 2)] = '.';
  layout.rows[pick(1, mid - 1)][mid] = '.';
  layout.rows[pick(mid + 1, size - 2)][mid] = '.';
  return layout;
}

}  // namespace

MazeLayout make_maze_layout(const std::string& name, std::uint64_t seed) {
  MazeLayout layout;
  if (name == "Empty-8x8") {
    layout = empty_layout(8);
  } else if (name == "Empty-16x16") {
    layout = empty_layout(16);
  } else if (name == "SimpleCrossingS9N1") {
    layout = crossing_layout(9, 1, seed);
  } else if (name == "SimpleCrossingS9N2") {
    layout = crossing_layout(9, 2, seed);
  } else if (name == "SimpleCrossingS9N3") {
    layout = crossing_layout(9, 3, seed);
  } else if (name == "SimpleCrossingS11N5") {
    layout = crossing_layout(11, 5, seed);
  } else if (name == "FourRooms") {
    layout = four_rooms_layout(11, seed);
  } else {
    throw std::invalid_argument("unknown maze layout: " + name);
  }
  if (!maze_connected(layout))
    throw EnvironmentContractError("generated maze is not connected: " + name);
  return layout;
}

GridMaze make_grid_maze(const GridMazeConfig& cfg) {
  GridMaze maze;
  maze.layout = make_maze_layout(cfg.layout, cfg.layout_seed);
  const MazeLayout& lay = maze.layout;

  // Enumerate floor cells x 4 orientations.
  std::vector<std::vector<int>> cell_id(lay.height, std::vector<int>(lay.width, -1));
  int cells = 0;
  for (int y = 0; y < lay.height; ++y)
    for (int x = 0; x < lay.width; ++x)
      if (!lay.wall(x, y)) cell_id[y][x] = cells++;

  int n = cells * 4;
  maze.states.resize(n);
  for (int y = 0; y < lay.height; ++y)
    for (int x = 0; x < lay.width; ++x)
      if (cell_id[y][x] >= 0)
        for (int o = 0; o < 4; ++o)
          maze.states[cell_id[y][x] * 4 + o] = MazeState{x, y, o};

  auto state_of = [&](int x, int y, int o) { return cell_id[y][x] * 4 + o; };
  const int dx[] = {0, 1, 0, -1};  // N, E, S, W
  const int dy[] = {-1, 0, 1, 0};

  FiniteMdp fin;
  fin.num_states = n;
  fin.num_actions = 4;
  fin.p0 = Eigen::VectorXd::Zero(n);
  fin.p0[state_of(lay.start_x, lay.start_y, 1)] = 1.0;  // facing East
  fin.reward = Eigen::MatrixXd::Zero(n, 4);
  fin.transition.assign(4, Eigen::MatrixXd::Zero(n, n));

  for (int s = 0; s < n; ++s) {
    const MazeState& ms = maze.states[s];
    bool at_goal = ms.x == lay.goal_x && ms.y == lay.goal_y;
    for (int a = 0; a < 4; ++a) {
      int next = s;
      double r = 0.0;
      if (!at_goal) {
        switch (static_cast<MazeAction>(a)) {
          case MazeAction::TurnLeft:
            next = state_of(ms.x, ms.y, (ms.orientation + 3) % 4);
            break;
          case MazeAction::TurnRight:
            next = state_of(ms.x, ms.y, (ms.orientation + 1) % 4);
            break;
          case MazeAction::Forward: {
            int fx = ms.x + dx[ms.orientation];
            int fy = ms.y + dy[ms.orientation];
            if (!lay.wall(fx, fy)) {
              next = state_of(fx, fy, ms.orientation);
              if (fx == lay.goal_x && fy == lay.goal_y) r += 1000.0;
            }
            break;
          }
          case MazeAction::Idle:
            break;
        }
        if (cfg.dense && a != static_cast<int>(MazeAction::Idle)) r -= 1.0;
      }
      fin.transition[a](s, next) = 1.0;
      fin.reward(s, a) = r;
    }
  }

  fin.obs.resize(n);
  for (int s = 0; s < n; ++s) {
    const MazeState& ms = maze.states[s];
    Eigen::VectorXd o = Eigen::VectorXd::Zero(6);
    o[0] = static_cast<double>(ms.x) / lay.width;
    o[1] = static_cast<double>(ms.y) / lay.height;
    o[2 + ms.orientation] = 1.0;
    fin.obs[s] = o;
  }

  std::string name = "maze-" + cfg.layout + (cfg.dense ? "-dense" : "-sparse");
  maze.mdp = make_finite_mdp(name, std::move(fin), cfg.gamma);

  // State-visitation feature: the raw cell position.
  std::vector<Eigen::VectorXd> positions(n);
  for (int s = 0; s < n; ++s)
    positions[s] = Eigen::Vector2d(maze.states[s].x, maze.states[s].y);
  maze.mdp.feature = [positions](const State& s) { return positions[s.index]; };
  return maze;
}

}  // namespace pgx
