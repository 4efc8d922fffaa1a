#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "pgx/envs.hpp"
#include "pgx/oracle.hpp"
#include "pgx/policy.hpp"

using namespace pgx;

TEST_CASE("corridor: left wall clips") {
  MdpSpec mdp = make_corridor();
  // From tile 1, action left: stay with probability 1.
  CHECK(mdp.finite->transition[0](0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("corridor: idle/move split from an interior tile") {
  MdpSpec mdp = make_corridor();
  int s7 = corridor_tile_state(7);
  CHECK(mdp.finite->transition[1](s7, s7) == doctest::Approx(0.7));
  CHECK(mdp.finite->transition[1](s7, s7 + 1) == doctest::Approx(0.3));
}

TEST_CASE("corridor: transition rows sum to 1") {
  MdpSpec mdp = make_corridor();
  for (const Eigen::MatrixXd& P : mdp.finite->transition)
    for (int s = 0; s < P.rows(); ++s)
      CHECK(P.row(s).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("corridor: reward paid once on arrival") {
  MdpSpec mdp = make_corridor();
  int target = corridor_tile_state(15);
  int sink = corridor_sink_state({});
  CHECK(mdp.finite->reward(target, 0) == 100.0);
  CHECK(mdp.finite->reward(target, 1) == 100.0);
  CHECK(mdp.finite->reward(sink, 0) == 0.0);
  CHECK(mdp.finite->transition[1](target, sink) == 1.0);
  CHECK(mdp.finite->transition[1](sink, sink) == 1.0);
}

TEST_CASE("corridor: exact_return non-decreasing on a 101-point theta grid") {
  MdpSpec mdp = make_corridor();
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    double theta = static_cast<double>(i) / 100.0;
    double j = exact_return(mdp, BernoulliPolicy(theta));
    CHECK(j >= prev - 1e-12);
    prev = j;
  }
}

TEST_CASE("hill: deterministic start at rest") {
  MdpSpec mdp = make_hill();
  Rng rng(1);
  State s0 = mdp.sample_initial(rng);
  CHECK(s0.obs[0] == doctest::Approx(-3.0));
  CHECK(s0.obs[1] == doctest::Approx(0.0));
}

TEST_CASE("hill: reward is -h(x) and deepest at the target floor") {
  HillConfig cfg = HillConfig::defaults();
  MdpSpec mdp = make_hill(cfg);
  State near_target;
  near_target.obs = Eigen::Vector2d(3.0, 0.0);
  Action idle;
  idle.u = 0.0;
  double r_target = mdp.reward(near_target, idle);
  // Scan the domain coarsely: no position pays more than the target basin.
  double best = -1e100;
  for (double x = cfg.x_min; x <= cfg.x_max; x += 0.01) best = std::max(best, -cfg.profile(x));
  CHECK(r_target == doctest::Approx(-cfg.profile(3.0)));
  // The true maximizer of -h sits within the right basin, close to x=3.
  CHECK(best <= r_target + 0.06);
}

TEST_CASE("hill: zero action from the left minimum stays put") {
  HillConfig cfg = HillConfig::defaults();
  // The left stationary point of the dynamics: h'(x) = 0 near -3, located by
  // Newton's method on the default profile's slope.
  double x = -3.0;
  for (int i = 0; i < 50; ++i) {
    double curvature = (12.0 * x * x - 36.0) / 100.0;
    x -= cfg.profile_slope(x) / curvature;
  }
  CHECK(std::abs(cfg.profile_slope(x)) < 1e-12);
  CHECK(x == doctest::Approx(-3.0).epsilon(0.1));

  MdpSpec mdp = make_hill(cfg);
  State s;
  s.obs = Eigen::Vector2d(x, 0.0);
  Action zero;
  zero.u = 0.0;
  Rng rng(3);
  for (int t = 0; t < 100; ++t) s = mdp.step(s, zero, rng);
  CHECK(s.obs[0] == doctest::Approx(x).epsilon(1e-9));
  CHECK(std::abs(s.obs[1]) < 1e-9);
}

TEST_CASE("hill: random-action rollouts stay in the declared box") {
  HillConfig cfg = HillConfig::defaults();
  MdpSpec mdp = make_hill(cfg);
  Rng rng(17);
  State s = mdp.sample_initial(rng);
  for (int t = 0; t < 10000; ++t) {
    Action a;
    a.u = (rng.uniform() * 2.0 - 1.0) * 5.0;  // beyond the bound; env clips
    s = mdp.step(s, a, rng);
    REQUIRE(s.obs[0] >= cfg.x_min);
    REQUIRE(s.obs[0] <= cfg.x_max);
    REQUIRE(std::isfinite(s.obs[1]));
  }
}

TEST_CASE("maze: Empty-8x8 has 144 states") {
  GridMaze maze = make_grid_maze({});
  CHECK(maze.mdp.finite->num_states == 144);
  CHECK(maze.mdp.finite->num_actions == 4);
}

TEST_CASE("maze: unknown layout rejected") {
  GridMazeConfig cfg;
  cfg.layout = "Spiral-7x7";
  CHECK_THROWS_AS(make_grid_maze(cfg), std::invalid_argument);
}

TEST_CASE("maze: dense idle pays 0, sparse pays 0 off-goal") {
  GridMazeConfig dense_cfg;
  dense_cfg.dense = true;
  GridMaze dense = make_grid_maze(dense_cfg);
  GridMaze sparse = make_grid_maze({});
  const int idle = static_cast<int>(MazeAction::Idle);
  for (int s = 0; s < dense.mdp.finite->num_states; ++s) {
    const MazeState& ms = dense.states[s];
    bool at_goal = ms.x == dense.layout.goal_x && ms.y == dense.layout.goal_y;
    if (!at_goal) CHECK(dense.mdp.finite->reward(s, idle) == 0.0);
  }
  for (int s = 0; s < sparse.mdp.finite->num_states; ++s) {
    const MazeState& ms = sparse.states[s];
    for (int a = 0; a < 4; ++a) {
      double r = sparse.mdp.finite->reward(s, a);
      // Nonzero only for the arrival move onto the goal.
      if (r != 0.0) {
        CHECK(r == 1000.0);
        CHECK(a == static_cast<int>(MazeAction::Forward));
        CHECK((std::abs(ms.x - sparse.layout.goal_x) +
               std::abs(ms.y - sparse.layout.goal_y)) == 1);
      }
    }
  }
}

TEST_CASE("maze: forward into a wall leaves position unchanged") {
  GridMaze maze = make_grid_maze({});
  // Start cell (1,1) facing North (orientation 0) has a wall above.
  int idx = -1;
  for (int s = 0; s < maze.mdp.finite->num_states; ++s)
    if (maze.states[s].x == 1 && maze.states[s].y == 1 &&
        maze.states[s].orientation == 0)
      idx = s;
  REQUIRE(idx >= 0);
  const Eigen::MatrixXd& P = maze.mdp.finite->transition[static_cast<int>(MazeAction::Forward)];
  CHECK(P(idx, idx) == doctest::Approx(1.0));
}

TEST_CASE("maze: goal states absorbing with zero reward") {
  GridMaze maze = make_grid_maze({});
  for (int s = 0; s < maze.mdp.finite->num_states; ++s) {
    const MazeState& ms = maze.states[s];
    if (ms.x != maze.layout.goal_x || ms.y != maze.layout.goal_y) continue;
    for (int a = 0; a < 4; ++a) {
      CHECK(maze.mdp.finite->reward(s, a) == 0.0);
      CHECK(maze.mdp.finite->transition[a](s, s) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("maze: every named layout is connected and renders") {
  for (const char* name :
       {"Empty-8x8", "Empty-16x16", "SimpleCrossingS9N1", "SimpleCrossingS9N2",
        "SimpleCrossingS9N3", "SimpleCrossingS11N5", "FourRooms"}) {
    for (std::uint64_t seed : {0ull, 1ull, 7ull}) {
      MazeLayout layout = make_maze_layout(name, seed);
      CHECK(layout.rows.size() == static_cast<size_t>(layout.height));
      std::string art = layout.ascii();
      CHECK(art.find('S') != std::string::npos);
      CHECK(art.find('G') != std::string::npos);
      // Constructing the MDP runs the connectivity check.
      GridMazeConfig cfg;
      cfg.layout = name;
      cfg.layout_seed = seed;
      CHECK_NOTHROW(make_grid_maze(cfg));
    }
  }
}

TEST_CASE("maze: layout generation is deterministic in (name, seed)") {
  MazeLayout a = make_maze_layout("SimpleCrossingS9N3", 5);
  MazeLayout b = make_maze_layout("SimpleCrossingS9N3", 5);
  MazeLayout c = make_maze_layout("SimpleCrossingS9N3", 6);
  CHECK(a.ascii() == b.ascii());
  CHECK(a.ascii() != c.ascii());
}

TEST_CASE("maze: golden Empty-8x8 rendering") {
  CHECK(make_maze_layout("Empty-8x8", 0).ascii() ==
        "########\n"
        "#S.....#\n"
        "#......#\n"
        "#......#\n"
        "#......#\n"
        "#......#\n"
        "#.....G#\n"
        "########\n");
}
