#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgx/rng.hpp"

namespace pgx {

struct EnvironmentContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedOperation : std::logic_error {
  using std::logic_error::logic_error;
};

// A state is either a finite-MDP index (with an observation vector attached
// for function-approximation policies) or a raw continuous observation.
struct State {
  int index = -1;  // >= 0 for finite MDPs
  Eigen::VectorXd obs;

  bool finite() const { return index >= 0; }
};

// Discrete actions carry an index; continuous actions a scalar control.
struct Action {
  int index = -1;
  double u = 0.0;
};

// Explicit tabular representation used by the exact solvers.
struct FiniteMdp {
  int num_states = 0;
  int num_actions = 0;
  Eigen::VectorXd p0;                      // |S|
  std::vector<Eigen::MatrixXd> transition; // per action, |S| x |S|, rows sum to 1
  Eigen::MatrixXd reward;                  // |S| x |A|
  std::vector<Eigen::VectorXd> obs;        // per-state observation fed to policies

  void validate() const;
};

struct MdpSpec {
  std::string name;
  double gamma = 0.99;
  double r_max = 0.0;

  std::optional<FiniteMdp> finite;

  // Generic sampling interface; for finite MDPs these are derived from the
  // table at construction.
  std::function<State(Rng&)> sample_initial;
  std::function<State(const State&, const Action&, Rng&)> step;
  std::function<double(const State&, const Action&)> reward;

  // Feature used by state-visitation bonuses, z = phi(s).
  std::function<Eigen::VectorXd(const State&)> feature;

  bool is_finite() const { return finite.has_value(); }
};

struct Trajectory {
  std::vector<State> states;    // T + 1
  std::vector<Action> actions;  // T
  std::vector<double> rewards;  // T
  std::uint64_t seed = 0;

  int horizon() const { return static_cast<int>(actions.size()); }
};

struct VisitationMeasure {
  Eigen::VectorXd probs;  // over finite states, sums to 1
  double gamma = 0.0;
};

class Policy;  // policy.hpp

// Samples s0 ~ p0, a_t ~ pi(.|s_t), s_{t+1} ~ p(.|s_t, a_t) for `horizon`
// steps. Deterministic given (seed, mdp, policy, horizon).
Trajectory sample_trajectory(const MdpSpec& mdp, const Policy& policy,
                             int horizon, std::uint64_t seed);

// Sum_t gamma^t r_t over the stored rewards.
double discounted_return(const Trajectory& traj, double gamma);

// Re-evaluates rho(s_t, a_t) against the stored pairs; throws on mismatch.
void validate_trajectory(const Trajectory& traj, const MdpSpec& mdp);

// Builds a finite MdpSpec around a validated table. Observations default to
// the state index as a 1-d vector when `obs` is empty.
MdpSpec make_finite_mdp(std::string name, FiniteMdp table, double gamma);

}  // namespace pgx
