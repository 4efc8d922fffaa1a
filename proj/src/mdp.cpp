#include "pgx/mdp.hpp"

#include <cmath>
#include <sstream>

#include "pgx/policy.hpp"

namespace pgx {

void FiniteMdp::validate() const {
  if (num_states <= 0 || num_actions <= 0)
    throw std::invalid_argument("finite MDP needs at least one state and action");
  if (p0.size() != num_states || std::abs(p0.sum() - 1.0) > 1e-12 || p0.minCoeff() < 0)
    throw std::invalid_argument("initial distribution is not a probability vector");
  if (static_cast<int>(transition.size()) != num_actions)
    throw std::invalid_argument("transition table has wrong action count");
  for (const auto& P : transition) {
    if (P.rows() != num_states || P.cols() != num_states)
      throw std::invalid_argument("transition matrix has wrong shape");
    for (int s = 0; s < num_states; ++s) {
      if (std::abs(P.row(s).sum() - 1.0) > 1e-12 || P.row(s).minCoeff() < 0)
        throw std::invalid_argument("transition row does not sum to 1");
    }
  }
  if (reward.rows() != num_states || reward.cols() != num_actions)
    throw std::invalid_argument("reward table has wrong shape");
}

MdpSpec make_finite_mdp(std::string name, FiniteMdp table, double gamma) {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("discount factor must be in [0, 1)");
  table.validate();
  if (table.obs.empty()) {
    table.obs.resize(table.num_states);
    for (int s = 0; s < table.num_states; ++s)
      table.obs[s] = Eigen::VectorXd::Constant(1, static_cast<double>(s));
  }

  MdpSpec mdp;
  mdp.name = std::move(name);
  mdp.gamma = gamma;
  mdp.r_max = table.reward.cwiseAbs().maxCoeff();
  // The sampling closures share their own owner so they stay valid however
  // the MdpSpec itself is copied or moved around.
  auto fin = std::make_shared<const FiniteMdp>(std::move(table));
  mdp.finite = *fin;

  auto to_state = [fin](int index) {
    State s;
    s.index = index;
    s.obs = fin->obs[index];
    return s;
  };
  auto draw_categorical = [](const Eigen::VectorXd& probs, double u) {
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < probs.size(); ++i) {
      if (probs[i] <= 0.0) continue;
      acc += probs[i];
      last = i;
      if (u < acc) return i;
    }
    return last;  // guard against rounding at u ~ 1
  };

  mdp.sample_initial = [fin, to_state, draw_categorical](Rng& rng) {
    return to_state(draw_categorical(fin->p0, rng.uniform()));
  };
  mdp.step = [fin, to_state, draw_categorical](const State& s, const Action& a, Rng& rng) {
    if (s.index < 0 || s.index >= fin->num_states)
      throw EnvironmentContractError("state index out of range");
    if (a.index < 0 || a.index >= fin->num_actions)
      throw EnvironmentContractError("action index out of range");
    return to_state(
        draw_categorical(fin->transition[a.index].row(s.index), rng.uniform()));
  };
  mdp.reward = [fin](const State& s, const Action& a) {
    return fin->reward(s.index, a.index);
  };
  mdp.feature = [](const State& s) { return s.obs; };
  return mdp;
}

Trajectory sample_trajectory(const MdpSpec& mdp, const Policy& policy, int horizon,
                             std::uint64_t seed) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  Rng rng(seed);
  Trajectory traj;
  traj.seed = seed;
  traj.states.reserve(horizon + 1);
  traj.actions.reserve(horizon);
  traj.rewards.reserve(horizon);

  State s = mdp.sample_initial(rng);
  traj.states.push_back(s);
  for (int t = 0; t < horizon; ++t) {
    Action a = policy.sample(s, rng);
    double r = mdp.reward(s, a);
    State next = mdp.step(s, a, rng);
    traj.actions.push_back(a);
    traj.rewards.push_back(r);
    traj.states.push_back(next);
    s = std::move(next);
  }
  return traj;
}

double discounted_return(const Trajectory& traj, double gamma) {
  if (gamma < 0.0 || gamma >= 1.0)
    throw std::invalid_argument("discount factor must be in [0, 1)");
  double total = 0.0;
  double scale = 1.0;
  for (double r : traj.rewards) {
    total += scale * r;
    scale *= gamma;
  }
  return total;
}

void validate_trajectory(const Trajectory& traj, const MdpSpec& mdp) {
  if (traj.states.size() != traj.actions.size() + 1 ||
      traj.rewards.size() != traj.actions.size())
    throw std::invalid_argument("trajectory arrays have inconsistent lengths");
  for (int t = 0; t < traj.horizon(); ++t) {
    double expected = mdp.reward(traj.states[t], traj.actions[t]);
    if (expected != traj.rewards[t]) {
      std::ostringstream msg;
      msg << "stored reward at t=" << t << " (" << traj.rewards[t]
          << ") does not match rho(s_t, a_t) = " << expected;
      throw EnvironmentContractError(msg.str());
    }
  }
}

}  // namespace pgx
