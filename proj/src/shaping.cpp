#include "pgx/shaping.hpp"

#include <cmath>

#include "pgx/oracle.hpp"
#include "pgx/parallel.hpp"

namespace pgx {

double action_entropy_bonus(const Policy& policy, const State& s, const Action& a) {
  return -policy.log_prob(s, a);
}

namespace {

std::vector<std::vector<double>> state_entropy_rewards(
    const ShapedObjective& obj, const IntrinsicBonus& bonus,
    const std::vector<Trajectory>& trajs, std::uint64_t seed) {
  const MdpSpec& mdp = *obj.mdp;
  std::unique_ptr<DensityEstimator> est;
  if (bonus.estimator == EstimatorKind::Histogram) {
    est = std::make_unique<HistogramEstimator>(
        fit_visitation_histogram(trajs, mdp.gamma, mdp.feature, bonus.histogram));
  } else {
    // GMM on the raw batch states, undiscounted likelihood.
    std::vector<Eigen::VectorXd> samples;
    for (const Trajectory& traj : trajs)
      for (int t = 0; t < traj.horizon(); ++t)
        samples.push_back(mdp.feature(traj.states[t]));
    est = std::make_unique<GmmEstimator>(
        fit_gmm(samples, bonus.gmm_components, seed));
  }
  std::vector<std::vector<double>> rewards(trajs.size());
  for (size_t n = 0; n < trajs.size(); ++n) {
    rewards[n].resize(trajs[n].horizon());
    for (int t = 0; t < trajs[n].horizon(); ++t)
      rewards[n][t] = -est->log_density(mdp.feature(trajs[n].states[t]));
  }
  return rewards;
}

}  // namespace

Batch sample_batch(const ShapedObjective& obj, const Eigen::VectorXd& theta,
                   const EvalBudget& budget, std::uint64_t seed) {
  if (budget.histories < 1)
    throw std::invalid_argument("evaluation budget needs at least one history");
  Batch batch;
  batch.policy = obj.policy->clone();
  batch.policy->set_params(theta);

  batch.trajectories.resize(budget.histories);
  const Policy& policy = *batch.policy;
  const MdpSpec& mdp = *obj.mdp;
  parallel_for(budget.histories, [&](int n) {
    batch.trajectories[n] =
        sample_trajectory(mdp, policy, budget.horizon, derive_seed(seed, n));
  });

  batch.intrinsic.resize(obj.bonuses.size());
  for (size_t k = 0; k < obj.bonuses.size(); ++k) {
    const IntrinsicBonus& bonus = obj.bonuses[k];
    if (bonus.weight < 0.0)
      throw std::invalid_argument("intrinsic bonus weights must be non-negative");
    if (bonus.kind == BonusKind::ActionEntropy) {
      batch.intrinsic[k].resize(batch.trajectories.size());
      for (size_t n = 0; n < batch.trajectories.size(); ++n) {
        const Trajectory& traj = batch.trajectories[n];
        batch.intrinsic[k][n].resize(traj.horizon());
        for (int t = 0; t < traj.horizon(); ++t)
          batch.intrinsic[k][n][t] =
              action_entropy_bonus(policy, traj.states[t], traj.actions[t]);
      }
    } else {
      batch.intrinsic[k] = state_entropy_rewards(
          obj, bonus, batch.trajectories, derive_seed(seed, 1ull << 32 | k));
    }
  }
  return batch;
}

Evaluation evaluate_batch(const ShapedObjective& obj, const Batch& batch) {
  const int n = static_cast<int>(batch.trajectories.size());
  const int n_bonus = static_cast<int>(obj.bonuses.size());
  const double gamma = obj.mdp->gamma;

  Evaluation eval;
  eval.intrinsic = Eigen::VectorXd::Zero(n_bonus);
  eval.per_traj_objective.resize(n);
  eval.per_traj_extrinsic.resize(n);

  for (int i = 0; i < n; ++i) {
    double ext = discounted_return(batch.trajectories[i], gamma);
    double total = ext;
    for (int k = 0; k < n_bonus; ++k) {
      double scale = 1.0;
      double sum = 0.0;
      for (double r : batch.intrinsic[k][i]) {
        sum += scale * r;
        scale *= gamma;
      }
      eval.intrinsic[k] += sum;
      total += obj.bonuses[k].weight * sum;
    }
    eval.per_traj_extrinsic[i] = ext;
    eval.per_traj_objective[i] = total;
  }
  eval.extrinsic = eval.per_traj_extrinsic.mean();
  eval.objective = eval.per_traj_objective.mean();
  if (n_bonus > 0) eval.intrinsic /= n;
  return eval;
}

Evaluation evaluate_shaped_objective(const ShapedObjective& obj,
                                     const Eigen::VectorXd& theta,
                                     const EvalBudget& budget, std::uint64_t seed) {
  return evaluate_batch(obj, sample_batch(obj, theta, budget, seed));
}

Eigen::MatrixXd exact_intrinsic_reward_table(const MdpSpec& mdp, const Policy& policy,
                                             const IntrinsicBonus& bonus) {
  if (!mdp.finite)
    throw UnsupportedOperation("exact intrinsic rewards need a finite MDP");
  const FiniteMdp& fin = *mdp.finite;
  Eigen::MatrixXd table(fin.num_states, fin.num_actions);

  if (bonus.kind == BonusKind::ActionEntropy) {
    for (int s = 0; s < fin.num_states; ++s) {
      State state;
      state.index = s;
      state.obs = fin.obs[s];
      Eigen::VectorXd pi = policy.action_probs(state);
      for (int a = 0; a < fin.num_actions; ++a)
        table(s, a) = -std::log(std::max(pi[a], 1e-300));
    }
  } else {
    Eigen::VectorXd d = exact_visitation(mdp, policy).probs;
    // Aggregate visitation mass per feature bin, mirroring the histogram.
    HistogramEstimator probe(bonus.histogram,
                             Eigen::VectorXd::Zero(bonus.histogram.total_bins()));
    Eigen::VectorXd masses = Eigen::VectorXd::Zero(bonus.histogram.total_bins());
    std::vector<int> bin_of_state(fin.num_states);
    for (int s = 0; s < fin.num_states; ++s) {
      State state;
      state.index = s;
      state.obs = fin.obs[s];
      bin_of_state[s] = probe.bin_of(mdp.feature(state));
      masses[bin_of_state[s]] += d[s];
    }
    for (int s = 0; s < fin.num_states; ++s) {
      double m = std::max(masses[bin_of_state[s]], 1e-300);
      table.row(s).setConstant(-std::log(m));
    }
  }
  return table;
}

}  // namespace pgx
