#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "pgx/density.hpp"
#include "pgx/mdp.hpp"
#include "pgx/policy.hpp"

namespace pgx {

enum class BonusKind { ActionEntropy, StateEntropy };
enum class EstimatorKind { Histogram, Gmm };

// One intrinsic reward term of the shaped objective. Action-entropy bonuses
// need no estimator; state-visitation bonuses carry their density estimator
// configuration and are refit on every evaluation batch.
struct IntrinsicBonus {
  BonusKind kind = BonusKind::ActionEntropy;
  double weight = 0.0;  // lambda_k >= 0
  EstimatorKind estimator = EstimatorKind::Histogram;
  HistogramSpec histogram;
  int gmm_components = 10;
};

// rho^a(s, a) = -log pi(a|s).
double action_entropy_bonus(const Policy& policy, const State& s, const Action& a);

struct EvalBudget {
  int histories = 8;
  int horizon = 100;
};

// The pair (J, J^int): base MDP, policy family, bonus list, evaluation budget.
struct ShapedObjective {
  std::shared_ptr<const MdpSpec> mdp;
  std::shared_ptr<Policy> policy;  // prototype; evaluation clones + reparameterizes
  std::vector<IntrinsicBonus> bonuses;
  EvalBudget budget;
};

// A sampled evaluation batch with intrinsic rewards attached. intrinsic[k][n]
// holds the per-step bonus values of trajectory n under bonus k (already
// treated as constants downstream, per the biased-gradient convention).
struct Batch {
  std::vector<Trajectory> trajectories;
  std::vector<std::vector<std::vector<double>>> intrinsic;  // [bonus][traj][t]
  std::shared_ptr<Policy> policy;  // the policy that generated the batch
};

Batch sample_batch(const ShapedObjective& obj, const Eigen::VectorXd& theta,
                   const EvalBudget& budget, std::uint64_t seed);

struct Evaluation {
  double objective = 0.0;                 // L-hat
  double extrinsic = 0.0;                 // J-hat
  Eigen::VectorXd intrinsic;              // unweighted J^int-hat per bonus
  Eigen::VectorXd per_traj_objective;     // per-trajectory L, for std errors
  Eigen::VectorXd per_traj_extrinsic;
};

Evaluation evaluate_batch(const ShapedObjective& obj, const Batch& batch);

Evaluation evaluate_shaped_objective(const ShapedObjective& obj,
                                     const Eigen::VectorXd& theta,
                                     const EvalBudget& budget, std::uint64_t seed);

// Exact intrinsic reward table for finite MDPs, with the density taken from
// the exact visitation measure; used by the analysis oracles.
Eigen::MatrixXd exact_intrinsic_reward_table(const MdpSpec& mdp,
                                             const Policy& policy,
                                             const IntrinsicBonus& bonus);

}  // namespace pgx
