#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pgx/shaping.hpp"

namespace pgx {

// Ascent direction d = g + sum_k i_k, with the parts kept separately.
struct GradientEstimate {
  Eigen::VectorXd direction;                // d-hat
  Eigen::VectorXd extrinsic;                // g-hat
  std::vector<Eigen::VectorXd> intrinsic;   // i-hat per bonus (weight included)
  int histories = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
};

// REINFORCE with reward-to-go, discounted from episode start, no baseline:
// g = (1/N) sum_n sum_t grad log pi(a_t|s_t) * sum_{t'>=t} gamma^t' r_t'.
Eigen::VectorXd reinforce_extrinsic(const Batch& batch, double gamma);

// Same form with r_t replaced by lambda * rho^int_k(s_t, a_t); the bonus
// values are constants (no differentiation through the estimator).
Eigen::VectorXd reinforce_intrinsic(const Batch& batch, double gamma, int bonus_index,
                                    const ShapedObjective& obj);

// Samples one batch and assembles g, i_k, and d on it.
GradientEstimate estimate_direction(const ShapedObjective& obj,
                                    const Eigen::VectorXd& theta,
                                    const EvalBudget& budget, std::uint64_t seed);

enum class UpdateRule { Sga, Adam };

struct OptimizerState {
  UpdateRule rule = UpdateRule::Adam;
  double step_size = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  Eigen::VectorXd m;  // first moment
  Eigen::VectorXd v;  // second moment
  long step = 0;

  static OptimizerState sga(double alpha);
  static OptimizerState adam(double alpha);
};

// Ascent step; rejects non-finite directions.
Eigen::VectorXd update(OptimizerState& opt, const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& direction);

struct TrainRecord {
  long iteration = 0;
  double extrinsic = 0.0;                    // J-hat
  double objective = 0.0;                    // L-hat
  std::vector<double> intrinsic;             // weighted contribution per bonus
  double grad_norm = 0.0;
  std::uint64_t seed = 0;
  double millis = 0.0;
};

struct TrainLog {
  std::vector<TrainRecord> records;
  Eigen::VectorXd final_params;

  // CSV columns: iter,J_hat,L_hat,Jint_<k>,grad_norm,seed,ms
  std::string csv(int num_bonuses) const;
};

TrainLog train(const ShapedObjective& obj, OptimizerState optimizer,
               long iterations, std::uint64_t seed);

}  // namespace pgx
