#include "pgx/learn.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace pgx {

int g_max_threads = 1;
int max_threads() { return g_max_threads; }
void set_max_threads(int n) { g_max_threads = n < 1 ? 1 : n; }

namespace {

// Shared REINFORCE core: sum_n sum_t grad log pi(a_t|s_t) * R_n(t) / N with
// R_n(t) = sum_{t'>=t} gamma^t' r_n(t'), rewards taken from `rewards`.
Eigen::VectorXd reinforce(const Batch& batch, double gamma,
                          const std::function<double(int, int)>& rewards) {
  const Policy& policy = *batch.policy;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(policy.param_dim());
  for (size_t n = 0; n < batch.trajectories.size(); ++n) {
    const Trajectory& traj = batch.trajectories[n];
    const int horizon = traj.horizon();
    // Reward-to-go by backward accumulation over precomputed discounts.
    std::vector<double> to_go(horizon);
    double acc = 0.0;
    std::vector<double> powers(horizon);
    powers[0] = 1.0;
    for (int t = 1; t < horizon; ++t) powers[t] = powers[t - 1] * gamma;
    for (int t = horizon - 1; t >= 0; --t) {
      acc += powers[t] * rewards(static_cast<int>(n), t);
      to_go[t] = acc;
    }
    for (int t = 0; t < horizon; ++t) {
      if (to_go[t] == 0.0) continue;
      grad += to_go[t] * policy.grad_log_prob(traj.states[t], traj.actions[t]);
    }
  }
  return grad / static_cast<double>(batch.trajectories.size());
}

}  // namespace

Eigen::VectorXd reinforce_extrinsic(const Batch& batch, double gamma) {
  return reinforce(batch, gamma, [&](int n, int t) {
    return batch.trajectories[n].rewards[t];
  });
}

Eigen::VectorXd reinforce_intrinsic(const Batch& batch, double gamma, int bonus_index,
                                    const ShapedObjective& obj) {
  double lambda = obj.bonuses[bonus_index].weight;
  if (lambda == 0.0)
    return Eigen::VectorXd::Zero(batch.policy->param_dim());
  return reinforce(batch, gamma, [&](int n, int t) {
    return lambda * batch.intrinsic[bonus_index][n][t];
  });
}

GradientEstimate estimate_direction(const ShapedObjective& obj,
                                    const Eigen::VectorXd& theta,
                                    const EvalBudget& budget, std::uint64_t seed) {
  Batch batch = sample_batch(obj, theta, budget, seed);
  GradientEstimate est;
  est.histories = budget.histories;
  est.horizon = budget.horizon;
  est.seed = seed;
  est.extrinsic = reinforce_extrinsic(batch, obj.mdp->gamma);
  est.direction = est.extrinsic;
  for (size_t k = 0; k < obj.bonuses.size(); ++k) {
    est.intrinsic.push_back(
        reinforce_intrinsic(batch, obj.mdp->gamma, static_cast<int>(k), obj));
    est.direction += est.intrinsic.back();
  }
  return est;
}

OptimizerState OptimizerState::sga(double alpha) {
  OptimizerState opt;
  opt.rule = UpdateRule::Sga;
  opt.step_size = alpha;
  return opt;
}

OptimizerState OptimizerState::adam(double alpha) {
  OptimizerState opt;
  opt.rule = UpdateRule::Adam;
  opt.step_size = alpha;
  return opt;
}

Eigen::VectorXd update(OptimizerState& opt, const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& direction) {
  if (direction.size() != theta.size())
    throw std::invalid_argument("direction dimension does not match parameters");
  if (!direction.allFinite())
    throw std::runtime_error("update rejected: non-finite ascent direction");

  ++opt.step;
  if (opt.rule == UpdateRule::Sga)
    return theta + opt.step_size * direction;

  if (opt.m.size() != theta.size()) {
    opt.m = Eigen::VectorXd::Zero(theta.size());
    opt.v = Eigen::VectorXd::Zero(theta.size());
  }
  opt.m = opt.beta1 * opt.m + (1.0 - opt.beta1) * direction;
  opt.v = opt.beta2 * opt.v + (1.0 - opt.beta2) * direction.cwiseProduct(direction);
  double c1 = 1.0 - std::pow(opt.beta1, opt.step);
  double c2 = 1.0 - std::pow(opt.beta2, opt.step);
  Eigen::VectorXd m_hat = opt.m / c1;
  Eigen::VectorXd v_hat = opt.v / c2;
  return theta + opt.step_size *
                     (m_hat.array() / (v_hat.array().sqrt() + opt.eps)).matrix();
}

std::string TrainLog::csv(int num_bonuses) const {
  std::ostringstream out;
  out.precision(12);
  out << "iter,J_hat,L_hat";
  for (int k = 0; k < num_bonuses; ++k) out << ",Jint_" << k;
  out << ",grad_norm,seed,ms\n";
  for (const TrainRecord& rec : records) {
    out << rec.iteration << "," << rec.extrinsic << "," << rec.objective;
    for (int k = 0; k < num_bonuses; ++k) out << "," << rec.intrinsic[k];
    out << "," << rec.grad_norm << "," << rec.seed << "," << rec.millis << "\n";
  }
  return out.str();
}

TrainLog train(const ShapedObjective& obj, OptimizerState optimizer,
               long iterations, std::uint64_t seed) {
  TrainLog log;
  Eigen::VectorXd theta = obj.policy->params();
  const double gamma = obj.mdp->gamma;
  auto projector = obj.policy->clone();  // applies family parameter constraints

  for (long iter = 0; iter < iterations; ++iter) {
    auto start = std::chrono::steady_clock::now();
    std::uint64_t iter_seed = derive_seed(seed, static_cast<std::uint64_t>(iter));
    Batch batch = sample_batch(obj, theta, obj.budget, iter_seed);
    Evaluation eval = evaluate_batch(obj, batch);

    Eigen::VectorXd direction = reinforce_extrinsic(batch, gamma);
    for (size_t k = 0; k < obj.bonuses.size(); ++k)
      direction += reinforce_intrinsic(batch, gamma, static_cast<int>(k), obj);
    theta = update(optimizer, theta, direction);
    projector->set_params(theta);
    theta = projector->params();

    TrainRecord rec;
    rec.iteration = iter;
    rec.extrinsic = eval.extrinsic;
    rec.objective = eval.objective;
    for (size_t k = 0; k < obj.bonuses.size(); ++k)
      rec.intrinsic.push_back(obj.bonuses[k].weight * eval.intrinsic[k]);
    rec.grad_norm = direction.norm();
    rec.seed = iter_seed;
    rec.millis = std::chrono::duration<double, std::milli>(
                     std::chrono::steady_clock::now() - start)
                     .count();
    log.records.push_back(std::move(rec));
  }
  log.final_params = theta;
  return log;
}

}  // namespace pgx
