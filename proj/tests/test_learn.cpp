#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pgx/envs.hpp"
#include "pgx/learn.hpp"
#include "pgx/oracle.hpp"

using namespace pgx;

namespace {

ShapedObjective corridor_objective(double theta, std::vector<IntrinsicBonus> bonuses,
                                   int histories = 8, int horizon = 100) {
  ShapedObjective obj;
  obj.mdp = std::make_shared<MdpSpec>(make_corridor());
  obj.policy = std::make_shared<BernoulliPolicy>(theta);
  obj.bonuses = std::move(bonuses);
  obj.budget = {histories, horizon};
  return obj;
}

// One-state, one-step MDP with constant reward r and two actions.
MdpSpec one_step_mdp(double r) {
  FiniteMdp fin;
  fin.num_states = 1;
  fin.num_actions = 2;
  fin.p0 = Eigen::VectorXd::Constant(1, 1.0);
  fin.transition = {Eigen::MatrixXd::Constant(1, 1, 1.0),
                    Eigen::MatrixXd::Constant(1, 1, 1.0)};
  fin.reward = Eigen::MatrixXd::Constant(1, 2, r);
  return make_finite_mdp("one-step", std::move(fin), 0.5);
}

}  // namespace

TEST_CASE("reinforce_extrinsic: all-zero-reward batch gives exactly zero") {
  ShapedObjective obj = corridor_objective(0.0, {});
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 0.0);
  Batch batch = sample_batch(obj, theta, obj.budget, 3);
  Eigen::VectorXd g = reinforce_extrinsic(batch, obj.mdp->gamma);
  CHECK(g[0] == 0.0);
}

TEST_CASE("reinforce_extrinsic: T=1 estimator equals score times reward") {
  ShapedObjective obj;
  obj.mdp = std::make_shared<MdpSpec>(one_step_mdp(3.0));
  obj.policy = std::make_shared<BernoulliPolicy>(0.4);
  obj.budget = {1, 1};
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 0.4);
  Batch batch = sample_batch(obj, theta, obj.budget, 17);
  Eigen::VectorXd g = reinforce_extrinsic(batch, obj.mdp->gamma);
  const Trajectory& traj = batch.trajectories[0];
  double score = obj.policy->grad_log_prob(traj.states[0], traj.actions[0])[0];
  CHECK(g[0] == doctest::Approx(score * 3.0).epsilon(1e-12));
}

TEST_CASE("reinforce_extrinsic: unbiased for the truncated gradient at theta=0.5") {
  ShapedObjective obj = corridor_objective(0.5, {});
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 0.5);
  Eigen::VectorXd oracle = finite_difference_gradient_truncated(
      *obj.mdp, *obj.policy, obj.budget.horizon);

  const int reps = 2000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < reps; ++i) {
    Batch batch = sample_batch(obj, theta, obj.budget, derive_seed(900, i));
    double g = reinforce_extrinsic(batch, obj.mdp->gamma)[0];
    sum += g;
    sumsq += g * g;
  }
  double mean = sum / reps;
  double se = std::sqrt((sumsq / reps - mean * mean) / reps);
  CHECK(std::abs(mean - oracle[0]) <= 4.0 * se);
}

TEST_CASE("reinforce_intrinsic: lambda=0 gives exactly zero") {
  IntrinsicBonus bonus;
  bonus.kind = BonusKind::ActionEntropy;
  bonus.weight = 0.0;
  ShapedObjective obj = corridor_objective(0.5, {bonus});
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 0.5);
  Batch batch = sample_batch(obj, theta, obj.budget, 21);
  Eigen::VectorXd i0 = reinforce_intrinsic(batch, obj.mdp->gamma, 0, obj);
  CHECK(i0[0] == 0.0);
}

TEST_CASE("reinforce_intrinsic: hand expansion for T=1 action entropy") {
  IntrinsicBonus bonus;
  bonus.kind = BonusKind::ActionEntropy;
  bonus.weight = 2.0;
  ShapedObjective obj;
  obj.mdp = std::make_shared<MdpSpec>(one_step_mdp(0.0));
  obj.policy = std::make_shared<BernoulliPolicy>(0.3);
  obj.bonuses = {bonus};
  obj.budget = {1, 1};
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 0.3);
  Batch batch = sample_batch(obj, theta, obj.budget, 2);
  const Trajectory& traj = batch.trajectories[0];
  double p = traj.actions[0].index == 1 ? 0.3 : 0.7;
  double score = obj.policy->grad_log_prob(traj.states[0], traj.actions[0])[0];
  Eigen::VectorXd est = reinforce_intrinsic(batch, obj.mdp->gamma, 0, obj);
  CHECK(est[0] == doctest::Approx(2.0 * (-std::log(p)) * score).epsilon(1e-12));
}

TEST_CASE("reinforce_intrinsic: constant bonus equals constant-reward REINFORCE") {
  // A state-entropy bonus with the density uniform over all visited bins gives
  // a constant per-step value; the estimate must match the closed-form
  // REINFORCE on constant rewards applied to the same batch.
  IntrinsicBonus bonus;
  bonus.kind = BonusKind::StateEntropy;
  bonus.weight = 1.0;
  bonus.histogram = HistogramSpec::discrete_1d(1, 16);
  ShapedObjective obj = corridor_objective(0.0, {bonus}, 4, 20);
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 0.0);
  // theta=0 pins every trajectory at tile 1 -> the fitted histogram is a point
  // mass; every step gets the same bonus value c.
  Batch batch = sample_batch(obj, theta, obj.budget, 8);
  double c = batch.intrinsic[0][0][0];
  for (const auto& traj : batch.intrinsic[0])
    for (double v : traj) CHECK(v == doctest::Approx(c).epsilon(1e-12));

  Eigen::VectorXd est = reinforce_intrinsic(batch, obj.mdp->gamma, 0, obj);
  // Closed form: (c/N) sum_n sum_t score_t * sum_{t'>=t} gamma^{t'}.
  double expected = 0.0;
  for (const Trajectory& traj : batch.trajectories) {
    for (int t = 0; t < traj.horizon(); ++t) {
      double tail = 0.0;
      for (int u = t; u < traj.horizon(); ++u) tail += std::pow(obj.mdp->gamma, u);
      expected +=
          obj.policy->grad_log_prob(traj.states[t], traj.actions[t])[0] * c * tail;
    }
  }
  expected /= static_cast<double>(batch.trajectories.size());
  CHECK(est[0] == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("linearity: direction equals extrinsic plus intrinsic parts exactly") {
  IntrinsicBonus a;
  a.kind = BonusKind::ActionEntropy;
  a.weight = 0.3;
  IntrinsicBonus s;
  s.kind = BonusKind::StateEntropy;
  s.weight = 0.2;
  s.histogram = HistogramSpec::discrete_1d(1, 16);
  ShapedObjective obj = corridor_objective(0.45, {a, s});
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 0.45);
  GradientEstimate est = estimate_direction(obj, theta, obj.budget, 63);
  CHECK(est.direction[0] ==
        est.extrinsic[0] + est.intrinsic[0][0] + est.intrinsic[1][0]);
}

TEST_CASE("update: zero direction is a no-op for both rules") {
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(3, 1.5);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  OptimizerState sga = OptimizerState::sga(0.1);
  OptimizerState adam = OptimizerState::adam(0.1);
  CHECK((update(sga, theta, zero) - theta).cwiseAbs().maxCoeff() == 0.0);
  CHECK((update(adam, theta, zero) - theta).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("update: SGA arithmetic") {
  OptimizerState sga = OptimizerState::sga(0.1);
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 1.0);
  Eigen::VectorXd d = Eigen::VectorXd::Constant(1, 2.0);
  CHECK(update(sga, theta, d)[0] == doctest::Approx(1.2));
}

TEST_CASE("update: first Adam step has magnitude about alpha") {
  OptimizerState adam = OptimizerState::adam(0.01);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd d(2);
  d << 5.0, -0.3;
  Eigen::VectorXd next = update(adam, theta, d);
  // Bias-corrected first step: alpha * g / (|g| + eps') per coordinate.
  CHECK(next[0] == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(next[1] == doctest::Approx(-0.01).epsilon(1e-3));
}

TEST_CASE("update: non-finite direction rejected") {
  OptimizerState adam = OptimizerState::adam(0.1);
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(1);
  Eigen::VectorXd bad = Eigen::VectorXd::Constant(1, std::nan(""));
  CHECK_THROWS(update(adam, theta, bad));
  Eigen::VectorXd wrong_dim = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(update(adam, theta, wrong_dim), std::invalid_argument);
}

TEST_CASE("train: zero iterations gives an empty log and unchanged parameters") {
  ShapedObjective obj = corridor_objective(0.5, {});
  TrainLog log = train(obj, OptimizerState::adam(5e-4), 0, 1);
  CHECK(log.records.empty());
  CHECK(log.final_params[0] == doctest::Approx(0.5));
}

TEST_CASE("train: corridor SGA from theta=0.9 reaches the boundary") {
  int successes = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    ShapedObjective obj = corridor_objective(0.9, {});
    TrainLog log = train(obj, OptimizerState::sga(2e-4), 200, derive_seed(40, seed));
    if (std::abs(log.final_params[0] - 1.0) < 0.05) ++successes;
  }
  CHECK(successes >= 4);
}

TEST_CASE("train: log is deterministic given the seed") {
  ShapedObjective obj = corridor_objective(0.6, {});
  TrainLog a = train(obj, OptimizerState::adam(5e-4), 20, 123);
  TrainLog b = train(obj, OptimizerState::adam(5e-4), 20, 123);
  REQUIRE(a.records.size() == b.records.size());
  CHECK(a.final_params[0] == b.final_params[0]);
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].extrinsic == b.records[i].extrinsic);
    CHECK(a.records[i].objective == b.records[i].objective);
    CHECK(a.records[i].grad_norm == b.records[i].grad_norm);
    CHECK(a.records[i].seed == b.records[i].seed);
  }
}

TEST_CASE("train: csv header is fixed") {
  ShapedObjective obj = corridor_objective(0.6, {});
  TrainLog log = train(obj, OptimizerState::adam(5e-4), 2, 9);
  std::string csv = log.csv(0);
  CHECK(csv.rfind("iter,J_hat,L_hat,grad_norm,seed,ms\n", 0) == 0);

  IntrinsicBonus bonus;
  bonus.kind = BonusKind::ActionEntropy;
  bonus.weight = 0.1;
  ShapedObjective shaped = corridor_objective(0.6, {bonus});
  TrainLog log1 = train(shaped, OptimizerState::adam(5e-4), 2, 9);
  CHECK(log1.csv(1).rfind("iter,J_hat,L_hat,Jint_0,grad_norm,seed,ms\n", 0) == 0);
}

TEST_CASE("zero-gradient frequency matches the chain oracle at theta=0.1") {
  ShapedObjective obj = corridor_objective(0.1, {});
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(1, 0.1);
  // Oracle: no reward seen iff no trajectory reaches tile 15 by step T-1.
  double p_hit = hitting_probability(*obj.mdp, *obj.policy, 14, obj.budget.horizon - 1);
  double p_zero = std::pow(1.0 - p_hit, obj.budget.histories);

  const int reps = 4000;
  int zeros = 0;
  for (int i = 0; i < reps; ++i) {
    Batch batch = sample_batch(obj, theta, obj.budget, derive_seed(77, i));
    if (reinforce_extrinsic(batch, obj.mdp->gamma)[0] == 0.0) ++zeros;
  }
  double phat = static_cast<double>(zeros) / reps;
  double se = std::sqrt(p_zero * (1.0 - p_zero) / reps);
  CHECK(std::abs(phat - p_zero) <= 3.0 * se + 1e-9);
}
