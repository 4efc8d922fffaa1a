#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pgx/envs.hpp"
#include "pgx/oracle.hpp"
#include "pgx/policy.hpp"

using namespace pgx;

namespace {

double corridor_closed_form(double gamma, double reward = 100.0, int tiles = 15) {
  double x = 0.3 * gamma / (1.0 - 0.7 * gamma);
  return reward * std::pow(x, tiles - 1);
}

}  // namespace

TEST_CASE("sample_trajectory: theta=0 stays at tile 1 with zero rewards") {
  MdpSpec mdp = make_corridor();
  BernoulliPolicy pol(0.0);
  Trajectory traj = sample_trajectory(mdp, pol, 5, 123);
  REQUIRE(traj.states.size() == 6);
  REQUIRE(traj.actions.size() == 5);
  for (const State& s : traj.states) CHECK(s.index == 0);
  for (double r : traj.rewards) CHECK(r == 0.0);
}

TEST_CASE("sample_trajectory: deterministic given the seed") {
  MdpSpec mdp = make_corridor();
  BernoulliPolicy pol(0.37);
  Trajectory a = sample_trajectory(mdp, pol, 50, 99);
  Trajectory b = sample_trajectory(mdp, pol, 50, 99);
  REQUIRE(a.states.size() == b.states.size());
  for (size_t t = 0; t < a.states.size(); ++t)
    CHECK(a.states[t].index == b.states[t].index);
  for (size_t t = 0; t < a.actions.size(); ++t)
    CHECK(a.actions[t].index == b.actions[t].index);
  CHECK(a.rewards == b.rewards);
}

TEST_CASE("sample_trajectory: horizon 0 rejected") {
  MdpSpec mdp = make_corridor();
  BernoulliPolicy pol(0.5);
  CHECK_THROWS_AS(sample_trajectory(mdp, pol, 0, 1), std::invalid_argument);
}

TEST_CASE("sample_trajectory: validate_trajectory accepts sampled rewards") {
  MdpSpec mdp = make_corridor();
  BernoulliPolicy pol(0.8);
  Trajectory traj = sample_trajectory(mdp, pol, 200, 5);
  CHECK_NOTHROW(validate_trajectory(traj, mdp));
  if (!traj.rewards.empty()) {
    traj.rewards[0] += 1.0;
    CHECK_THROWS(validate_trajectory(traj, mdp));
  }
}

TEST_CASE("sample_trajectory: theta=1 absorption frequency matches chain oracle") {
  MdpSpec mdp = make_corridor();
  BernoulliPolicy pol(1.0);
  const int horizon = 100;
  const int n = 20000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    Trajectory traj = sample_trajectory(mdp, pol, horizon, derive_seed(42, i));
    for (const State& s : traj.states)
      if (s.index >= 14) {  // tile 15 or the sink
        ++hits;
        break;
      }
  }
  double p = hitting_probability(mdp, pol, 14, horizon);
  double phat = static_cast<double>(hits) / n;
  double se = std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(phat - p) <= 3.0 * se + 1e-12);
}

TEST_CASE("discounted_return basics") {
  Trajectory traj;
  traj.states.resize(4);
  traj.actions.resize(3);
  traj.rewards = {0.0, 0.0, 0.0};
  CHECK(discounted_return(traj, 0.9) == 0.0);
  traj.rewards = {100.0, 0.0, 0.0};
  CHECK(discounted_return(traj, 0.5) == 100.0);
  traj.rewards = {1.0, 2.0, 4.0};
  CHECK(discounted_return(traj, 0.5) == doctest::Approx(1.0 + 1.0 + 1.0));
}

TEST_CASE("discounted_return: theta=1 Monte-Carlo mean matches closed form") {
  MdpSpec mdp = make_corridor();
  BernoulliPolicy pol(1.0);
  const int n = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    Trajectory traj = sample_trajectory(mdp, pol, 300, derive_seed(7, i));
    double g = discounted_return(traj, mdp.gamma);
    sum += g;
    sumsq += g * g;
  }
  double mean = sum / n;
  double se = std::sqrt((sumsq / n - mean * mean) / n);
  CHECK(std::abs(mean - corridor_closed_form(0.99)) <= 3.0 * se);
}

TEST_CASE("exact_return: corridor endpoints and regression value") {
  MdpSpec mdp = make_corridor();
  CHECK(exact_return(mdp, BernoulliPolicy(0.0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(exact_return(mdp, BernoulliPolicy(1.0)) ==
        doctest::Approx(corridor_closed_form(0.99)).epsilon(1e-10));
  // Frozen on first verified run of the linear solver.
  CHECK(exact_return(mdp, BernoulliPolicy(0.5)) == doctest::Approx(4.729635).epsilon(5e-7));
}

TEST_CASE("exact_return: continuous MDP unsupported") {
  MdpSpec hill = make_hill();
  ProportionalGaussianPolicy pol(0.0, 0.5);
  CHECK_THROWS_AS(exact_return(hill, pol), UnsupportedOperation);
}

TEST_CASE("exact_visitation: point mass at tile 1 when theta=0") {
  MdpSpec mdp = make_corridor();
  VisitationMeasure d = exact_visitation(mdp, BernoulliPolicy(0.0));
  CHECK(d.probs[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(d.probs.tail(d.probs.size() - 1).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("exact_visitation: normalized for random policies") {
  MdpSpec mdp = make_corridor();
  for (double theta : {0.1, 0.33, 0.5, 0.77, 0.95}) {
    VisitationMeasure d = exact_visitation(mdp, BernoulliPolicy(theta));
    CHECK(d.probs.sum() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(d.probs.minCoeff() >= -1e-15);
  }
}

TEST_CASE("exact_visitation: matches empirical discounted frequencies at theta=1") {
  MdpSpec mdp = make_corridor();
  BernoulliPolicy pol(1.0);
  VisitationMeasure d = exact_visitation(mdp, pol);
  const int n = 20000, horizon = 2000;
  Eigen::VectorXd emp = Eigen::VectorXd::Zero(mdp.finite->num_states);
  for (int i = 0; i < n; ++i) {
    Trajectory traj = sample_trajectory(mdp, pol, horizon, derive_seed(11, i));
    double w = 1.0;
    for (int t = 0; t < horizon; ++t) {
      emp[traj.states[t].index] += w;
      w *= mdp.gamma;
    }
  }
  emp *= (1.0 - mdp.gamma) / n;
  // Per-state agreement within a loose multiple of the Monte-Carlo scale.
  for (int s = 0; s < emp.size(); ++s)
    CHECK(std::abs(emp[s] - d.probs[s]) <= 3.0 * std::sqrt(d.probs[s] / n) + 1e-4);
}

TEST_CASE("exact_policy_gradient: matches central finite differences") {
  MdpSpec mdp = make_corridor();
  for (double theta : {0.3, 0.5, 0.7, 0.9}) {
    BernoulliPolicy pol(theta);
    Eigen::VectorXd g = exact_policy_gradient(mdp, pol);
    Eigen::VectorXd fd = finite_difference_gradient(mdp, pol);
    CHECK(std::abs(g[0] - fd[0]) <= 1e-6 * std::max(1.0, std::abs(fd[0])));
  }
}

TEST_CASE("exact_policy_gradient: matches finite differences at 10 random thetas") {
  MdpSpec mdp = make_corridor();
  Rng rng(314);
  for (int i = 0; i < 10; ++i) {
    double theta = 0.05 + 0.9 * rng.uniform();
    BernoulliPolicy pol(theta);
    Eigen::VectorXd g = exact_policy_gradient(mdp, pol);
    Eigen::VectorXd fd = finite_difference_gradient(mdp, pol);
    CHECK(std::abs(g[0] - fd[0]) <= 1e-5 * std::max(1.0, std::abs(fd[0])));
  }
}

TEST_CASE("exact_return_truncated: converges to exact_return and bounds bias") {
  MdpSpec mdp = make_corridor();
  BernoulliPolicy pol(0.6);
  double full = exact_return(mdp, pol);
  double t100 = exact_return_truncated(mdp, pol, 100);
  double t2000 = exact_return_truncated(mdp, pol, 2000);
  double bias_bound = std::pow(mdp.gamma, 100) * mdp.r_max / (1.0 - mdp.gamma);
  CHECK(std::abs(full - t100) <= bias_bound + 1e-9);
  CHECK(std::abs(full - t2000) <= 1e-6);
}

TEST_CASE("finite mdp validation rejects bad rows") {
  FiniteMdp fin;
  fin.num_states = 2;
  fin.num_actions = 1;
  fin.p0 = Eigen::VectorXd::Zero(2);
  fin.p0[0] = 1.0;
  fin.reward = Eigen::MatrixXd::Zero(2, 1);
  Eigen::MatrixXd P(2, 2);
  P << 0.5, 0.4,  // does not sum to 1
       0.0, 1.0;
  fin.transition.push_back(P);
  CHECK_THROWS(make_finite_mdp("bad", std::move(fin), 0.9));
}
