#pragma once

#include <Eigen/Dense>

#include "pgx/mdp.hpp"
#include "pgx/policy.hpp"

namespace pgx {

// Exact solvers for finite MDPs. All of them require mdp.finite and a policy
// exposing action_probs; continuous MDPs raise UnsupportedOperation.

// Induced chain P^pi and state reward r^pi under the policy.
struct InducedChain {
  Eigen::MatrixXd transition;  // |S| x |S|
  Eigen::VectorXd reward;      // |S|
};
InducedChain induced_chain(const MdpSpec& mdp, const Policy& policy);

// E_{p0}[v] with v = (I - gamma P^pi)^{-1} r^pi.
double exact_return(const MdpSpec& mdp, const Policy& policy);

// Same but truncated at horizon T: E[sum_{t<T} gamma^t r_t].
double exact_return_truncated(const MdpSpec& mdp, const Policy& policy, int horizon);

// d = (1 - gamma) (I - gamma P^pi^T)^{-1} p0.
VisitationMeasure exact_visitation(const MdpSpec& mdp, const Policy& policy);

// Q(s, a) = rho(s, a) + gamma sum_{s'} P_a(s, s') v(s').
Eigen::MatrixXd exact_q_values(const MdpSpec& mdp, const Policy& policy);

// Policy-gradient identity: sum_{s,a} d(s) pi(a|s) grad log pi(a|s) Q(s,a)
// / (1 - gamma). Ground truth for the REINFORCE estimator tests.
Eigen::VectorXd exact_policy_gradient(const MdpSpec& mdp, const Policy& policy);

// Same identity evaluated with a substituted reward table (used for exact
// gradients of shaped objectives with frozen intrinsic rewards).
Eigen::VectorXd exact_policy_gradient_with_reward(const MdpSpec& mdp,
                                                  const Policy& policy,
                                                  const Eigen::MatrixXd& reward);

// Central finite differences of exact_return, step h per coordinate.
Eigen::VectorXd finite_difference_gradient(const MdpSpec& mdp, const Policy& policy,
                                           double h = 1e-5);
Eigen::VectorXd finite_difference_gradient_truncated(const MdpSpec& mdp,
                                                     const Policy& policy,
                                                     int horizon, double h = 1e-5);

// P(the chain visits `state` at some t in [0, max_t]) from p0; by iterating
// the induced chain with an absorbing tap on `state`.
double hitting_probability(const MdpSpec& mdp, const Policy& policy, int state,
                           int max_t);

}  // namespace pgx
