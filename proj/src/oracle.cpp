#include "pgx/oracle.hpp"

namespace pgx {

namespace {
const FiniteMdp& require_finite(const MdpSpec& mdp) {
  if (!mdp.finite)
    throw UnsupportedOperation("exact solver requires a finite MDP: " + mdp.name);
  return *mdp.finite;
}

State finite_state(const FiniteMdp& fin, int index) {
  State s;
  s.index = index;
  s.obs = fin.obs[index];
  return s;
}
}  // namespace

InducedChain induced_chain(const MdpSpec& mdp, const Policy& policy) {
  const FiniteMdp& fin = require_finite(mdp);
  InducedChain chain;
  chain.transition = Eigen::MatrixXd::Zero(fin.num_states, fin.num_states);
  chain.reward = Eigen::VectorXd::Zero(fin.num_states);
  for (int s = 0; s < fin.num_states; ++s) {
    Eigen::VectorXd pi = policy.action_probs(finite_state(fin, s));
    for (int a = 0; a < fin.num_actions; ++a) {
      chain.transition.row(s) += pi[a] * fin.transition[a].row(s);
      chain.reward[s] += pi[a] * fin.reward(s, a);
    }
  }
  return chain;
}

double exact_return(const MdpSpec& mdp, const Policy& policy) {
  const FiniteMdp& fin = require_finite(mdp);
  InducedChain chain = induced_chain(mdp, policy);
  Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(fin.num_states, fin.num_states) -
      mdp.gamma * chain.transition;
  Eigen::VectorXd v = A.partialPivLu().solve(chain.reward);
  return fin.p0.dot(v);
}

double exact_return_truncated(const MdpSpec& mdp, const Policy& policy, int horizon) {
  const FiniteMdp& fin = require_finite(mdp);
  InducedChain chain = induced_chain(mdp, policy);
  // J_T = p0^T sum_{t<T} gamma^t (P^pi)^t r^pi, iterated on the distribution.
  Eigen::VectorXd dist = fin.p0;
  double total = 0.0;
  double scale = 1.0;
  for (int t = 0; t < horizon; ++t) {
    total += scale * dist.dot(chain.reward);
    if (t + 1 < horizon) dist = chain.transition.transpose() * dist;
    scale *= mdp.gamma;
  }
  return total;
}

VisitationMeasure exact_visitation(const MdpSpec& mdp, const Policy& policy) {
  const FiniteMdp& fin = require_finite(mdp);
  InducedChain chain = induced_chain(mdp, policy);
  Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(fin.num_states, fin.num_states) -
      mdp.gamma * chain.transition.transpose();
  VisitationMeasure d;
  d.gamma = mdp.gamma;
  d.probs = (1.0 - mdp.gamma) * A.partialPivLu().solve(fin.p0);
  return d;
}

Eigen::MatrixXd exact_q_values(const MdpSpec& mdp, const Policy& policy) {
  const FiniteMdp& fin = require_finite(mdp);
  InducedChain chain = induced_chain(mdp, policy);
  Eigen::MatrixXd A =
      Eigen::MatrixXd::Identity(fin.num_states, fin.num_states) -
      mdp.gamma * chain.transition;
  Eigen::VectorXd v = A.partialPivLu().solve(chain.reward);
  Eigen::MatrixXd q(fin.num_states, fin.num_actions);
  for (int a = 0; a < fin.num_actions; ++a)
    q.col(a) = fin.reward.col(a) + mdp.gamma * fin.transition[a] * v;
  return q;
}

Eigen::VectorXd exact_policy_gradient_with_reward(const MdpSpec& mdp,
                                                  const Policy& policy,
                                                  const Eigen::MatrixXd& reward) {
  const FiniteMdp& fin = require_finite(mdp);
  MdpSpec swapped = mdp;
  swapped.finite->reward = reward;
  Eigen::MatrixXd q = exact_q_values(swapped, policy);
  Eigen::VectorXd d = exact_visitation(mdp, policy).probs;

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(policy.param_dim());
  for (int s = 0; s < fin.num_states; ++s) {
    if (d[s] == 0.0) continue;
    State state = finite_state(fin, s);
    Eigen::VectorXd pi = policy.action_probs(state);
    for (int a = 0; a < fin.num_actions; ++a) {
      if (pi[a] == 0.0) continue;
      Action act;
      act.index = a;
      grad += d[s] * pi[a] * q(s, a) * policy.grad_log_prob(state, act);
    }
  }
  return grad / (1.0 - mdp.gamma);
}

Eigen::VectorXd exact_policy_gradient(const MdpSpec& mdp, const Policy& policy) {
  return exact_policy_gradient_with_reward(mdp, policy, mdp.finite
                                               ? mdp.finite->reward
                                               : Eigen::MatrixXd());
}

namespace {
Eigen::VectorXd central_differences(
    const MdpSpec& mdp, const Policy& policy, double h,
    const std::function<double(const Policy&)>& value) {
  Eigen::VectorXd theta = policy.params();
  Eigen::VectorXd grad(theta.size());
  auto probe = policy.clone();
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    Eigen::VectorXd t = theta;
    t[i] = theta[i] + h;
    probe->set_params(t);
    double up = value(*probe);
    t[i] = theta[i] - h;
    probe->set_params(t);
    double down = value(*probe);
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}
}  // namespace

Eigen::VectorXd finite_difference_gradient(const MdpSpec& mdp, const Policy& policy,
                                           double h) {
  return central_differences(mdp, policy, h, [&](const Policy& p) {
    return exact_return(mdp, p);
  });
}

Eigen::VectorXd finite_difference_gradient_truncated(const MdpSpec& mdp,
                                                     const Policy& policy,
                                                     int horizon, double h) {
  return central_differences(mdp, policy, h, [&](const Policy& p) {
    return exact_return_truncated(mdp, p, horizon);
  });
}

double hitting_probability(const MdpSpec& mdp, const Policy& policy, int state,
                           int max_t) {
  const FiniteMdp& fin = require_finite(mdp);
  InducedChain chain = induced_chain(mdp, policy);
  Eigen::VectorXd dist = fin.p0;
  double hit = dist[state];
  dist[state] = 0.0;  // absorb mass on first entry
  for (int t = 1; t <= max_t; ++t) {
    dist = chain.transition.transpose() * dist;
    hit += dist[state];
    dist[state] = 0.0;
  }
  return hit;
}

}  // namespace pgx
