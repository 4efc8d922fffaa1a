#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "pgx/mdp.hpp"
#include "pgx/rng.hpp"

namespace pgx {

// Differentiable stochastic policy over a flat parameter vector. Immutable
// during evaluation; updates go through set_params.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string family() const = 0;
  virtual int param_dim() const = 0;
  virtual Eigen::VectorXd params() const = 0;
  virtual void set_params(const Eigen::VectorXd& theta) = 0;

  virtual Action sample(const State& s, Rng& rng) const = 0;
  virtual double log_prob(const State& s, const Action& a) const = 0;
  virtual Eigen::VectorXd grad_log_prob(const State& s, const Action& a) const = 0;

  // Action distribution at s, for discrete families; used by exact solvers.
  virtual Eigen::VectorXd action_probs(const State& s) const {
    throw UnsupportedOperation(family() + ": no discrete action distribution");
  }

  virtual std::unique_ptr<Policy> clone() const = 0;
};

// Corridor policy: P(+1) = theta, P(-1) = 1 - theta. Action index 0 is left,
// 1 is right. log_prob and its gradient clamp probabilities at kThetaMin so
// they stay finite at the boundary; sampling and action_probs do not.
class BernoulliPolicy final : public Policy {
 public:
  static constexpr double kThetaMin = 1e-6;

  explicit BernoulliPolicy(double theta) { set_theta(theta); }

  std::string family() const override { return "bernoulli"; }
  int param_dim() const override { return 1; }
  Eigen::VectorXd params() const override {
    return Eigen::VectorXd::Constant(1, theta_);
  }
  void set_params(const Eigen::VectorXd& theta) override { set_theta(theta[0]); }
  double theta() const { return theta_; }

  Action sample(const State& s, Rng& rng) const override;
  double log_prob(const State& s, const Action& a) const override;
  Eigen::VectorXd grad_log_prob(const State& s, const Action& a) const override;
  Eigen::VectorXd action_probs(const State& s) const override;

  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<BernoulliPolicy>(*this);
  }

 private:
  void set_theta(double t);
  double theta_ = 0.5;
};

// Noisy proportional controller for the hill car: a ~ N(K * (x - x_target),
// sigma). theta = (K, sigma).
class ProportionalGaussianPolicy final : public Policy {
 public:
  static constexpr double kSigmaMin = 1e-3;

  ProportionalGaussianPolicy(double gain, double sigma, double x_target = 3.0);

  std::string family() const override { return "proportional_gaussian"; }
  int param_dim() const override { return 2; }
  Eigen::VectorXd params() const override;
  void set_params(const Eigen::VectorXd& theta) override;

  double mean(const State& s) const;

  Action sample(const State& s, Rng& rng) const override;
  double log_prob(const State& s, const Action& a) const override;
  Eigen::VectorXd grad_log_prob(const State& s, const Action& a) const override;

  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<ProportionalGaussianPolicy>(*this);
  }

 private:
  double gain_;
  double sigma_;
  double x_target_;
};

// Fully connected softmax policy: obs -> 3 hidden layers of 64 ReLU units ->
// num_actions logits. Gradients by reverse accumulation through the fixed
// topology.
class CategoricalMlpPolicy final : public Policy {
 public:
  CategoricalMlpPolicy(int input_dim, int num_actions, std::uint64_t init_seed,
                       int hidden = 64, int layers = 3);

  std::string family() const override { return "categorical_mlp"; }
  int param_dim() const override { return static_cast<int>(theta_.size()); }
  Eigen::VectorXd params() const override { return theta_; }
  void set_params(const Eigen::VectorXd& theta) override;

  int input_dim() const { return input_dim_; }
  int num_actions() const { return num_actions_; }

  Action sample(const State& s, Rng& rng) const override;
  double log_prob(const State& s, const Action& a) const override;
  Eigen::VectorXd grad_log_prob(const State& s, const Action& a) const override;
  Eigen::VectorXd action_probs(const State& s) const override;

  std::unique_ptr<Policy> clone() const override {
    return std::make_unique<CategoricalMlpPolicy>(*this);
  }

 private:
  struct Forward {
    std::vector<Eigen::VectorXd> pre;   // pre-activation per layer
    std::vector<Eigen::VectorXd> post;  // post-activation per layer (incl input)
    Eigen::VectorXd probs;
  };
  Forward forward(const Eigen::VectorXd& x) const;

  Eigen::Map<const Eigen::MatrixXd> weight(int layer) const;
  Eigen::Map<const Eigen::VectorXd> bias(int layer) const;

  int input_dim_;
  int num_actions_;
  int hidden_;
  int layers_;                  // hidden layers
  std::vector<int> dims_;      // layer widths, input..output
  std::vector<int> w_offset_;  // offsets into theta_ per layer
  std::vector<int> b_offset_;
  Eigen::VectorXd theta_;
};

// Parameter snapshot: textual, `pgx-policy <family> <dims...>` header then one
// parameter per line at full precision.
void save_policy(const Policy& policy, const std::string& path);
Eigen::VectorXd load_policy_params(const std::string& path,
                                   const std::string& expected_family);

}  // namespace pgx
