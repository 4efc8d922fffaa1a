#include "pgx/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace pgx {

namespace {
constexpr double kHalfLog2Pi = 0.9189385332046727;  // log(sqrt(2 pi))
}

// ---------------------------------------------------------------------------
// BernoulliPolicy

void BernoulliPolicy::set_theta(double t) {
  theta_ = std::clamp(t, 0.0, 1.0);
}

Action BernoulliPolicy::sample(const State&, Rng& rng) const {
  // Inverse-CDF draw: u < theta moves right. Keeps estimates monotonically
  // coupled across theta under shared seeds.
  Action a;
  a.index = rng.uniform() < theta_ ? 1 : 0;
  return a;
}

double BernoulliPolicy::log_prob(const State&, const Action& a) const {
  // Zero-probability actions report log(theta_min) rather than -inf; sampling
  // and the exact solvers see the unclamped probabilities.
  double p = a.index == 1 ? theta_ : 1.0 - theta_;
  return std::log(std::max(p, kThetaMin));
}

Eigen::VectorXd BernoulliPolicy::grad_log_prob(const State&, const Action& a) const {
  Eigen::VectorXd g(1);
  g[0] = a.index == 1 ? 1.0 / std::max(theta_, kThetaMin)
                      : -1.0 / std::max(1.0 - theta_, kThetaMin);
  return g;
}

Eigen::VectorXd BernoulliPolicy::action_probs(const State&) const {
  Eigen::VectorXd p(2);
  p << 1.0 - theta_, theta_;
  return p;
}

// ---------------------------------------------------------------------------
// ProportionalGaussianPolicy

ProportionalGaussianPolicy::ProportionalGaussianPolicy(double gain, double sigma,
                                                       double x_target)
    : gain_(gain), sigma_(std::max(sigma, kSigmaMin)), x_target_(x_target) {}

Eigen::VectorXd ProportionalGaussianPolicy::params() const {
  Eigen::VectorXd theta(2);
  theta << gain_, sigma_;
  return theta;
}

void ProportionalGaussianPolicy::set_params(const Eigen::VectorXd& theta) {
  gain_ = theta[0];
  sigma_ = std::max(theta[1], kSigmaMin);
}

double ProportionalGaussianPolicy::mean(const State& s) const {
  return gain_ * (s.obs[0] - x_target_);
}

Action ProportionalGaussianPolicy::sample(const State& s, Rng& rng) const {
  Action a;
  a.u = mean(s) + sigma_ * rng.normal();
  return a;
}

double ProportionalGaussianPolicy::log_prob(const State& s, const Action& a) const {
  double z = (a.u - mean(s)) / sigma_;
  return -0.5 * z * z - std::log(sigma_) - kHalfLog2Pi;
}

Eigen::VectorXd ProportionalGaussianPolicy::grad_log_prob(const State& s,
                                                          const Action& a) const {
  double d = a.u - mean(s);
  Eigen::VectorXd g(2);
  g[0] = d * (s.obs[0] - x_target_) / (sigma_ * sigma_);
  g[1] = (d * d / (sigma_ * sigma_) - 1.0) / sigma_;
  return g;
}

// ---------------------------------------------------------------------------
// CategoricalMlpPolicy

CategoricalMlpPolicy::CategoricalMlpPolicy(int input_dim, int num_actions,
                                           std::uint64_t init_seed, int hidden,
                                           int layers)
    : input_dim_(input_dim), num_actions_(num_actions), hidden_(hidden),
      layers_(layers) {
  dims_.push_back(input_dim_);
  for (int l = 0; l < layers_; ++l) dims_.push_back(hidden_);
  dims_.push_back(num_actions_);

  int total = 0;
  for (size_t l = 0; l + 1 < dims_.size(); ++l) {
    w_offset_.push_back(total);
    total += dims_[l] * dims_[l + 1];
    b_offset_.push_back(total);
    total += dims_[l + 1];
  }
  theta_ = Eigen::VectorXd::Zero(total);

  // Fan-in-scaled uniform init, biases zero.
  Rng rng(init_seed);
  for (size_t l = 0; l + 1 < dims_.size(); ++l) {
    double bound = std::sqrt(2.0 / dims_[l]);
    int n = dims_[l] * dims_[l + 1];
    for (int i = 0; i < n; ++i)
      theta_[w_offset_[l] + i] = bound * (2.0 * rng.uniform() - 1.0);
  }
}

void CategoricalMlpPolicy::set_params(const Eigen::VectorXd& theta) {
  if (theta.size() != theta_.size())
    throw std::invalid_argument("parameter vector has wrong dimension");
  theta_ = theta;
}

Eigen::Map<const Eigen::MatrixXd> CategoricalMlpPolicy::weight(int layer) const {
  return {theta_.data() + w_offset_[layer], dims_[layer + 1], dims_[layer]};
}

Eigen::Map<const Eigen::VectorXd> CategoricalMlpPolicy::bias(int layer) const {
  return {theta_.data() + b_offset_[layer], dims_[layer + 1]};
}

CategoricalMlpPolicy::Forward CategoricalMlpPolicy::forward(
    const Eigen::VectorXd& x) const {
  Forward f;
  f.post.push_back(x);
  int n_layers = static_cast<int>(dims_.size()) - 1;
  for (int l = 0; l < n_layers; ++l) {
    Eigen::VectorXd z = weight(l) * f.post.back() + bias(l);
    f.pre.push_back(z);
    if (l + 1 < n_layers)
      f.post.push_back(z.cwiseMax(0.0));
  }
  // Softmax of the final logits, shifted by the max for stability.
  const Eigen::VectorXd& logits = f.pre.back();
  Eigen::VectorXd e = (logits.array() - logits.maxCoeff()).exp();
  f.probs = e / e.sum();
  return f;
}

Action CategoricalMlpPolicy::sample(const State& s, Rng& rng) const {
  Eigen::VectorXd p = forward(s.obs).probs;
  double u = rng.uniform();
  double acc = 0.0;
  Action a;
  a.index = num_actions_ - 1;
  for (int i = 0; i < num_actions_; ++i) {
    acc += p[i];
    if (u < acc) {
      a.index = i;
      break;
    }
  }
  return a;
}

double CategoricalMlpPolicy::log_prob(const State& s, const Action& a) const {
  return std::log(forward(s.obs).probs[a.index]);
}

Eigen::VectorXd CategoricalMlpPolicy::action_probs(const State& s) const {
  return forward(s.obs).probs;
}

Eigen::VectorXd CategoricalMlpPolicy::grad_log_prob(const State& s,
                                                    const Action& a) const {
  Forward f = forward(s.obs);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta_.size());

  // d log softmax_a / d logits = e_a - p
  Eigen::VectorXd delta = -f.probs;
  delta[a.index] += 1.0;

  int n_layers = static_cast<int>(dims_.size()) - 1;
  for (int l = n_layers - 1; l >= 0; --l) {
    Eigen::Map<Eigen::MatrixXd> gw(grad.data() + w_offset_[l], dims_[l + 1], dims_[l]);
    Eigen::Map<Eigen::VectorXd> gb(grad.data() + b_offset_[l], dims_[l + 1]);
    gw = delta * f.post[l].transpose();
    gb = delta;
    if (l > 0) {
      Eigen::VectorXd back = weight(l).transpose() * delta;
      delta = (f.pre[l - 1].array() > 0.0).select(back, 0.0);
    }
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Snapshots

void save_policy(const Policy& policy, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  Eigen::VectorXd theta = policy.params();
  out << "pgx-policy " << policy.family() << " " << theta.size() << "\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < theta.size(); ++i) out << theta[i] << "\n";
}

Eigen::VectorXd load_policy_params(const std::string& path,
                                   const std::string& expected_family) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string magic, family;
  Eigen::Index n = 0;
  in >> magic >> family >> n;
  if (magic != "pgx-policy" || family != expected_family || n < 0)
    throw std::runtime_error("bad policy snapshot header in " + path);
  Eigen::VectorXd theta(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(in >> theta[i]))
      throw std::runtime_error("truncated policy snapshot " + path);
  }
  return theta;
}

}  // namespace pgx
