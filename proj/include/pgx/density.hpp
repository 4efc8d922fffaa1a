#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pgx/mdp.hpp"

namespace pgx {

// Normalized density/mass estimate over feature space.
class DensityEstimator {
 public:
  virtual ~DensityEstimator() = default;
  virtual double log_density(const Eigen::VectorXd& z) const = 0;
  virtual std::string dump() const = 0;
};

// Uniform binning of a feature box; fit weights the visit of s_t by gamma^t
// and adds a Laplace floor before normalizing so the log stays finite.
struct HistogramSpec {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  std::vector<int> bins;

  int total_bins() const;
  // One discrete bin per integer value in [lo, hi].
  static HistogramSpec discrete_1d(int lo, int hi);
};

class HistogramEstimator final : public DensityEstimator {
 public:
  HistogramEstimator(HistogramSpec spec, Eigen::VectorXd masses);

  double log_density(const Eigen::VectorXd& z) const override;
  const Eigen::VectorXd& masses() const { return masses_; }
  int bin_of(const Eigen::VectorXd& z) const;
  std::string dump() const override;

 private:
  HistogramSpec spec_;
  Eigen::VectorXd masses_;
};

HistogramEstimator fit_visitation_histogram(
    const std::vector<Trajectory>& trajectories, double gamma,
    const std::function<Eigen::VectorXd(const State&)>& phi,
    const HistogramSpec& spec, double laplace_total = 1e-4);

// Gaussian mixture fit by EM: k-means++ seeding, covariance eigenvalue floor,
// stop when the mean log-likelihood improves by less than tol.
class GmmEstimator final : public DensityEstimator {
 public:
  struct Component {
    double weight;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
  };

  double log_density(const Eigen::VectorXd& z) const override;
  std::string dump() const override;

  const std::vector<Component>& components() const { return components_; }
  const std::vector<double>& log_likelihood_trace() const { return ll_trace_; }

  // Posterior responsibilities at z.
  Eigen::VectorXd responsibilities(const Eigen::VectorXd& z) const;

 private:
  friend GmmEstimator fit_gmm(const std::vector<Eigen::VectorXd>&, int,
                              std::uint64_t, double, int, double);
  std::vector<Component> components_;
  std::vector<double> ll_trace_;
  // cached per-component: cholesky of cov, log-normalizer
  void finalize();
  std::vector<Eigen::LLT<Eigen::MatrixXd>> llt_;
  std::vector<double> log_norm_;
};

GmmEstimator fit_gmm(const std::vector<Eigen::VectorXd>& samples, int components,
                     std::uint64_t seed, double tol = 1e-6, int max_iters = 200,
                     double cov_floor = 1e-6);

}  // namespace pgx
