#include "pgx/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pgx {

// ---------------------------------------------------------------------------
// Histogram

int HistogramSpec::total_bins() const {
  int total = 1;
  for (int b : bins) total *= b;
  return total;
}

HistogramSpec HistogramSpec::discrete_1d(int lo, int hi) {
  HistogramSpec spec;
  spec.lo = Eigen::VectorXd::Constant(1, static_cast<double>(lo));
  spec.hi = Eigen::VectorXd::Constant(1, static_cast<double>(hi) + 1.0);
  spec.bins = {hi - lo + 1};
  return spec;
}

HistogramEstimator::HistogramEstimator(HistogramSpec spec, Eigen::VectorXd masses)
    : spec_(std::move(spec)), masses_(std::move(masses)) {}

int HistogramEstimator::bin_of(const Eigen::VectorXd& z) const {
  int flat = 0;
  int stride = 1;
  for (size_t d = 0; d < spec_.bins.size(); ++d) {
    double span = spec_.hi[d] - spec_.lo[d];
    int i = static_cast<int>((z[d] - spec_.lo[d]) / span * spec_.bins[d]);
    i = std::clamp(i, 0, spec_.bins[d] - 1);
    flat += stride * i;
    stride *= spec_.bins[d];
  }
  return flat;
}

double HistogramEstimator::log_density(const Eigen::VectorXd& z) const {
  return std::log(masses_[bin_of(z)]);
}

std::string HistogramEstimator::dump() const {
  std::ostringstream out;
  out.precision(12);
  out << "histogram bins=" << masses_.size() << "\n";
  for (Eigen::Index i = 0; i < masses_.size(); ++i)
    out << i << " " << masses_[i] << "\n";
  return out.str();
}

HistogramEstimator fit_visitation_histogram(
    const std::vector<Trajectory>& trajectories, double gamma,
    const std::function<Eigen::VectorXd(const State&)>& phi,
    const HistogramSpec& spec, double laplace_total) {
  if (trajectories.empty())
    throw std::invalid_argument("histogram fit needs at least one trajectory");
  int n_bins = spec.total_bins();
  Eigen::VectorXd masses =
      Eigen::VectorXd::Constant(n_bins, laplace_total / n_bins);
  HistogramEstimator probe(spec, Eigen::VectorXd::Zero(n_bins));
  for (const Trajectory& traj : trajectories) {
    double w = 1.0;
    // The terminal state s_T is excluded: it has no matching reward step.
    for (int t = 0; t < traj.horizon(); ++t) {
      masses[probe.bin_of(phi(traj.states[t]))] += w;
      w *= gamma;
    }
  }
  masses /= masses.sum();
  return {spec, std::move(masses)};
}

// ---------------------------------------------------------------------------
// Gaussian mixture

void GmmEstimator::finalize() {
  llt_.clear();
  log_norm_.clear();
  for (const Component& c : components_) {
    llt_.emplace_back(c.cov);
    double log_det = 0.0;
    const auto& L = llt_.back().matrixL();
    for (Eigen::Index i = 0; i < c.cov.rows(); ++i) log_det += 2.0 * std::log(L(i, i));
    log_norm_.push_back(-0.5 * (c.cov.rows() * std::log(2.0 * M_PI) + log_det));
  }
}

namespace {
double log_sum_exp(const Eigen::VectorXd& v) {
  double m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}
}  // namespace

double GmmEstimator::log_density(const Eigen::VectorXd& z) const {
  Eigen::VectorXd terms(components_.size());
  for (size_t k = 0; k < components_.size(); ++k) {
    Eigen::VectorXd diff = z - components_[k].mean;
    Eigen::VectorXd w = llt_[k].matrixL().solve(diff);
    terms[k] = std::log(components_[k].weight) + log_norm_[k] - 0.5 * w.squaredNorm();
  }
  return log_sum_exp(terms);
}

Eigen::VectorXd GmmEstimator::responsibilities(const Eigen::VectorXd& z) const {
  Eigen::VectorXd terms(components_.size());
  for (size_t k = 0; k < components_.size(); ++k) {
    Eigen::VectorXd diff = z - components_[k].mean;
    Eigen::VectorXd w = llt_[k].matrixL().solve(diff);
    terms[k] = std::log(components_[k].weight) + log_norm_[k] - 0.5 * w.squaredNorm();
  }
  Eigen::VectorXd r = (terms.array() - log_sum_exp(terms)).exp();
  return r / r.sum();
}

std::string GmmEstimator::dump() const {
  std::ostringstream out;
  out.precision(12);
  out << "gmm components=" << components_.size() << "\n";
  for (const Component& c : components_) {
    out << "w " << c.weight << " mean";
    for (Eigen::Index i = 0; i < c.mean.size(); ++i) out << " " << c.mean[i];
    out << " cov";
    for (Eigen::Index i = 0; i < c.cov.size(); ++i) out << " " << c.cov.data()[i];
    out << "\n";
  }
  return out.str();
}

namespace {

Eigen::MatrixXd floor_covariance(Eigen::MatrixXd cov, double floor) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  Eigen::VectorXd vals = eig.eigenvalues().cwiseMax(floor);
  return eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
}

// k-means++-style seeding from the batch.
std::vector<Eigen::VectorXd> seed_means(const std::vector<Eigen::VectorXd>& samples,
                                        int m, Rng& rng) {
  std::vector<Eigen::VectorXd> means;
  means.push_back(samples[static_cast<size_t>(rng.uniform() * samples.size())]);
  Eigen::VectorXd dist2(samples.size());
  while (static_cast<int>(means.size()) < m) {
    for (size_t i = 0; i < samples.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& mu : means)
        best = std::min(best, (samples[i] - mu).squaredNorm());
      dist2[i] = best;
    }
    double total = dist2.sum();
    size_t pick = 0;
    if (total > 0.0) {
      double u = rng.uniform() * total;
      double acc = 0.0;
      for (size_t i = 0; i < samples.size(); ++i) {
        acc += dist2[i];
        pick = i;
        if (u < acc) break;
      }
    } else {
      pick = static_cast<size_t>(rng.uniform() * samples.size());
    }
    means.push_back(samples[pick]);
  }
  return means;
}

}  // namespace

GmmEstimator fit_gmm(const std::vector<Eigen::VectorXd>& samples, int components,
                     std::uint64_t seed, double tol, int max_iters,
                     double cov_floor) {
  if (components < 1) throw std::invalid_argument("need at least one component");
  if (static_cast<int>(samples.size()) < components)
    throw std::invalid_argument("fewer samples than mixture components");
  const int n = static_cast<int>(samples.size());
  const int dim = static_cast<int>(samples[0].size());

  Rng rng(mix64(seed ^ 0x676d6dULL));
  std::vector<Eigen::VectorXd> means = seed_means(samples, components, rng);

  Eigen::VectorXd sample_mean = Eigen::VectorXd::Zero(dim);
  for (const auto& x : samples) sample_mean += x;
  sample_mean /= n;
  Eigen::MatrixXd pooled = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& x : samples) {
    Eigen::VectorXd d = x - sample_mean;
    pooled += d * d.transpose();
  }
  pooled = floor_covariance(pooled / n, cov_floor);

  GmmEstimator gmm;
  for (int k = 0; k < components; ++k)
    gmm.components_.push_back({1.0 / components, means[k], pooled});
  gmm.finalize();

  Eigen::MatrixXd resp(n, components);
  for (int iter = 0; iter < max_iters; ++iter) {
    // E-step and current log-likelihood.
    double ll = 0.0;
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd terms(components);
      for (int k = 0; k < components; ++k) {
        Eigen::VectorXd diff = samples[i] - gmm.components_[k].mean;
        Eigen::VectorXd w = gmm.llt_[k].matrixL().solve(diff);
        terms[k] = std::log(gmm.components_[k].weight) + gmm.log_norm_[k] -
                   0.5 * w.squaredNorm();
      }
      double lse = log_sum_exp(terms);
      ll += lse;
      resp.row(i) = (terms.array() - lse).exp();
    }
    ll /= n;
    gmm.ll_trace_.push_back(ll);
    if (gmm.ll_trace_.size() >= 2 &&
        ll - gmm.ll_trace_[gmm.ll_trace_.size() - 2] < tol)
      break;

    // M-step.
    for (int k = 0; k < components; ++k) {
      double nk = resp.col(k).sum();
      GmmEstimator::Component& c = gmm.components_[k];
      c.weight = nk / n;
      if (nk < 1e-12) continue;  // starved component keeps its parameters
      Eigen::VectorXd mu = Eigen::VectorXd::Zero(dim);
      for (int i = 0; i < n; ++i) mu += resp(i, k) * samples[i];
      mu /= nk;
      Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(dim, dim);
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd d = samples[i] - mu;
        cov += resp(i, k) * d * d.transpose();
      }
      c.mean = mu;
      c.cov = floor_covariance(cov / nk, cov_floor);
    }
    double wsum = 0.0;
    for (const auto& c : gmm.components_) wsum += c.weight;
    for (auto& c : gmm.components_) c.weight /= wsum;
    gmm.finalize();
  }
  return gmm;
}

}  // namespace pgx
