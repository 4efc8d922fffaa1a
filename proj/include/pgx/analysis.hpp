#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pgx/learn.hpp"
#include "pgx/shaping.hpp"

namespace pgx {

struct WilsonInterval {
  double p = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};
WilsonInterval wilson_interval(long successes, long trials, double z = 1.96);

// Which scalar a scan or a profile scores.
enum class Score { Objective, Extrinsic, Intrinsic };

struct Axis {
  std::string name;
  int param_index = 0;
  double min = 0.0;
  double max = 1.0;
  int points = 2;

  double value(int i) const;
};

struct ScanSettings {
  Score score = Score::Objective;
  double epsilon = 1.0;
  double significance_tau = 2.0;  // margin in combined standard errors
  bool shared_seeds = true;       // common random numbers across cells
};

struct LandscapeGrid {
  std::vector<Axis> axes;  // 1-D or 2-D
  Eigen::VectorXd mean;
  Eigen::VectorXd stderr_;
  Eigen::VectorXi count;
  std::vector<int> local_maxima;  // cells beating all neighbors by the margin
  int global_max = -1;
  std::vector<char> in_omega;     // mean[global_max] - mean[cell] <= epsilon
  double epsilon = 0.0;

  int cells() const;
  std::vector<int> cell_index(int cell) const;      // per-axis grid indices
  Eigen::VectorXd cell_theta(const Eigen::VectorXd& base, int cell) const;
  std::string csv() const;
};

LandscapeGrid scan_landscape(const ShapedObjective& obj, std::vector<Axis> axes,
                             const ScanSettings& settings, const EvalBudget& budget,
                             std::uint64_t seed);

// epsilon-coherence measurement: gap J(theta*) - J(theta-dagger) between the
// argmax of the base grid and the J value at the shaped grid's argmax.
struct CoherenceReport {
  double gap = 0.0;
  bool coherent = false;           // gap <= epsilon
  bool shaped_argmax_in_omega = false;
  int base_argmax_cell = -1;
  int shaped_argmax_cell = -1;
  double epsilon = 0.0;
};
CoherenceReport coherence_report(const LandscapeGrid& base,
                                 const LandscapeGrid& shaped, double epsilon);

// Exact reference gradients on finite MDPs. grad_L freezes the intrinsic
// rewards at their exact-visitation values (the biased-gradient convention).
struct ReferenceGradients {
  Eigen::VectorXd grad_J;
  Eigen::VectorXd grad_L;
};
ReferenceGradients reference_gradients(const ShapedObjective& obj,
                                       const Eigen::VectorXd& theta);

struct ImprovementPoint {
  Eigen::VectorXd theta;
  WilsonInterval p_d;  // P(<d, grad L> > 0)
  WilsonInterval p_g;  // P(<d, grad J> > 0)
  bool d_defined = true;  // false when the reference gradient is ~0
  bool g_defined = true;
};

ImprovementPoint improvement_probability(const ShapedObjective& obj,
                                         const Eigen::VectorXd& theta,
                                         const ReferenceGradients& reference,
                                         int draws, const EvalBudget& budget,
                                         std::uint64_t seed);

struct ImprovementProfile {
  std::vector<ImprovementPoint> points;
  Axis axis;  // the profiled parameter
  // Attraction ball on the profiled axis, when known; drives the in_ball
  // column of the CSV.
  double ball_lo = std::numeric_limits<double>::quiet_NaN();
  double ball_hi = std::numeric_limits<double>::quiet_NaN();
  std::string csv() const;
};

ImprovementProfile profile_improvement(const ShapedObjective& obj, const Axis& axis,
                                       int draws, const EvalBudget& budget,
                                       std::uint64_t seed);

// delta_efficiency: min P(D>0) over the whole profile. delta_attraction:
// min P(G>0) over profile points inside [ball_lo, ball_hi] on the profiled
// axis (the smallest interval containing theta_int and theta_dagger).
struct EfficiencyAttraction {
  double delta_efficiency = 0.0;
  double delta_attraction = 0.0;
};
EfficiencyAttraction efficiency_attraction_report(const ImprovementProfile& profile,
                                                  double ball_lo, double ball_hi);

// Fraction of trials in which `steps` Adam updates along directions from
// `direction_obj` improve the score of `score_obj` by more than `threshold`.
WilsonInterval multi_step_improvement_frequency(
    const ShapedObjective& direction_obj, const ShapedObjective& score_obj,
    const Eigen::VectorXd& theta, Score score, int trials, int steps,
    double threshold, double adam_step_size, const EvalBudget& eval_budget,
    std::uint64_t seed);

// Eq.-6 diagnostic: discounted visitation mass of the zero-reward state-action
// set, Delta = sum_{s,a} d(s) pi(a|s) 1[rho(s,a) = 0].
struct LocalOptimalityDiagnostic {
  double zero_reward_mass = 0.0;
};
LocalOptimalityDiagnostic zero_reward_mass(const MdpSpec& mdp, const Policy& policy);

}  // namespace pgx
