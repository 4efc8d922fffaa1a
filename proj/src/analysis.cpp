#include "pgx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pgx/oracle.hpp"
#include "pgx/parallel.hpp"

namespace pgx {

WilsonInterval wilson_interval(long successes, long trials, double z) {
  if (trials < 1) throw std::invalid_argument("Wilson interval needs trials >= 1");
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // Clamp against rounding so the interval always contains the point estimate.
  double lo = std::min(p, std::max(0.0, center - half));
  double hi = std::max(p, std::min(1.0, center + half));
  return {p, lo, hi};
}

double Axis::value(int i) const {
  if (points == 1) return min;
  return min + (max - min) * i / (points - 1);
}

int LandscapeGrid::cells() const {
  int n = 1;
  for (const Axis& a : axes) n *= a.points;
  return n;
}

std::vector<int> LandscapeGrid::cell_index(int cell) const {
  std::vector<int> idx(axes.size());
  for (size_t d = 0; d < axes.size(); ++d) {
    idx[d] = cell % axes[d].points;
    cell /= axes[d].points;
  }
  return idx;
}

Eigen::VectorXd LandscapeGrid::cell_theta(const Eigen::VectorXd& base, int cell) const {
  Eigen::VectorXd theta = base;
  std::vector<int> idx = cell_index(cell);
  for (size_t d = 0; d < axes.size(); ++d)
    theta[axes[d].param_index] = axes[d].value(idx[d]);
  return theta;
}

std::string LandscapeGrid::csv() const {
  std::ostringstream out;
  out.precision(12);
  out << "axis0,axis1,value,stderr,n,is_local_max,is_global_max,in_omega\n";
  for (int c = 0; c < cells(); ++c) {
    std::vector<int> idx = cell_index(c);
    out << axes[0].value(idx[0]) << ",";
    if (axes.size() > 1) out << axes[1].value(idx[1]);
    bool is_local =
        std::find(local_maxima.begin(), local_maxima.end(), c) != local_maxima.end();
    out << "," << mean[c] << "," << stderr_[c] << "," << count[c] << ","
        << (is_local ? 1 : 0) << "," << (c == global_max ? 1 : 0) << ","
        << (in_omega[c] ? 1 : 0) << "\n";
  }
  return out.str();
}

namespace {

double score_of(const Evaluation& eval, Score score, int traj) {
  switch (score) {
    case Score::Objective:
      return eval.per_traj_objective[traj];
    case Score::Extrinsic:
      return eval.per_traj_extrinsic[traj];
    case Score::Intrinsic:
      return eval.per_traj_objective[traj] - eval.per_traj_extrinsic[traj];
  }
  return 0.0;
}

double score_of(const Evaluation& eval, Score score) {
  switch (score) {
    case Score::Objective:
      return eval.objective;
    case Score::Extrinsic:
      return eval.extrinsic;
    case Score::Intrinsic:
      return eval.objective - eval.extrinsic;
  }
  return 0.0;
}

}  // namespace

LandscapeGrid scan_landscape(const ShapedObjective& obj, std::vector<Axis> axes,
                             const ScanSettings& settings, const EvalBudget& budget,
                             std::uint64_t seed) {
  if (axes.empty() || axes.size() > 2)
    throw std::invalid_argument("landscape scans support 1 or 2 axes");
  for (const Axis& a : axes)
    if (a.points < 1) throw std::invalid_argument("axis needs at least one point");

  LandscapeGrid grid;
  grid.axes = std::move(axes);
  grid.epsilon = settings.epsilon;
  const int n_cells = grid.cells();
  grid.mean.resize(n_cells);
  grid.stderr_.resize(n_cells);
  grid.count.resize(n_cells);

  Eigen::VectorXd base = obj.policy->params();
  std::vector<Eigen::VectorXd> values(n_cells);
  parallel_for(n_cells, [&](int c) {
    std::uint64_t cell_seed =
        settings.shared_seeds ? seed : derive_seed(seed, static_cast<std::uint64_t>(c));
    Evaluation eval =
        evaluate_shaped_objective(obj, grid.cell_theta(base, c), budget, cell_seed);
    Eigen::VectorXd v(budget.histories);
    for (int i = 0; i < budget.histories; ++i) v[i] = score_of(eval, settings.score, i);
    values[c] = std::move(v);
  });

  for (int c = 0; c < n_cells; ++c) {
    const Eigen::VectorXd& v = values[c];
    grid.mean[c] = v.mean();
    grid.count[c] = static_cast<int>(v.size());
    double var = (v.array() - grid.mean[c]).square().sum() /
                 std::max<int>(1, static_cast<int>(v.size()) - 1);
    grid.stderr_[c] = std::sqrt(var / v.size());
  }

  Eigen::Index argmax = 0;
  grid.mean.maxCoeff(&argmax);
  grid.global_max = static_cast<int>(argmax);

  // Local maxima: strictly above every grid neighbor by the significance
  // margin (2-neighborhood in 1-D, 8-neighborhood in 2-D).
  int n0 = grid.axes[0].points;
  int n1 = grid.axes.size() > 1 ? grid.axes[1].points : 1;
  for (int c = 0; c < n_cells; ++c) {
    int i0 = c % n0;
    int i1 = c / n0;
    bool is_max = true;
    for (int d1 = -1; d1 <= 1 && is_max; ++d1) {
      for (int d0 = -1; d0 <= 1 && is_max; ++d0) {
        if (d0 == 0 && d1 == 0) continue;
        int j0 = i0 + d0, j1 = i1 + d1;
        if (j0 < 0 || j0 >= n0 || j1 < 0 || j1 >= n1) continue;
        int nb = j1 * n0 + j0;
        double margin = settings.significance_tau *
                        std::sqrt(grid.stderr_[c] * grid.stderr_[c] +
                                  grid.stderr_[nb] * grid.stderr_[nb]);
        if (grid.mean[c] - grid.mean[nb] <= margin) is_max = false;
      }
    }
    if (is_max) grid.local_maxima.push_back(c);
  }

  grid.in_omega.resize(n_cells);
  for (int c = 0; c < n_cells; ++c)
    grid.in_omega[c] = grid.mean[grid.global_max] - grid.mean[c] <= settings.epsilon;
  return grid;
}

CoherenceReport coherence_report(const LandscapeGrid& base,
                                 const LandscapeGrid& shaped, double epsilon) {
  if (base.axes.size() != shaped.axes.size())
    throw std::invalid_argument("coherence report needs identical axes");
  for (size_t d = 0; d < base.axes.size(); ++d) {
    const Axis& a = base.axes[d];
    const Axis& b = shaped.axes[d];
    if (a.min != b.min || a.max != b.max || a.points != b.points ||
        a.param_index != b.param_index)
      throw std::invalid_argument("coherence report needs identical axes");
  }
  CoherenceReport report;
  report.epsilon = epsilon;
  report.base_argmax_cell = base.global_max;
  report.shaped_argmax_cell = shaped.global_max;
  report.gap = base.mean[base.global_max] - base.mean[shaped.global_max];
  report.coherent = report.gap <= epsilon;
  report.shaped_argmax_in_omega = base.in_omega[shaped.global_max] != 0;
  return report;
}

ReferenceGradients reference_gradients(const ShapedObjective& obj,
                                       const Eigen::VectorXd& theta) {
  ReferenceGradients ref;
  auto policy = obj.policy->clone();
  policy->set_params(theta);

  if (obj.mdp->is_finite()) {
    ref.grad_J = exact_policy_gradient(*obj.mdp, *policy);
    ref.grad_L = ref.grad_J;
    for (const IntrinsicBonus& bonus : obj.bonuses) {
      if (bonus.weight == 0.0) continue;
      Eigen::MatrixXd table = exact_intrinsic_reward_table(*obj.mdp, *policy, bonus);
      ref.grad_L +=
          bonus.weight * exact_policy_gradient_with_reward(*obj.mdp, *policy, table);
    }
    return ref;
  }

  // Continuous MDPs: large-sample averages of the estimator itself.
  const int batches = 64;
  EvalBudget budget = obj.budget;
  budget.histories *= 4;
  ref.grad_J = Eigen::VectorXd::Zero(policy->param_dim());
  ref.grad_L = Eigen::VectorXd::Zero(policy->param_dim());
  for (int b = 0; b < batches; ++b) {
    GradientEstimate est = estimate_direction(
        obj, theta, budget, derive_seed(0x7265666572ULL, static_cast<std::uint64_t>(b)));
    ref.grad_J += est.extrinsic;
    ref.grad_L += est.direction;
  }
  ref.grad_J /= batches;
  ref.grad_L /= batches;
  return ref;
}

ImprovementPoint improvement_probability(const ShapedObjective& obj,
                                         const Eigen::VectorXd& theta,
                                         const ReferenceGradients& reference,
                                         int draws, const EvalBudget& budget,
                                         std::uint64_t seed) {
  if (draws < 1) throw std::invalid_argument("need at least one direction draw");
  ImprovementPoint point;
  point.theta = theta;
  point.d_defined = reference.grad_L.norm() >= 1e-12;
  point.g_defined = reference.grad_J.norm() >= 1e-12;

  std::vector<char> d_pos(draws), g_pos(draws);
  parallel_for(draws, [&](int m) {
    GradientEstimate est = estimate_direction(
        obj, theta, budget, derive_seed(seed, static_cast<std::uint64_t>(m)));
    d_pos[m] = est.direction.dot(reference.grad_L) > 0.0;
    g_pos[m] = est.direction.dot(reference.grad_J) > 0.0;
  });
  long d_count = std::count(d_pos.begin(), d_pos.end(), char(1));
  long g_count = std::count(g_pos.begin(), g_pos.end(), char(1));
  point.p_d = wilson_interval(d_count, draws);
  point.p_g = wilson_interval(g_count, draws);
  return point;
}

ImprovementProfile profile_improvement(const ShapedObjective& obj, const Axis& axis,
                                       int draws, const EvalBudget& budget,
                                       std::uint64_t seed) {
  ImprovementProfile profile;
  profile.axis = axis;
  Eigen::VectorXd base = obj.policy->params();
  for (int i = 0; i < axis.points; ++i) {
    Eigen::VectorXd theta = base;
    theta[axis.param_index] = axis.value(i);
    ReferenceGradients ref = reference_gradients(obj, theta);
    profile.points.push_back(improvement_probability(
        obj, theta, ref, draws, budget, derive_seed(seed, static_cast<std::uint64_t>(i))));
  }
  return profile;
}

std::string ImprovementProfile::csv() const {
  std::ostringstream out;
  out.precision(12);
  out << "theta,p_D_pos,p_D_lo,p_D_hi,p_G_pos,p_G_lo,p_G_hi,in_ball\n";
  for (const ImprovementPoint& pt : points) {
    double theta = pt.theta[axis.param_index];
    bool in_ball = !std::isnan(ball_lo) && theta >= ball_lo && theta <= ball_hi;
    auto prob = [&out](const WilsonInterval& w, bool defined) {
      if (defined)
        out << w.p << "," << w.lo << "," << w.hi;
      else
        out << "nan,nan,nan";
    };
    out << theta << ",";
    prob(pt.p_d, pt.d_defined);
    out << ",";
    prob(pt.p_g, pt.g_defined);
    out << "," << (in_ball ? 1 : 0) << "\n";
  }
  return out.str();
}

EfficiencyAttraction efficiency_attraction_report(const ImprovementProfile& profile,
                                                  double ball_lo, double ball_hi) {
  EfficiencyAttraction report;
  report.delta_efficiency = 1.0;
  report.delta_attraction = 1.0;
  bool any_in_ball = false;
  for (const ImprovementPoint& pt : profile.points) {
    double theta = pt.theta[profile.axis.param_index];
    if (pt.d_defined)
      report.delta_efficiency = std::min(report.delta_efficiency, pt.p_d.p);
    if (theta >= ball_lo && theta <= ball_hi && pt.g_defined) {
      report.delta_attraction = std::min(report.delta_attraction, pt.p_g.p);
      any_in_ball = true;
    }
  }
  if (!any_in_ball)
    throw std::invalid_argument("profile does not cover the attraction ball");
  return report;
}

WilsonInterval multi_step_improvement_frequency(
    const ShapedObjective& direction_obj, const ShapedObjective& score_obj,
    const Eigen::VectorXd& theta, Score score, int trials, int steps,
    double threshold, double adam_step_size, const EvalBudget& eval_budget,
    std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");

  // Shared evaluation seed: before/after scores use common random numbers.
  std::uint64_t eval_seed = derive_seed(seed, 0xe7a1ULL);
  double before = score_of(
      evaluate_shaped_objective(score_obj, theta, eval_budget, eval_seed), score);

  std::vector<char> improved(trials);
  parallel_for(trials, [&](int trial) {
    Eigen::VectorXd current = theta;
    OptimizerState opt = OptimizerState::adam(adam_step_size);
    auto projector = direction_obj.policy->clone();
    for (int s = 0; s < steps; ++s) {
      GradientEstimate est = estimate_direction(
          direction_obj, current, direction_obj.budget,
          derive_seed(seed, (static_cast<std::uint64_t>(trial) << 16) | s));
      current = update(opt, current, est.direction);
      projector->set_params(current);
      current = projector->params();
    }
    double after = score_of(
        evaluate_shaped_objective(score_obj, current, eval_budget, eval_seed), score);
    improved[trial] = after - before > threshold;
  });
  long count = std::count(improved.begin(), improved.end(), char(1));
  return wilson_interval(count, trials);
}

LocalOptimalityDiagnostic zero_reward_mass(const MdpSpec& mdp, const Policy& policy) {
  if (!mdp.finite)
    throw UnsupportedOperation("zero-reward mass diagnostic needs a finite MDP");
  const FiniteMdp& fin = *mdp.finite;
  Eigen::VectorXd d = exact_visitation(mdp, policy).probs;
  LocalOptimalityDiagnostic diag;
  for (int s = 0; s < fin.num_states; ++s) {
    State state;
    state.index = s;
    state.obs = fin.obs[s];
    Eigen::VectorXd pi = policy.action_probs(state);
    for (int a = 0; a < fin.num_actions; ++a)
      if (fin.reward(s, a) == 0.0) diag.zero_reward_mass += d[s] * pi[a];
  }
  return diag;
}

}  // namespace pgx
