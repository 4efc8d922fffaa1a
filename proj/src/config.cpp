#include "pgx/config.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "pgx/oracle.hpp"

namespace pgx {

using nlohmann::json;

int default_horizon(double gamma, double coverage) {
  if (gamma <= 0.0 || gamma >= 1.0)
    throw std::invalid_argument("discount factor must be in (0, 1)");
  if (coverage <= 0.0 || coverage >= 1.0)
    throw std::invalid_argument("coverage must be in (0, 1)");
  int t = static_cast<int>(std::ceil(std::log(1.0 - coverage) / std::log(gamma)));
  return std::max(1, t);
}

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key()))
      throw ConfigError(context + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' has the wrong type");
  }
}

template <typename T>
T require(const json& j, const std::string& key, const std::string& context) {
  if (!j.contains(key)) throw ConfigError(context + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(context + ": key '" + key + "' has the wrong type");
  }
}

AxisConfig parse_axis(const json& j) {
  check_keys(j, {"param", "min", "max", "points"}, "axis");
  AxisConfig axis;
  axis.param = require<std::string>(j, "param", "axis");
  axis.min = require<double>(j, "min", "axis");
  axis.max = require<double>(j, "max", "axis");
  axis.points = require<int>(j, "points", "axis");
  if (axis.points < 1) throw ConfigError("axis: points must be >= 1");
  if (axis.max < axis.min) throw ConfigError("axis: max must be >= min");
  return axis;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  // A manifest echoes the config under "config"; accept it directly.
  if (j.is_object() && j.contains("config")) j = j.at("config");

  check_keys(j,
             {"schema_version", "kind", "environment", "policy", "bonuses",
              "budget", "optimizer", "scan", "profile", "frequency", "train",
              "seed", "output"},
             "config");

  ExperimentConfig cfg;
  cfg.schema_version = require<int>(j, "schema_version", "config");
  if (cfg.schema_version != 1)
    throw ConfigError("unsupported schema_version (expected 1)");

  std::string kind = require<std::string>(j, "kind", "config");
  if (kind == "scan") cfg.kind = ExperimentKind::Scan;
  else if (kind == "train") cfg.kind = ExperimentKind::Train;
  else if (kind == "profile") cfg.kind = ExperimentKind::Profile;
  else if (kind == "frequency") cfg.kind = ExperimentKind::Frequency;
  else if (kind == "oracle") cfg.kind = ExperimentKind::Oracle;
  else throw ConfigError("unknown experiment kind '" + kind + "'");

  const json& env = j.at("environment");
  check_keys(env, {"name", "gamma", "layout", "reward", "layout_seed"}, "environment");
  cfg.environment.name = require<std::string>(env, "name", "environment");
  if (cfg.environment.name != "corridor" && cfg.environment.name != "hill" &&
      cfg.environment.name != "maze")
    throw ConfigError("unknown environment '" + cfg.environment.name + "'");
  cfg.environment.gamma = get_or<double>(env, "gamma", 0.0);
  if (env.contains("gamma") &&
      (cfg.environment.gamma <= 0.0 || cfg.environment.gamma >= 1.0))
    throw ConfigError("environment: gamma must be in (0, 1)");
  cfg.environment.layout = get_or<std::string>(env, "layout", "Empty-8x8");
  cfg.environment.layout_seed = get_or<std::uint64_t>(env, "layout_seed", 0);
  std::string reward = get_or<std::string>(env, "reward", "sparse");
  if (reward != "sparse" && reward != "dense")
    throw ConfigError("environment: reward must be 'sparse' or 'dense'");
  cfg.environment.dense = reward == "dense";

  const json& pol = j.at("policy");
  check_keys(pol, {"family", "theta", "gain", "sigma", "init_seed"}, "policy");
  cfg.policy.family = require<std::string>(pol, "family", "policy");
  cfg.policy.theta = get_or<double>(pol, "theta", 0.5);
  cfg.policy.gain = get_or<double>(pol, "gain", 0.0);
  cfg.policy.sigma = get_or<double>(pol, "sigma", 1.0);
  cfg.policy.init_seed = get_or<std::uint64_t>(pol, "init_seed", 0);
  if (cfg.policy.family != "bernoulli" &&
      cfg.policy.family != "proportional_gaussian" &&
      cfg.policy.family != "categorical_mlp")
    throw ConfigError("unknown policy family '" + cfg.policy.family + "'");

  for (const json& b : get_or<json>(j, "bonuses", json::array())) {
    check_keys(b, {"kind", "weight", "estimator", "bins", "components"}, "bonus");
    BonusConfig bonus;
    bonus.kind = require<std::string>(b, "kind", "bonus");
    if (bonus.kind != "action_entropy" && bonus.kind != "state_entropy")
      throw ConfigError("unknown bonus kind '" + bonus.kind + "'");
    bonus.weight = require<double>(b, "weight", "bonus");
    if (bonus.weight < 0.0) throw ConfigError("bonus weights must be non-negative");
    bonus.estimator = get_or<std::string>(b, "estimator", "histogram");
    if (bonus.estimator != "histogram" && bonus.estimator != "gmm")
      throw ConfigError("unknown density estimator '" + bonus.estimator + "'");
    bonus.bins = get_or<int>(b, "bins", 64);
    bonus.components = get_or<int>(b, "components", 10);
    if (bonus.bins < 1 || bonus.components < 1)
      throw ConfigError("bonus: bins and components must be positive");
    cfg.bonuses.push_back(bonus);
  }

  if (j.contains("budget")) {
    const json& b = j.at("budget");
    check_keys(b, {"histories", "horizon"}, "budget");
    cfg.histories = get_or<int>(b, "histories", cfg.histories);
    cfg.horizon = get_or<int>(b, "horizon", 0);
    if (cfg.histories < 1) throw ConfigError("budget: histories must be >= 1");
    if (cfg.horizon < 0) throw ConfigError("budget: horizon must be >= 0");
  }

  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    check_keys(o, {"rule", "step_size"}, "optimizer");
    cfg.optimizer_rule = get_or<std::string>(o, "rule", "adam");
    if (cfg.optimizer_rule != "adam" && cfg.optimizer_rule != "sga")
      throw ConfigError("optimizer rule must be 'adam' or 'sga'");
    cfg.step_size = get_or<double>(o, "step_size", cfg.step_size);
    if (cfg.step_size <= 0.0) throw ConfigError("optimizer: step_size must be > 0");
  }

  if (j.contains("scan")) {
    const json& s = j.at("scan");
    check_keys(s, {"axes", "score", "epsilon", "shared_seeds"}, "scan");
    for (const json& a : require<json>(s, "axes", "scan")) cfg.axes.push_back(parse_axis(a));
    cfg.scan_score = get_or<std::string>(s, "score", "L");
    cfg.epsilon = get_or<double>(s, "epsilon", 1.0);
    cfg.shared_seeds = get_or<bool>(s, "shared_seeds", true);
  }

  if (j.contains("profile")) {
    const json& p = j.at("profile");
    check_keys(p, {"axis", "directions"}, "profile");
    cfg.axes.push_back(parse_axis(require<json>(p, "axis", "profile")));
    cfg.directions = get_or<int>(p, "directions", 500);
    if (cfg.directions < 1) throw ConfigError("profile: directions must be >= 1");
  }

  if (j.contains("frequency")) {
    const json& f = j.at("frequency");
    check_keys(f, {"trials", "steps", "threshold", "score"}, "frequency");
    cfg.trials = get_or<int>(f, "trials", 100);
    cfg.steps = get_or<int>(f, "steps", 5);
    cfg.threshold = get_or<double>(f, "threshold", 0.2);
    cfg.frequency_score = get_or<std::string>(f, "score", "L");
    if (cfg.trials < 1 || cfg.steps < 1)
      throw ConfigError("frequency: trials and steps must be >= 1");
  }

  if (j.contains("train")) {
    const json& t = j.at("train");
    check_keys(t, {"iterations", "seeds"}, "train");
    cfg.iterations = get_or<long>(t, "iterations", 100);
    cfg.train_seeds = get_or<int>(t, "seeds", 1);
    if (cfg.iterations < 0) throw ConfigError("train: iterations must be >= 0");
    if (cfg.train_seeds < 1) throw ConfigError("train: seeds must be >= 1");
  }

  if ((cfg.kind == ExperimentKind::Scan || cfg.kind == ExperimentKind::Profile) &&
      cfg.axes.empty())
    throw ConfigError(kind + " experiments need axis definitions");

  cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
  cfg.output = get_or<std::string>(j, "output", "out");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

Score parse_score(const std::string& name) {
  if (name == "L") return Score::Objective;
  if (name == "J") return Score::Extrinsic;
  if (name == "Jint") return Score::Intrinsic;
  throw ConfigError("unknown score '" + name + "' (expected J, L, or Jint)");
}

int axis_param_index(const std::string& family, const std::string& param) {
  if (family == "bernoulli") {
    if (param == "theta") return 0;
  } else if (family == "proportional_gaussian") {
    if (param == "K" || param == "gain") return 0;
    if (param == "sigma") return 1;
  }
  throw ConfigError("axis parameter '" + param + "' is not scannable for family " +
                    family);
}

}  // namespace

BuiltExperiment build_experiment(const ExperimentConfig& cfg) {
  BuiltExperiment built;
  HistogramSpec default_hist;
  int hist_bins = 64;
  for (const BonusConfig& b : cfg.bonuses)
    if (b.kind == "state_entropy") hist_bins = b.bins;

  if (cfg.environment.name == "corridor") {
    CorridorConfig corridor;
    if (cfg.environment.gamma > 0.0) corridor.gamma = cfg.environment.gamma;
    built.mdp = std::make_shared<MdpSpec>(make_corridor(corridor));
    default_hist = HistogramSpec::discrete_1d(1, corridor.tiles + 1);
  } else if (cfg.environment.name == "hill") {
    HillConfig hill = HillConfig::defaults();
    if (cfg.environment.gamma > 0.0) hill.gamma = cfg.environment.gamma;
    built.mdp = std::make_shared<MdpSpec>(make_hill(hill));
    default_hist.lo = Eigen::VectorXd::Constant(1, hill.x_min);
    default_hist.hi = Eigen::VectorXd::Constant(1, hill.x_max);
    default_hist.bins = {hist_bins};
  } else {
    GridMazeConfig maze;
    maze.layout = cfg.environment.layout;
    maze.dense = cfg.environment.dense;
    maze.layout_seed = cfg.environment.layout_seed;
    if (cfg.environment.gamma > 0.0) maze.gamma = cfg.environment.gamma;
    GridMaze grid = make_grid_maze(maze);
    built.mdp = std::make_shared<MdpSpec>(std::move(grid.mdp));
    default_hist.lo = Eigen::Vector2d(0.0, 0.0);
    default_hist.hi = Eigen::Vector2d(grid.layout.width, grid.layout.height);
    default_hist.bins = {grid.layout.width, grid.layout.height};
  }

  std::shared_ptr<Policy> policy;
  if (cfg.policy.family == "bernoulli") {
    if (!built.mdp->is_finite() || built.mdp->finite->num_actions != 2)
      throw ConfigError("bernoulli policy needs a two-action environment");
    policy = std::make_shared<BernoulliPolicy>(cfg.policy.theta);
  } else if (cfg.policy.family == "proportional_gaussian") {
    if (cfg.environment.name != "hill")
      throw ConfigError("proportional_gaussian policy is for the hill environment");
    policy = std::make_shared<ProportionalGaussianPolicy>(cfg.policy.gain,
                                                          cfg.policy.sigma);
  } else {
    if (!built.mdp->is_finite())
      throw ConfigError("categorical_mlp policy needs a finite environment");
    policy = std::make_shared<CategoricalMlpPolicy>(
        static_cast<int>(built.mdp->finite->obs[0].size()),
        built.mdp->finite->num_actions, cfg.policy.init_seed);
  }

  built.horizon = cfg.horizon > 0 ? cfg.horizon : default_horizon(built.mdp->gamma);

  built.objective.mdp = built.mdp;
  built.objective.policy = policy;
  built.objective.budget = {cfg.histories, built.horizon};
  for (const BonusConfig& b : cfg.bonuses) {
    IntrinsicBonus bonus;
    bonus.kind = b.kind == "action_entropy" ? BonusKind::ActionEntropy
                                            : BonusKind::StateEntropy;
    bonus.weight = b.weight;
    bonus.estimator =
        b.estimator == "gmm" ? EstimatorKind::Gmm : EstimatorKind::Histogram;
    bonus.histogram = default_hist;
    bonus.gmm_components = b.components;
    built.objective.bonuses.push_back(std::move(bonus));
  }

  built.unshaped = built.objective;
  built.unshaped.bonuses.clear();

  for (const AxisConfig& a : cfg.axes) {
    Axis axis;
    axis.name = a.param;
    axis.param_index = axis_param_index(cfg.policy.family, a.param);
    axis.min = a.min;
    axis.max = a.max;
    axis.points = a.points;
    built.axes.push_back(axis);
  }
  return built;
}

// ---------------------------------------------------------------------------
// Experiment execution

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

json config_echo(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  switch (cfg.kind) {
    case ExperimentKind::Scan: j["kind"] = "scan"; break;
    case ExperimentKind::Train: j["kind"] = "train"; break;
    case ExperimentKind::Profile: j["kind"] = "profile"; break;
    case ExperimentKind::Frequency: j["kind"] = "frequency"; break;
    case ExperimentKind::Oracle: j["kind"] = "oracle"; break;
  }
  json env;
  env["name"] = cfg.environment.name;
  if (cfg.environment.gamma > 0.0) env["gamma"] = cfg.environment.gamma;
  if (cfg.environment.name == "maze") {
    env["layout"] = cfg.environment.layout;
    env["reward"] = cfg.environment.dense ? "dense" : "sparse";
    env["layout_seed"] = cfg.environment.layout_seed;
  }
  j["environment"] = env;
  json pol;
  pol["family"] = cfg.policy.family;
  if (cfg.policy.family == "bernoulli") pol["theta"] = cfg.policy.theta;
  if (cfg.policy.family == "proportional_gaussian") {
    pol["gain"] = cfg.policy.gain;
    pol["sigma"] = cfg.policy.sigma;
  }
  if (cfg.policy.family == "categorical_mlp") pol["init_seed"] = cfg.policy.init_seed;
  j["policy"] = pol;
  json bonuses = json::array();
  for (const BonusConfig& b : cfg.bonuses) {
    json bj;
    bj["kind"] = b.kind;
    bj["weight"] = b.weight;
    if (b.kind == "state_entropy") {
      bj["estimator"] = b.estimator;
      if (b.estimator == "histogram") bj["bins"] = b.bins;
      if (b.estimator == "gmm") bj["components"] = b.components;
    }
    bonuses.push_back(bj);
  }
  j["bonuses"] = bonuses;
  j["budget"] = {{"histories", cfg.histories}, {"horizon", cfg.horizon}};
  j["optimizer"] = {{"rule", cfg.optimizer_rule}, {"step_size", cfg.step_size}};
  if (cfg.kind == ExperimentKind::Scan) {
    json axes = json::array();
    for (const AxisConfig& a : cfg.axes)
      axes.push_back({{"param", a.param}, {"min", a.min}, {"max", a.max},
                      {"points", a.points}});
    j["scan"] = {{"axes", axes}, {"score", cfg.scan_score},
                 {"epsilon", cfg.epsilon}, {"shared_seeds", cfg.shared_seeds}};
  }
  if (cfg.kind == ExperimentKind::Profile) {
    const AxisConfig& a = cfg.axes.front();
    j["profile"] = {{"axis", {{"param", a.param}, {"min", a.min}, {"max", a.max},
                              {"points", a.points}}},
                    {"directions", cfg.directions}};
  }
  if (cfg.kind == ExperimentKind::Frequency)
    j["frequency"] = {{"trials", cfg.trials}, {"steps", cfg.steps},
                      {"threshold", cfg.threshold}, {"score", cfg.frequency_score}};
  if (cfg.kind == ExperimentKind::Train)
    j["train"] = {{"iterations", cfg.iterations}, {"seeds", cfg.train_seeds}};
  j["seed"] = cfg.seed;
  j["output"] = cfg.output;
  return j;
}

OptimizerState make_optimizer(const ExperimentConfig& cfg) {
  return cfg.optimizer_rule == "adam" ? OptimizerState::adam(cfg.step_size)
                                      : OptimizerState::sga(cfg.step_size);
}

json run_scan(const ExperimentConfig& cfg, const BuiltExperiment& built,
              const std::filesystem::path& out) {
  ScanSettings settings;
  settings.score = parse_score(cfg.scan_score);
  settings.epsilon = cfg.epsilon;
  settings.shared_seeds = cfg.shared_seeds;
  LandscapeGrid grid = scan_landscape(built.objective, built.axes, settings,
                                      built.objective.budget, cfg.seed);
  write_file(out / "landscape.csv", grid.csv());

  json report;
  report["global_max_cell"] = grid.global_max;
  report["global_max_value"] = grid.mean[grid.global_max];
  json theta = json::array();
  std::vector<int> idx = grid.cell_index(grid.global_max);
  for (size_t d = 0; d < grid.axes.size(); ++d)
    theta.push_back(grid.axes[d].value(idx[d]));
  report["global_max_theta"] = theta;
  report["local_maxima"] = grid.local_maxima;
  report["epsilon"] = grid.epsilon;
  return report;
}

json run_train(const ExperimentConfig& cfg, const BuiltExperiment& built,
               const std::filesystem::path& out) {
  json report;
  std::vector<double> finals;
  for (int s = 0; s < cfg.train_seeds; ++s) {
    ShapedObjective obj = built.objective;
    std::uint64_t run_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(s));
    // Per-seed re-initialization for parametric families.
    if (cfg.policy.family == "categorical_mlp") {
      obj.policy = std::make_shared<CategoricalMlpPolicy>(
          static_cast<int>(built.mdp->finite->obs[0].size()),
          built.mdp->finite->num_actions, derive_seed(cfg.policy.init_seed, s));
    } else {
      obj.policy = built.objective.policy->clone();
    }
    TrainLog log = train(obj, make_optimizer(cfg), cfg.iterations, run_seed);
    write_file(out / ("train_" + std::to_string(s) + ".csv"),
               log.csv(static_cast<int>(obj.bonuses.size())));

    // Final return measured on a fresh evaluation batch without bonuses.
    ShapedObjective plain = built.unshaped;
    plain.policy = obj.policy->clone();
    double final_return =
        evaluate_shaped_objective(plain, log.final_params, plain.budget,
                                  derive_seed(run_seed, 0xf17a1ULL))
            .extrinsic;
    finals.push_back(final_return);
  }
  std::vector<double> sorted = finals;
  std::sort(sorted.begin(), sorted.end());
  report["final_returns"] = finals;
  report["median_final_return"] = sorted[sorted.size() / 2];
  return report;
}

json run_profile(const ExperimentConfig& cfg, const BuiltExperiment& built,
                 const std::filesystem::path& out) {
  const Axis& axis = built.axes.front();
  ImprovementProfile profile = profile_improvement(
      built.objective, axis, cfg.directions, built.objective.budget, cfg.seed);

  json report;
  if (!built.objective.bonuses.empty()) {
    // Ball from the argmaxes of the intrinsic return and of L on this axis.
    ScanSettings settings;
    settings.shared_seeds = true;
    settings.score = Score::Intrinsic;
    LandscapeGrid intr = scan_landscape(built.objective, {axis}, settings,
                                        built.objective.budget,
                                        derive_seed(cfg.seed, 0xba11ULL));
    settings.score = Score::Objective;
    LandscapeGrid shaped = scan_landscape(built.objective, {axis}, settings,
                                          built.objective.budget,
                                          derive_seed(cfg.seed, 0xba12ULL));
    double theta_int = intr.axes[0].value(intr.cell_index(intr.global_max)[0]);
    double theta_dag =
        shaped.axes[0].value(shaped.cell_index(shaped.global_max)[0]);
    profile.ball_lo = std::min(theta_int, theta_dag);
    profile.ball_hi = std::max(theta_int, theta_dag);
    EfficiencyAttraction deltas =
        efficiency_attraction_report(profile, profile.ball_lo, profile.ball_hi);
    report["theta_int"] = theta_int;
    report["theta_dagger"] = theta_dag;
    report["ball"] = {profile.ball_lo, profile.ball_hi};
    report["delta_efficiency"] = deltas.delta_efficiency;
    report["delta_attraction"] = deltas.delta_attraction;
  }
  write_file(out / "profile.csv", profile.csv());

  // With several bonuses configured, profile each one alone as well, so every
  // per-term curve lands in its own schema-conforming file.
  if (built.objective.bonuses.size() > 1) {
    for (size_t k = 0; k < built.objective.bonuses.size(); ++k) {
      ShapedObjective solo = built.objective;
      solo.bonuses = {built.objective.bonuses[k]};
      ImprovementProfile sub =
          profile_improvement(solo, axis, cfg.directions, solo.budget,
                              derive_seed(cfg.seed, 0xb000ULL + k));
      std::string kind = solo.bonuses[0].kind == BonusKind::ActionEntropy
                             ? "action_entropy"
                             : "state_entropy";
      write_file(out / ("profile_" + std::to_string(k) + "_" + kind + ".csv"),
                 sub.csv());
    }
  }
  return report;
}

json run_frequency(const ExperimentConfig& cfg, const BuiltExperiment& built) {
  EvalBudget eval_budget = built.objective.budget;
  WilsonInterval freq = multi_step_improvement_frequency(
      built.objective, built.objective, built.objective.policy->params(),
      parse_score(cfg.frequency_score), cfg.trials, cfg.steps, cfg.threshold,
      cfg.step_size, eval_budget, cfg.seed);
  json report;
  report["frequency"] = freq.p;
  report["wilson_lo"] = freq.lo;
  report["wilson_hi"] = freq.hi;
  report["trials"] = cfg.trials;
  report["steps"] = cfg.steps;
  report["threshold"] = cfg.threshold;
  return report;
}

json run_oracle(const ExperimentConfig& cfg, const BuiltExperiment& built) {
  const Policy& policy = *built.objective.policy;
  json report;
  report["exact_return"] = exact_return(*built.mdp, policy);
  VisitationMeasure d = exact_visitation(*built.mdp, policy);
  report["visitation"] = std::vector<double>(d.probs.data(),
                                             d.probs.data() + d.probs.size());
  Eigen::VectorXd grad = exact_policy_gradient(*built.mdp, policy);
  report["policy_gradient"] =
      std::vector<double>(grad.data(), grad.data() + grad.size());
  report["zero_reward_mass"] = zero_reward_mass(*built.mdp, policy).zero_reward_mass;
  return report;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  auto start = std::chrono::steady_clock::now();
  std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out);

  BuiltExperiment built = build_experiment(cfg);
  json report;
  switch (cfg.kind) {
    case ExperimentKind::Scan:
      report = run_scan(cfg, built, out);
      break;
    case ExperimentKind::Train:
      report = run_train(cfg, built, out);
      break;
    case ExperimentKind::Profile:
      report = run_profile(cfg, built, out);
      break;
    case ExperimentKind::Frequency:
      report = run_frequency(cfg, built);
      break;
    case ExperimentKind::Oracle:
      report = run_oracle(cfg, built);
      break;
  }
  report["horizon"] = built.horizon;
  write_file(out / "report.json", report.dump(2) + "\n");

  json manifest;
  manifest["config"] = config_echo(cfg);
  manifest["seed"] = cfg.seed;
  manifest["version"] = "1.0.0";
  manifest["wall_time_ms"] = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
  write_file(out / "manifest.json", manifest.dump(2) + "\n");
  return 0;
}

}  // namespace pgx
