#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgx/analysis.hpp"
#include "pgx/envs.hpp"
#include "pgx/learn.hpp"

namespace pgx {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Smallest T with 1 - gamma^T >= coverage (geometric-horizon rule).
int default_horizon(double gamma, double coverage = 0.85);

enum class ExperimentKind { Scan, Train, Profile, Frequency, Oracle };

struct EnvironmentConfig {
  std::string name;  // corridor | hill | maze
  double gamma = 0.0;  // 0 keeps the environment default
  // maze only
  std::string layout = "Empty-8x8";
  bool dense = false;
  std::uint64_t layout_seed = 0;
};

struct PolicyConfig {
  std::string family;  // bernoulli | proportional_gaussian | categorical_mlp
  double theta = 0.5;  // bernoulli
  double gain = 0.0;   // proportional_gaussian
  double sigma = 1.0;
  std::uint64_t init_seed = 0;  // categorical_mlp
};

struct BonusConfig {
  std::string kind;  // action_entropy | state_entropy
  double weight = 0.0;
  std::string estimator = "histogram";  // histogram | gmm
  int bins = 64;        // histogram bins for continuous features
  int components = 10;  // gmm
};

struct AxisConfig {
  std::string param;  // parameter name; resolved to an index per family
  double min = 0.0;
  double max = 1.0;
  int points = 2;
};

struct ExperimentConfig {
  int schema_version = 1;
  ExperimentKind kind = ExperimentKind::Oracle;
  EnvironmentConfig environment;
  PolicyConfig policy;
  std::vector<BonusConfig> bonuses;

  int histories = 8;
  int horizon = 0;  // 0: geometric-horizon default for the environment gamma
  int directions = 500;     // profile
  long iterations = 100;    // train
  int train_seeds = 1;      // independent training runs
  int trials = 100;         // frequency
  int steps = 5;
  double threshold = 0.2;
  std::string frequency_score = "L";  // J | L | Jint

  std::string optimizer_rule = "adam";
  double step_size = 5e-4;

  std::vector<AxisConfig> axes;  // scan / profile
  std::string scan_score = "L";
  double epsilon = 1.0;
  bool shared_seeds = true;

  std::uint64_t seed = 0;
  std::string output = "out";
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// The runnable pieces assembled from a config.
struct BuiltExperiment {
  std::shared_ptr<MdpSpec> mdp;
  ShapedObjective objective;           // with the configured bonuses
  ShapedObjective unshaped;            // same budget, no bonuses
  std::vector<Axis> axes;
  int horizon = 0;
};

BuiltExperiment build_experiment(const ExperimentConfig& cfg);

// Executes the experiment, writing CSV/JSON artifacts plus manifest.json into
// `out_dir`. Returns the process exit code (0 success).
int run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace pgx
