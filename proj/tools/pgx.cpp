#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "pgx/config.hpp"
#include "pgx/envs.hpp"
#include "pgx/parallel.hpp"

namespace {

// Flags beat environment variables beat the config file.
std::optional<std::string> env_var(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed_flag,
            int threads, std::optional<std::string> out_flag) {
  pgx::ExperimentConfig cfg = pgx::load_config(config_path);

  if (auto env_seed = env_var("PGX_SEED")) cfg.seed = std::stoull(*env_seed);
  if (seed_flag) cfg.seed = *seed_flag;

  std::string out = cfg.output;
  if (auto env_out = env_var("PGX_OUT")) out = *env_out;
  if (out_flag) out = *out_flag;

  if (threads > 0) pgx::set_max_threads(threads);
  return pgx::run_experiment(cfg, out);
}

int cmd_validate(const std::string& config_path) {
  pgx::ExperimentConfig cfg = pgx::load_config(config_path);
  pgx::build_experiment(cfg);  // surfaces semantic errors, not just schema ones
  std::cout << "ok: " << config_path << "\n";
  return 0;
}

int cmd_layouts(const std::string& name, std::uint64_t layout_seed) {
  pgx::MazeLayout layout = pgx::make_maze_layout(name, layout_seed);
  std::cout << layout.ascii();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pgx: policy-gradient exploration workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  int threads = 0;

  CLI::App* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed, "Override the master seed");
  run->add_option("--threads", threads, "Worker thread cap");
  run->add_option("--out", out, "Output directory");

  CLI::App* validate = app.add_subcommand("validate", "Check a config and exit");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  std::string maze_name;
  std::uint64_t layout_seed = 0;
  CLI::App* layouts = app.add_subcommand("layouts", "Print a maze layout");
  layouts->add_option("name", maze_name, "Layout name, e.g. Empty-8x8")->required();
  layouts->add_option("--layout-seed", layout_seed, "Layout generation seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, seed, threads, out);
    if (validate->parsed()) return cmd_validate(config_path);
    return cmd_layouts(maze_name, layout_seed);
  } catch (const pgx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
