// Benchmark CLI: reproduces the error/condition/projection/level-curve
// studies for the two-disk conductivity problem and writes CSV/SVG artifacts.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "twodisk/experiments.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"two-disk conductivity solver benchmarks"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "experiment config file")->required();
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_option("--threads", threads, "worker thread bound (default: hardware)");
    return sub;
  };
  auto* cmd_solve = add_common(app.add_subcommand("solve", "single solve, densities + fluxes"));
  auto* cmd_eps = add_common(app.add_subcommand("sweep-eps", "flux error vs gap width"));
  auto* cmd_grid = add_common(app.add_subcommand("sweep-grid", "flux error vs node count"));
  auto* cmd_cond = add_common(app.add_subcommand("condition", "condition numbers vs gap width"));
  auto* cmd_proj = add_common(app.add_subcommand("projections", "RHS/residual singular-vector projections"));
  auto* cmd_levels = add_common(app.add_subcommand("levels", "field samples and contour SVG"));

  CLI11_PARSE(app, argc, argv);

  try {
    twodisk::ExperimentConfig cfg = twodisk::load_config(config_path);
    fs::create_directories(out_dir);
    twodisk::RunRecord rec;
    if (cmd_solve->parsed()) rec = twodisk::run_single_solve(cfg, out_dir);
    else if (cmd_eps->parsed()) rec = twodisk::run_eps_error_sweep(cfg, out_dir);
    else if (cmd_grid->parsed()) rec = twodisk::run_grid_error_sweep(cfg, out_dir);
    else if (cmd_cond->parsed()) rec = twodisk::run_condition_sweep(cfg, out_dir);
    else if (cmd_proj->parsed()) rec = twodisk::run_projection_study(cfg, out_dir);
    else if (cmd_levels->parsed()) rec = twodisk::run_level_curves(cfg, out_dir, threads);
    if (!rec.ok) {
      std::cerr << "some runs failed; see " << (fs::path(out_dir) / "record.txt") << "\n";
      return 1;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
