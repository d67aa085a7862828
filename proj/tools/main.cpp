// Command line driver: solve the curvature problem on a cap, verify the
// gradient and size estimates on a stored solution, reconstruct and export
// the surface, run the independent axisymmetric oracle, or sweep a
// parameter grid. All commands are driven by one flat key = value config
// file; see the repository README for the key list.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"

namespace {

struct CommonArgs {
  std::string config;
  std::string out_dir;
  std::string run_id;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("-c,--config", args.config, "path to a key = value config file")
      ->required();
  cmd->add_option("-o,--out", args.out_dir, "output directory (overrides config)");
  cmd->add_option("-r,--run-id", args.run_id, "artifact name prefix (overrides config)");
}

capillary::cli::RunConfig load(const CommonArgs& args) {
  capillary::cli::RunConfig cfg = capillary::cli::parse_config_file(args.config);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (!args.run_id.empty()) cfg.run_id = args.run_id;
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"capillary curvature solver and estimate verifier"};
  app.require_subcommand(1);

  CommonArgs solve_args, verify_args, reconstruct_args, oracle_args, sweep_args;
  int jobs = 1;

  CLI::App* solve = app.add_subcommand("solve", "solve the curvature problem");
  add_common(solve, solve_args);
  CLI::App* verify = app.add_subcommand("verify", "check estimates on a stored solution");
  add_common(verify, verify_args);
  CLI::App* reconstruct =
      app.add_subcommand("reconstruct", "rebuild and export the surface mesh");
  add_common(reconstruct, reconstruct_args);
  CLI::App* oracle =
      app.add_subcommand("oracle", "run the independent axisymmetric solver");
  add_common(oracle, oracle_args);
  CLI::App* sweep = app.add_subcommand("sweep", "run a theta x p x gamma parameter grid");
  add_common(sweep, sweep_args);
  sweep->add_option("-j,--jobs", jobs, "worker threads for sweep rows")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return capillary::cli::cmd_solve(load(solve_args));
    if (verify->parsed()) return capillary::cli::cmd_verify(load(verify_args));
    if (reconstruct->parsed())
      return capillary::cli::cmd_reconstruct(load(reconstruct_args));
    if (oracle->parsed()) return capillary::cli::cmd_oracle(load(oracle_args));
    if (sweep->parsed()) return capillary::cli::cmd_sweep(load(sweep_args), jobs);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
