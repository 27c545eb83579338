#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oblab/run.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_override;
  long seed_override = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("config", opts.config_path, "path to a run config (JSON)")
      ->required();
  cmd->add_option("--out", opts.out_override,
                  "override the output directory from the config");
  cmd->add_option("--seed", opts.seed_override,
                  "override the seed from the config");
}

oblab::RunConfig load(const CommonOpts& opts) {
  oblab::RunConfig cfg = oblab::load_config(opts.config_path);
  if (!opts.out_override.empty()) cfg.output_dir = opts.out_override;
  if (opts.seed_override >= 0) {
    cfg.seed = static_cast<std::uint64_t>(opts.seed_override);
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"obstacle-problem laboratory"};
  app.require_subcommand(1);

  CommonOpts solve_opts, verify_opts, sweep_opts;
  std::string sweep_param;
  std::vector<std::string> sweep_values;
  int workers = 1;

  CLI::App* solve = app.add_subcommand(
      "solve", "solve the obstacle problem and write the solution artifacts");
  add_common(solve, solve_opts);

  CLI::App* verify = app.add_subcommand(
      "verify", "solve, then run every configured verification suite");
  add_common(verify, verify_opts);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "repeat the solve over a list of values for one parameter");
  add_common(sweep, sweep_opts);
  sweep->add_option("--param", sweep_param,
                    "config entry to vary, as a dot path (or \"h\")");
  sweep->add_option("--values", sweep_values,
                    "values, e.g. --values 1/64 1/128 1/256")
      ->expected(-1)
      ->delimiter(',');
  sweep->add_option("--workers", workers, "parallel runs (default 1)")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    oblab::RunArtifacts art;
    if (solve->parsed()) {
      art = oblab::cmd_solve(load(solve_opts));
    } else if (verify->parsed()) {
      art = oblab::cmd_verify(load(verify_opts));
    } else {
      art = oblab::cmd_sweep(load(sweep_opts), sweep_param, sweep_values,
                             workers);
    }
    return art.exit_code;
  } catch (const oblab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return oblab::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return oblab::kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
