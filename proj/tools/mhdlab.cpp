// Command-line driver: one subcommand per experiment, each consuming a flat
// key=value config file and writing CSVs plus a summary into --out.
//
// Exit codes: 0 success, 2 configuration error, 3 solver divergence,
// 4 a verification check failed.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mhdlab/experiments.hpp"

namespace {

struct SubcommandArgs {
  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
};

void add_experiment(CLI::App& app, const char* name, const char* help,
                    mhdlab::ExperimentKind kind, int& exit_code) {
  auto args = std::make_shared<SubcommandArgs>();
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--config", args->config_path, "path to a key=value config file")
      ->required();
  sub->add_option("--out", args->out_override, "output directory (overrides config)");
  sub->add_option("--seed", args->seed_override, "RNG seed (overrides config)")
      ->each([args](const std::string&) { args->seed_set = true; });
  sub->callback([args, kind, &exit_code]() {
    mhdlab::ExperimentConfig cfg = mhdlab::parse_config_file(args->config_path, kind);
    if (!args->out_override.empty()) cfg.out = args->out_override;
    if (args->seed_set) cfg.seed = args->seed_override;
    exit_code = mhdlab::run_experiment(cfg);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mhdlab: verified linear/nonlinear experiments for an ideal "
               "conducting fluid near a uniform background field"};
  app.require_subcommand(1);

  int exit_code = 0;
  add_experiment(app, "check-diophantine",
                 "certify the small-divisor constant of the background direction",
                 mhdlab::ExperimentKind::check_diophantine, exit_code);
  add_experiment(app, "classify-spectrum",
                 "map the S1/S2/S3 regions of the damped-wave discriminant",
                 mhdlab::ExperimentKind::classify_spectrum, exit_code);
  add_experiment(app, "verify-kernels",
                 "check the per-region kernel bounds mode by mode",
                 mhdlab::ExperimentKind::verify_kernels, exit_code);
  add_experiment(app, "linear-decay",
                 "measure algebraic decay of the linear semigroup",
                 mhdlab::ExperimentKind::linear_decay, exit_code);
  add_experiment(app, "nonlinear-run",
                 "time-step the full nonlinear system and audit its invariants",
                 mhdlab::ExperimentKind::nonlinear_run, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const mhdlab::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return mhdlab::kExitConfig;
  } catch (const mhdlab::divergence_error& e) {
    std::cerr << "solver diverged: " << e.what() << "\n";
    return mhdlab::kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
