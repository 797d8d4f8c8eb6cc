// Command-line front end: wires config files into the experiment commands.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hlab/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out;
  double tol = -1.0;
  std::int64_t seed = -1;
  int jobs = 1;
};

void add_common(CLI::App* sub, CommonArgs& args) {
  sub->add_option("--config", args.config_path, "experiment config file")
      ->required();
  sub->add_option("--out", args.out, "output directory (HARNACK_LAB_OUT overrides)");
  sub->add_option("--tol", args.tol, "margin tolerance override");
  sub->add_option("--seed", args.seed, "seed override for randomized data");
  sub->add_option("--jobs", args.jobs, "worker threads for sweep cells");
}

hlab::CliOverrides to_overrides(const CommonArgs& args) {
  hlab::CliOverrides ov;
  if (!args.out.empty()) ov.out = args.out;
  if (args.tol >= 0.0) ov.tol = args.tol;
  if (args.seed >= 0) ov.seed = static_cast<std::uint64_t>(args.seed);
  ov.jobs = args.jobs;
  return ov;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of gradient estimates and Harnack "
               "inequalities for parabolic equations under Ricci flow"};
  app.require_subcommand(1);

  CommonArgs args;
  int (*run)(const hlab::ExperimentConfig&, const hlab::CliOverrides&) = nullptr;

  auto* check = app.add_subcommand(
      "check-conditions", "verify the (6.1)/(6.2) admissibility systems");
  add_common(check, args);
  check->callback([&] { run = &hlab::cmd_check_conditions; });

  auto* solve = app.add_subcommand("solve", "integrate the evolution equation");
  add_common(solve, args);
  solve->callback([&] { run = &hlab::cmd_solve; });

  auto* verify = app.add_subcommand(
      "verify", "check gradient-estimate bounds against a solver run");
  add_common(verify, args);
  verify->callback([&] { run = &hlab::cmd_verify; });

  auto* harnack = app.add_subcommand(
      "harnack", "check Harnack factors over an endpoint grid");
  add_common(harnack, args);
  harnack->callback([&] { run = &hlab::cmd_harnack; });

  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");
  add_common(sweep, args);
  sweep->callback([&] { run = &hlab::cmd_sweep; });

  app.add_flag_callback("--version",
                        [] {
                          std::cout << hlab::version_string() << "\n";
                          std::exit(0);
                        },
                        "print version and exit");

  CLI11_PARSE(app, argc, argv);

  hlab::ExperimentConfig cfg;
  try {
    cfg = hlab::ExperimentConfig::parse_file(args.config_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return hlab::kExitConfig;
  }
  return run(cfg, to_overrides(args));
}
