// SPDX-License-Identifier: Apache-2.0
//
// pqe: command-line driver for the experiment layer.
//
//   pqe run         --config FILE --out DIR [--seed N]
//   pqe scan        --config FILE --out DIR [--seed N] [--threads N]
//   pqe noise-study --config FILE --out DIR [--seed N] [--threads N]
//   pqe fci         (--config FILE | --fixture FILE) [--out DIR]
//
// Exit status: 0 success, 1 user error, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "pqe/error.hpp"
#include "pqe/experiment.hpp"

namespace fs = std::filesystem;
namespace ex = pqe::experiment;

namespace {

struct Args {
  std::string config;
  std::string fixture;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

ex::ExperimentConfig load(const Args& a) {
  ex::ExperimentConfig c;
  if (!a.config.empty()) {
    c = ex::load_config(a.config);
  } else {
    // fci shortcut: a one-line config naming the fixture.
    std::istringstream in("method = fci\nfixture = " + a.fixture + "\n");
    c = ex::parse_config(in, fs::current_path());
  }
  if (a.seed) ex::set_seed(c, *a.seed);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective and variational quantum eigensolver experiments"};
  app.set_version_flag("--version", "pqe 1.0.0");
  app.require_subcommand(1);

  Args args;
  auto add_common = [&](CLI::App* sub, bool need_out) {
    auto* out = sub->add_option("--out", args.out, "Output directory");
    if (need_out) out->required();
    sub->add_option("--seed", args.seed, "Base RNG seed (overrides the config)");
  };

  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("--config", args.config, "Experiment config")->required()->check(CLI::ExistingFile);
  add_common(run, true);

  auto* scan = app.add_subcommand("scan", "Run every (fixture, omega) point of a config");
  scan->add_option("--config", args.config, "Experiment config")->required()->check(CLI::ExistingFile);
  add_common(scan, true);
  scan->add_option("--threads", args.threads, "Concurrent points (0: all cores)")->check(CLI::NonNegativeNumber);

  auto* noise = app.add_subcommand("noise-study", "Seed ensemble of noisy runs");
  noise->add_option("--config", args.config, "Experiment config")->required()->check(CLI::ExistingFile);
  add_common(noise, true);
  noise->add_option("--threads", args.threads, "Concurrent members (0: all cores)")->check(CLI::NonNegativeNumber);

  auto* fci = app.add_subcommand("fci", "Exact ground-state energy of a fixture");
  auto* fci_cfg = fci->add_option("--config", args.config, "Experiment config")->check(CLI::ExistingFile);
  auto* fci_fix = fci->add_option("--fixture", args.fixture, "FCIDUMP file")->check(CLI::ExistingFile);
  fci_cfg->excludes(fci_fix);
  fci->add_option("--out", args.out, "Optional output directory");
  fci->add_option("--seed", args.seed, "Recorded in the provenance block");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fci) {
      if (args.config.empty() && args.fixture.empty()) {
        std::cerr << "pqe fci: one of --config or --fixture is required\n";
        return 1;
      }
      return ex::cmd_fci(load(args), args.out, std::cout);
    }
    const ex::ExperimentConfig config = load(args);
    int status = 0;
    if (*run) status = ex::cmd_run(config, args.out);
    else if (*scan) status = ex::cmd_scan(config, args.out, args.threads);
    else status = ex::cmd_noise_study(config, args.out, args.threads);
    if (status == 2) std::cerr << "pqe: not all runs converged; see " << args.out << "\n";
    return status;
  } catch (const pqe::NumericalError& e) {
    std::cerr << "pqe: numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const ex::UserError& e) {
    std::cerr << "pqe: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "pqe: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "pqe: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "pqe: numerical failure: " << e.what() << "\n";
    return 2;
  }
}
