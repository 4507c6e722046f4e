// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pqe/molecular_problem.hpp"
#include "pqe/pqe_solver.hpp"
#include "pqe/spqe.hpp"
#include "pqe/vqe.hpp"

namespace pqe::experiment {

/// Bad config, missing file or any other condition the user can fix.
class UserError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Method { kPqe, kVqe, kSpqe, kAdaptVqe, kFci };

const char* method_name(Method m);

/// One experiment, parsed from a "key = value" document. See README.md for
/// the key list; `settings` keeps the effective value of every key (defaults
/// included) for the provenance block.
struct ExperimentConfig {
  Method method = Method::kPqe;
  std::filesystem::path fixture;
  std::vector<std::filesystem::path> scan_fixtures;  // empty: just `fixture`
  std::vector<double> scan_omegas;                   // empty: just spqe.omega

  PoolKind pool = PoolKind::kParticleHoleSD;
  int max_rank = 2;
  bool point_group = false;
  std::filesystem::path ansatz_file;  // overrides the pool when set

  PqeConfig pqe{};
  VqeConfig vqe{};
  SpqeConfig spqe{};
  AdaptConfig adapt{};
  FciOptions fci{};
  bool fci_cache = true;

  double noise_sigma = 0.0;
  int ensemble = 50;
  std::uint64_t seed = 0;

  std::map<std::string, std::string> settings;
};

/// Relative paths are resolved against `base_dir`. Throws UserError with the
/// offending line on unknown keys, duplicates, bad values, a missing method
/// or a fixture that does not exist.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Replaces the seed and every seed derived from it.
void set_seed(ExperimentConfig& config, std::uint64_t seed);

/// 64-bit FNV-1a of a file's bytes, as 16 lowercase hex digits.
std::string fnv1a_file(const std::filesystem::path& path);

/// Ground-state energy of the fixture's N/MS2 sector, or nullopt when the
/// sector is above the dense ceiling and iteration is off. With `use_cache`
/// the value is read from / written to "<fixture>.fci.json", keyed by the
/// fixture hash; an unwritable directory just skips the cache.
std::optional<double> fci_reference(const std::filesystem::path& fixture, const FciOptions& options,
                                    bool use_cache);

/// Artifacts of one run, already rendered.
struct RunArtifacts {
  bool converged = false;
  double energy = 0.0;
  std::optional<double> fci_energy;
  std::size_t num_parameters = 0;
  std::uint64_t evaluations = 0;  // residual or gradient elements
  std::uint64_t cnots = 0;
  std::string trace_schema;
  std::string trace_csv;
  std::string ansatz_text;  // empty for fci
  std::string summary_json;
};

/// Runs the configured method on `config.fixture`. `fci_energy` skips the
/// FCI lookup when the caller already has it.
RunArtifacts run_single(const ExperimentConfig& config,
                        std::optional<std::optional<double>> fci_energy = std::nullopt);

/// Writes `content` to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// Subcommands. Each writes its artifacts under `out` and returns the exit
// status: 0 success, 2 numerical failure (non-convergence included). User
// errors are thrown as UserError.

int cmd_run(const ExperimentConfig& config, const std::filesystem::path& out);

/// Every (fixture, omega) point is an independent run in out/point_NNN;
/// out/scan.csv aggregates them. A failing point is reported in its row and
/// makes the exit status 2; the other points still run.
int cmd_scan(const ExperimentConfig& config, const std::filesystem::path& out, int threads);

/// Ensemble of `config.ensemble` noisy pqe or vqe runs with seeds seed,
/// seed + 1, ...; out/noise.csv holds per-iteration mean and standard
/// deviation of the energy error and of the residual/gradient norm.
int cmd_noise_study(const ExperimentConfig& config, const std::filesystem::path& out, int threads);

/// Prints the FCI energy; writes out/summary.json when `out` is non-empty.
int cmd_fci(const ExperimentConfig& config, const std::filesystem::path& out, std::ostream& os);

}  // namespace pqe::experiment
