// SPDX-License-Identifier: Apache-2.0
#include "pqe/experiment.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pqe/error.hpp"
#include "pqe/kernels.hpp"

namespace pqe::experiment {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x)) {
    throw std::invalid_argument("expected a number, got '" + v + "'");
  }
  return x;
}

template <class Int>
Int to_int(const std::string& v) {
  Int x{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw std::invalid_argument("expected an integer, got '" + v + "'");
  }
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw std::invalid_argument("expected true/false, got '" + v + "'");
}

double positive(double x, const char* what) {
  if (!(x > 0.0)) throw std::invalid_argument(std::string(what) + " must be positive");
  return x;
}

fs::path resolve(const fs::path& base, const std::string& v) {
  fs::path p(v);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

fs::path existing_file(const fs::path& base, const std::string& v) {
  fs::path p = resolve(base, v);
  if (!fs::is_regular_file(p)) throw std::invalid_argument("no such file '" + p.string() + "'");
  return p;
}

struct Key {
  const char* name;
  const char* fallback;
  std::function<void(ExperimentConfig&, const std::string&, const fs::path&)> apply;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"method", "",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         if (v == "pqe") c.method = Method::kPqe;
         else if (v == "vqe") c.method = Method::kVqe;
         else if (v == "spqe") c.method = Method::kSpqe;
         else if (v == "adapt-vqe") c.method = Method::kAdaptVqe;
         else if (v == "fci") c.method = Method::kFci;
         else throw std::invalid_argument("unknown method '" + v + "'");
       }},
      {"fixture", "",
       [](ExperimentConfig& c, const std::string& v, const fs::path& b) {
         c.fixture = v.empty() ? fs::path() : existing_file(b, v);
       }},
      {"seed", "0", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.seed = to_int<std::uint64_t>(v); }},
      {"ansatz.pool", "sd",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         if (v == "sd") c.pool = PoolKind::kParticleHoleSD;
         else if (v == "full") c.pool = PoolKind::kParticleHoleFull;
         else if (v == "gsd") c.pool = PoolKind::kGeneralizedSD;
         else throw std::invalid_argument("unknown pool '" + v + "' (sd, full, gsd)");
       }},
      {"ansatz.max_rank", "2",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         c.max_rank = to_int<int>(v);
         if (c.max_rank < 1) throw std::invalid_argument("ansatz.max_rank must be >= 1");
       }},
      {"ansatz.point_group", "false", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.point_group = to_bool(v); }},
      {"ansatz.file", "",
       [](ExperimentConfig& c, const std::string& v, const fs::path& b) {
         c.ansatz_file = v.empty() ? fs::path() : existing_file(b, v);
       }},
      {"pqe.omega_r", "1e-5", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.pqe.omega_r = positive(to_double(v), "pqe.omega_r"); }},
      {"pqe.max_iterations", "100",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         c.pqe.max_micro = to_int<int>(v);
         if (c.pqe.max_micro < 1) throw std::invalid_argument("pqe.max_iterations must be >= 1");
       }},
      {"pqe.diis", "true", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.pqe.use_diis = to_bool(v); }},
      {"pqe.diis_depth", "8",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         c.pqe.diis_depth = to_int<int>(v);
         if (c.pqe.diis_depth < 2) throw std::invalid_argument("pqe.diis_depth must be >= 2");
       }},
      {"pqe.diis_start", "2",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         c.pqe.diis_start = to_int<int>(v);
         if (c.pqe.diis_start < 2) throw std::invalid_argument("pqe.diis_start must be >= 2");
       }},
      {"pqe.diis_error", "residual",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         if (v == "residual") c.pqe.diis_error = DiisError::kResidual;
         else if (v == "step") c.pqe.diis_error = DiisError::kStep;
         else throw std::invalid_argument("pqe.diis_error is residual or step");
       }},
      {"pqe.residual_mode", "projective",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         if (v == "projective") c.pqe.mode = ResidualMode::kProjective;
         else if (v == "expectation") c.pqe.mode = ResidualMode::kExpectation;
         else throw std::invalid_argument("pqe.residual_mode is projective or expectation");
       }},
      {"vqe.omega_g", "1e-5", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.vqe.omega_g = positive(to_double(v), "vqe.omega_g"); }},
      {"vqe.max_iterations", "500",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         c.vqe.max_bfgs_iters = to_int<int>(v);
         if (c.vqe.max_bfgs_iters < 1) throw std::invalid_argument("vqe.max_iterations must be >= 1");
       }},
      {"spqe.omega", "0.1", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.spqe.omega = positive(to_double(v), "spqe.omega"); }},
      {"spqe.dt", "0.05", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.spqe.dt = positive(to_double(v), "spqe.dt"); }},
      {"spqe.trotter_steps", "1",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         c.spqe.trotter_steps = to_int<int>(v);
         if (c.spqe.trotter_steps < 1) throw std::invalid_argument("spqe.trotter_steps must be >= 1");
       }},
      {"spqe.selection", "exact",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         if (v == "exact") c.spqe.selection = SelectionMode::kExact;
         else if (v == "sampled") c.spqe.selection = SelectionMode::kSampled;
         else if (v == "fixed-shots") c.spqe.selection = SelectionMode::kFixedShots;
         else throw std::invalid_argument("spqe.selection is exact, sampled or fixed-shots");
       }},
      {"spqe.ordering", "renormalize",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         if (v == "renormalize") c.spqe.ordering = SpqeOrdering::kRenormalize;
         else if (v == "append") c.spqe.ordering = SpqeOrdering::kAppend;
         else throw std::invalid_argument("spqe.ordering is renormalize or append");
       }},
      {"spqe.shots", "100000",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         c.spqe.shots = to_int<std::uint64_t>(v);
         if (c.spqe.shots == 0) throw std::invalid_argument("spqe.shots must be >= 1");
       }},
      {"spqe.max_rank", "0", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.spqe.max_rank = to_int<int>(v); }},
      {"spqe.max_macro", "100",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         c.spqe.max_macro = to_int<int>(v);
         if (c.spqe.max_macro < 1) throw std::invalid_argument("spqe.max_macro must be >= 1");
       }},
      {"adapt.epsilon", "1e-3", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.adapt.epsilon = positive(to_double(v), "adapt.epsilon"); }},
      {"adapt.max_parameters", "0", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.adapt.max_parameters = to_int<std::size_t>(v); }},
      {"adapt.max_macro", "200",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         c.adapt.max_macro = to_int<int>(v);
         if (c.adapt.max_macro < 1) throw std::invalid_argument("adapt.max_macro must be >= 1");
       }},
      {"noise.sigma", "0",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         c.noise_sigma = to_double(v);
         if (c.noise_sigma < 0.0) throw std::invalid_argument("noise.sigma must be >= 0");
       }},
      {"noise.ensemble", "50", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.ensemble = to_int<int>(v); }},
      {"scan.fixtures", "",
       [](ExperimentConfig& c, const std::string& v, const fs::path& b) {
         c.scan_fixtures.clear();
         for (const auto& f : split_list(v)) c.scan_fixtures.push_back(existing_file(b, f));
       }},
      {"scan.omegas", "",
       [](ExperimentConfig& c, const std::string& v, const fs::path&) {
         c.scan_omegas.clear();
         for (const auto& f : split_list(v)) c.scan_omegas.push_back(positive(to_double(f), "scan.omegas entry"));
       }},
      {"fci.dense_ceiling", "5000", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.fci.dense_ceiling = to_int<std::size_t>(v); }},
      {"fci.iterative", "false", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.fci.iterative = to_bool(v); }},
      {"fci.cache", "true", [](ExperimentConfig& c, const std::string& v, const fs::path&) { c.fci_cache = to_bool(v); }},
  };
  return table;
}

// Copies the shared settings into the per-solver configs.
void propagate(ExperimentConfig& c) {
  c.pqe.noise_sigma = c.noise_sigma;
  c.pqe.rng_seed = c.seed;
  c.vqe.noise_sigma = c.noise_sigma;
  c.vqe.rng_seed = c.seed;
  c.spqe.micro = c.pqe;
  c.spqe.rng_seed = c.seed;
  c.adapt.pool = c.pool;
  c.adapt.max_rank = c.max_rank;
  c.adapt.micro = c.vqe;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}
std::string fix(double v) { return fmt("%.12f", v); }
std::string sci(double v) { return fmt("%.6e", v); }
std::string err_or_blank(double e, const std::optional<double>& fci) {
  return fci ? sci(e - *fci) : std::string();
}

json provenance(const ExperimentConfig& c, const std::string& fixture_hash) {
  json p;
  p["program"] = "pqe";
  p["version"] = kVersion;
  p["kernels"] = kernels::active().name;
  p["seed"] = c.seed;
  p["fixture"] = c.fixture.filename().string();
  p["fixture_fnv1a"] = fixture_hash;
  json t;
  t["pqe.omega_r"] = c.pqe.omega_r;
  t["vqe.omega_g"] = c.vqe.omega_g;
  t["spqe.omega"] = c.spqe.omega;
  t["adapt.epsilon"] = c.adapt.epsilon;
  t["noise.sigma"] = c.noise_sigma;
  p["thresholds"] = t;
  json s = json::object();
  for (const auto& [k, v] : c.settings) s[k] = v;
  p["settings"] = s;
  return p;
}

DuccAnsatz fixed_ansatz(const ExperimentConfig& c, const MolecularProblem& problem) {
  const Determinant ref = reference_determinant(problem);
  if (!c.ansatz_file.empty()) {
    std::ifstream in(c.ansatz_file);
    if (!in) throw UserError("cannot open ansatz file " + c.ansatz_file.string());
    DuccAnsatz a = load_ansatz(in);
    if (a.num_qubits() != problem.num_spin_orbitals() || a.reference() != ref) {
      throw UserError("ansatz file does not match the fixture's register or reference");
    }
    return a;
  }
  DuccAnsatz a(problem.num_spin_orbitals(), ref);
  PoolOptions opts;
  opts.point_group = c.point_group;
  for (const auto& e : enumerate_pool(problem, c.max_rank, c.pool, opts)) a.add_operator(e);
  return a;
}

std::string ansatz_text(const DuccAnsatz& a) {
  std::ostringstream os;
  save_ansatz(os, a);
  return os.str();
}

json summary_head(const ExperimentConfig& c, double e_hf, const std::optional<double>& fci) {
  json s;
  s["schema"] = "pqe-summary/1";
  s["method"] = method_name(c.method);
  s["fixture"] = c.fixture.filename().string();
  s["hf_energy"] = e_hf;
  s["fci_energy"] = fci ? json(*fci) : json(nullptr);
  return s;
}

void finish_summary(json& s, const RunArtifacts& a) {
  s["converged"] = a.converged;
  s["energy"] = a.energy;
  s["delta_e"] = a.fci_energy ? json(a.energy - *a.fci_energy) : json(nullptr);
  s["num_parameters"] = a.num_parameters;
  s["cnots"] = a.cnots;
  if (!a.trace_schema.empty()) {
    s["trace_file"] = "trace.csv";
    s["trace_schema"] = a.trace_schema;
  }
}

// One noisy member: energy errors and norms per iteration.
struct Series {
  std::vector<double> error;
  std::vector<double> norm;
  bool converged = false;
  double final_energy = 0.0;
  std::string failure;
};

template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) f(i);
    });
  }
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::kPqe: return "pqe";
    case Method::kVqe: return "vqe";
    case Method::kSpqe: return "spqe";
    case Method::kAdaptVqe: return "adapt-vqe";
    case Method::kFci: return "fci";
  }
  return "?";
}

ExperimentConfig parse_config(std::istream& in, const fs::path& base_dir) {
  ExperimentConfig c;
  std::map<std::string, std::string> given;
  std::map<std::string, int> given_line;
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw UserError("config line " + std::to_string(no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    const auto& table = keys();
    if (std::none_of(table.begin(), table.end(), [&](const Key& k) { return key == k.name; })) {
      throw UserError("config line " + std::to_string(no) + ": unknown key '" + key + "'");
    }
    if (!given.emplace(key, value).second) {
      throw UserError("config line " + std::to_string(no) + ": duplicate key '" + key + "'");
    }
    given_line[key] = no;
  }

  for (const Key& k : keys()) {
    const auto it = given.find(k.name);
    const std::string& v = it != given.end() ? it->second : std::string(k.fallback);
    try {
      if (!v.empty() || it != given.end()) k.apply(c, v, base_dir);
    } catch (const std::invalid_argument& e) {
      const std::string where =
          it != given.end() ? "config line " + std::to_string(given_line[k.name]) : std::string("config");
      throw UserError(where + ": " + k.name + ": " + e.what());
    }
    c.settings[k.name] = v;
  }
  if (!given.count("method")) throw UserError("config: 'method' is required");
  if (c.fixture.empty() && c.scan_fixtures.empty()) {
    throw UserError("config: 'fixture' (or scan.fixtures) is required");
  }
  if (c.fixture.empty()) c.fixture = c.scan_fixtures.front();
  propagate(c);
  return c;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot open config " + path.string());
  return parse_config(in, path.parent_path());
}

void set_seed(ExperimentConfig& config, std::uint64_t seed) {
  config.seed = seed;
  config.settings["seed"] = std::to_string(seed);
  propagate(config);
}

std::string fnv1a_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UserError("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw UserError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw UserError("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::optional<double> fci_reference(const fs::path& fixture, const FciOptions& options, bool use_cache) {
  const std::string hash = fnv1a_file(fixture);
  fs::path cache = fixture;
  cache += ".fci.json";
  if (use_cache && fs::exists(cache)) {
    try {
      std::ifstream in(cache);
      const json j = json::parse(in);
      if (j.at("schema") == "pqe-fci-cache/1" && j.at("fixture_fnv1a") == hash) {
        return j.at("energy").get<double>();
      }
    } catch (const std::exception&) {
      // stale or corrupt cache: recompute
    }
  }
  const MolecularProblem problem = load_fcidump(fixture);
  if (sector_determinants(problem).size() > options.dense_ceiling && !options.iterative) return std::nullopt;
  const double e = fci_solve(problem, 1, options).energies.at(0);
  if (use_cache) {
    json j;
    j["schema"] = "pqe-fci-cache/1";
    j["fixture_fnv1a"] = hash;
    j["energy"] = e;
    try {
      write_atomic(cache, j.dump(2) + "\n");
    } catch (const std::exception&) {
      // read-only fixture directory
    }
  }
  return e;
}

RunArtifacts run_single(const ExperimentConfig& c, std::optional<std::optional<double>> fci_energy) {
  const std::string hash = fnv1a_file(c.fixture);
  const MolecularProblem problem = load_fcidump(c.fixture);
  RunArtifacts a;
  a.fci_energy = fci_energy ? *fci_energy : fci_reference(c.fixture, c.fci, c.fci_cache);

  if (c.method == Method::kFci) {
    if (!a.fci_energy) throw UserError("FCI sector exceeds fci.dense_ceiling; set fci.iterative = true");
    a.converged = true;
    a.energy = *a.fci_energy;
    json s = summary_head(c, determinant_energy(problem, reference_determinant(problem)), a.fci_energy);
    finish_summary(s, a);
    s["provenance"] = provenance(c, hash);
    a.summary_json = s.dump(2) + "\n";
    return a;
  }

  const QubitOperator h = jordan_wigner_hamiltonian(problem);
  const double e_hf = determinant_energy(problem, reference_determinant(problem));
  json s = summary_head(c, e_hf, a.fci_energy);
  std::ostringstream csv;

  switch (c.method) {
    case Method::kPqe: {
      DuccAnsatz ansatz = fixed_ansatz(c, problem);
      const PqeResult r = run_pqe(problem, h, ansatz, c.pqe);
      a.trace_schema = "pqe-trace/1";
      csv << "# " << a.trace_schema << "\n"
          << "iteration,energy,delta_e,energy_error,residual_vector_evaluations,residual_norm\n";
      for (const auto& row : r.trace) {
        csv << row.iteration << ',' << fix(row.energy) << ',' << sci(row.delta_e) << ','
            << err_or_blank(row.energy, a.fci_energy) << ',' << row.residual_evaluations << ','
            << sci(row.residual_norm) << '\n';
      }
      a.converged = r.converged;
      a.energy = r.energy;
      a.num_parameters = ansatz.size();
      a.evaluations = static_cast<std::uint64_t>(r.residual_evaluations) * ansatz.size();
      a.cnots = estimate_cnots(ansatz);
      a.ansatz_text = ansatz_text(ansatz);
      s["residual_norm"] = r.residual_norm;
      s["residual_vector_evaluations"] = r.residual_evaluations;
      s["residual_element_evaluations"] = a.evaluations;
      break;
    }
    case Method::kVqe: {
      DuccAnsatz ansatz = fixed_ansatz(c, problem);
      const VqeResult r = run_vqe(h, ansatz, c.vqe);
      a.trace_schema = "vqe-trace/1";
      csv << "# " << a.trace_schema << "\n"
          << "iteration,energy,delta_e,energy_error,gradient_vector_evaluations,gradient_norm\n";
      for (const auto& row : r.trace) {
        csv << row.iteration << ',' << fix(row.value) << ',' << sci(row.delta) << ','
            << err_or_blank(row.value, a.fci_energy) << ',' << row.evaluations << ','
            << sci(row.gradient_norm) << '\n';
      }
      a.converged = r.converged;
      a.energy = r.energy;
      a.num_parameters = ansatz.size();
      a.evaluations = static_cast<std::uint64_t>(r.gradient_evaluations) * ansatz.size();
      a.cnots = estimate_cnots(ansatz);
      a.ansatz_text = ansatz_text(ansatz);
      s["gradient_norm"] = r.gradient_norm;
      s["line_search_failed"] = r.line_search_failed;
      s["gradient_vector_evaluations"] = r.gradient_evaluations;
      s["gradient_element_evaluations"] = a.evaluations;
      break;
    }
    case Method::kSpqe: {
      const SpqeResult r = run_spqe(problem, h, c.spqe);
      a.trace_schema = "spqe-trace/1";
      csv << "# " << a.trace_schema << "\n"
          << "macro_iteration,num_added,num_parameters,num_high_rank,energy,energy_error,residual_norm,"
             "micro_iterations,micro_converged,residual_vector_evaluations,residual_element_evaluations,cnots\n";
      for (const auto& row : r.trace) {
        csv << row.macro_iteration << ',' << row.num_added << ',' << row.num_parameters << ','
            << row.num_high_rank << ',' << fix(row.energy) << ',' << err_or_blank(row.energy, a.fci_energy)
            << ',' << sci(row.residual_norm) << ',' << row.micro_iterations << ','
            << (row.micro_converged ? 1 : 0) << ',' << row.residual_vector_evaluations << ','
            << row.residual_element_evaluations << ',' << row.cnots << '\n';
      }
      a.converged = r.converged;
      a.energy = r.energy;
      a.num_parameters = r.ansatz.size();
      a.evaluations = r.trace.empty() ? 0 : r.trace.back().residual_element_evaluations;
      a.cnots = estimate_cnots(r.ansatz);
      a.ansatz_text = ansatz_text(r.ansatz);
      s["macro_iterations"] = r.trace.size();
      s["num_high_rank"] = count_high_rank(r.ansatz);
      s["residual_vector_evaluations"] = r.trace.empty() ? 0 : r.trace.back().residual_vector_evaluations;
      s["residual_element_evaluations"] = a.evaluations;
      s["all_shots_reference"] = r.all_shots_reference;
      if (c.spqe.selection == SelectionMode::kFixedShots) {
        s["shots_per_macro_iteration"] = fixed_shot_count(c.spqe.omega, c.spqe.dt);
      }
      break;
    }
    case Method::kAdaptVqe: {
      const AdaptResult r = run_adapt_vqe(problem, h, c.adapt);
      a.trace_schema = "adapt-trace/1";
      csv << "# " << a.trace_schema << "\n"
          << "macro_iteration,added,selected_gradient,pool_gradient_norm,num_parameters,energy,energy_error,"
             "bfgs_gradient_vectors,gradient_element_evaluations,cnots\n";
      for (const auto& row : r.trace) {
        csv << row.macro_iteration << ',' << row.added.str() << ',' << sci(row.selected_gradient) << ','
            << sci(row.pool_gradient_norm) << ',' << row.num_parameters << ',' << fix(row.energy) << ','
            << err_or_blank(row.energy, a.fci_energy) << ',' << row.bfgs_gradient_vectors << ','
            << row.gradient_element_evaluations << ',' << row.cnots << '\n';
      }
      a.converged = r.converged || r.budget_reached || r.stagnated;
      a.energy = r.energy;
      a.num_parameters = r.ansatz.size();
      a.evaluations = r.trace.empty() ? 0 : r.trace.back().gradient_element_evaluations;
      a.cnots = estimate_cnots(r.ansatz);
      a.ansatz_text = ansatz_text(r.ansatz);
      s["pool_gradient_norm"] = r.pool_gradient_norm;
      s["budget_reached"] = r.budget_reached;
      s["stagnated"] = r.stagnated;
      s["gradient_element_evaluations"] = a.evaluations;
      break;
    }
    case Method::kFci:
      break;
  }
  a.trace_csv = csv.str();
  finish_summary(s, a);
  s["provenance"] = provenance(c, hash);
  a.summary_json = s.dump(2) + "\n";
  return a;
}

namespace {

void write_run(const fs::path& dir, const RunArtifacts& a) {
  fs::create_directories(dir);
  if (!a.trace_csv.empty()) write_atomic(dir / "trace.csv", a.trace_csv);
  if (!a.ansatz_text.empty()) write_atomic(dir / "ansatz.txt", a.ansatz_text);
  write_atomic(dir / "summary.json", a.summary_json);
}

}  // namespace

int cmd_run(const ExperimentConfig& config, const fs::path& out) {
  const RunArtifacts a = run_single(config);
  write_run(out, a);
  return a.converged ? 0 : 2;
}

int cmd_scan(const ExperimentConfig& config, const fs::path& out, int threads) {
  struct Point {
    ExperimentConfig config;
    std::optional<double> fci;
    std::optional<RunArtifacts> result;
    std::string status = "ok";
    std::string message;
  };
  const std::vector<fs::path> fixtures =
      config.scan_fixtures.empty() ? std::vector<fs::path>{config.fixture} : config.scan_fixtures;
  const std::vector<double> omegas =
      config.scan_omegas.empty() ? std::vector<double>{config.spqe.omega} : config.scan_omegas;

  // FCI once per fixture, before any worker starts, so cache writes never race.
  std::map<fs::path, std::optional<double>> fci;
  for (const auto& f : fixtures) fci.emplace(f, fci_reference(f, config.fci, config.fci_cache));

  std::vector<Point> points;
  for (const auto& f : fixtures) {
    for (double w : omegas) {
      Point p;
      p.config = config;
      p.fci = fci[f];
      p.config.fixture = f;
      p.config.settings["fixture"] = f.generic_string();
      p.config.spqe.omega = w;
      p.config.settings["spqe.omega"] = fmt("%.17g", w);
      points.push_back(std::move(p));
    }
  }

  parallel_for(points.size(), threads, [&](std::size_t i) {
    Point& p = points[i];
    try {
      p.result = run_single(p.config, p.fci);
      if (!p.result->converged) p.status = "not_converged";
    } catch (const NumericalError& e) {
      p.status = "numerical_failure";
      p.message = e.what();
    } catch (const std::exception& e) {
      p.status = "error";
      p.message = e.what();
    }
  });

  fs::create_directories(out);
  std::ostringstream csv;
  csv << "# scan/1\n"
      << "point,fixture,omega,status,energy,fci_energy,delta_e,num_parameters,evaluations,cnots,message\n";
  json s;
  s["schema"] = "pqe-scan-summary/1";
  s["method"] = method_name(config.method);
  s["scan_file"] = "scan.csv";
  json rows = json::array();
  int status = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& p = points[i];
    char name[32];
    std::snprintf(name, sizeof name, "point_%03zu", i);
    std::string msg = p.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    csv << i << ',' << p.config.fixture.filename().string() << ',' << fmt("%.6g", p.config.spqe.omega) << ','
        << p.status << ',';
    json row;
    row["point"] = i;
    row["directory"] = name;
    row["fixture"] = p.config.fixture.filename().string();
    row["fixture_fnv1a"] = fnv1a_file(p.config.fixture);
    row["status"] = p.status;
    if (p.result) {
      const RunArtifacts& a = *p.result;
      write_run(out / name, a);
      csv << fix(a.energy) << ',' << (a.fci_energy ? fix(*a.fci_energy) : "") << ','
          << err_or_blank(a.energy, a.fci_energy) << ',' << a.num_parameters << ',' << a.evaluations << ','
          << a.cnots << ',';
      row["energy"] = a.energy;
    } else {
      csv << ",,,,,,";
      row["message"] = p.message;
    }
    csv << msg << '\n';
    if (p.status != "ok") status = 2;
    rows.push_back(row);
  }
  s["points"] = rows;
  s["provenance"] = provenance(config, fnv1a_file(config.fixture));
  write_atomic(out / "scan.csv", csv.str());
  write_atomic(out / "summary.json", s.dump(2) + "\n");
  return status;
}

int cmd_noise_study(const ExperimentConfig& config, const fs::path& out, int threads) {
  if (config.method != Method::kPqe && config.method != Method::kVqe) {
    throw UserError("noise-study supports method = pqe or vqe");
  }
  if (config.ensemble < 2) throw UserError("noise.ensemble must be >= 2");

  const std::string hash = fnv1a_file(config.fixture);
  const MolecularProblem problem = load_fcidump(config.fixture);
  const QubitOperator h = jordan_wigner_hamiltonian(problem);
  const DuccAnsatz start = fixed_ansatz(config, problem);
  const std::optional<double> fci = fci_reference(config.fixture, config.fci, config.fci_cache);
  if (!fci) throw UserError("noise-study needs the FCI energy; set fci.iterative = true");

  const std::size_t n = static_cast<std::size_t>(config.ensemble);
  std::vector<Series> members(n);
  parallel_for(n, threads, [&](std::size_t k) {
    Series& m = members[k];
    DuccAnsatz ansatz = start;
    const std::uint64_t seed = config.seed + k;
    try {
      if (config.method == Method::kPqe) {
        PqeConfig pc = config.pqe;
        pc.rng_seed = seed;
        const PqeResult r = run_pqe(problem, h, ansatz, pc);
        for (const auto& row : r.trace) {
          m.error.push_back(row.energy - *fci);
          m.norm.push_back(row.residual_norm);
        }
        m.converged = r.converged;
        m.final_energy = r.energy;
      } else {
        VqeConfig vc = config.vqe;
        vc.rng_seed = seed;
        const VqeResult r = run_vqe(h, ansatz, vc);
        for (const auto& row : r.trace) {
          m.error.push_back(row.value - *fci);
          m.norm.push_back(row.gradient_norm);
        }
        m.converged = r.converged;
        m.final_energy = r.energy;
      }
    } catch (const std::exception& e) {
      m.failure = e.what();
    }
  });
  for (std::size_t k = 0; k < n; ++k) {
    if (!members[k].failure.empty()) {
      throw NumericalError("noise-study member " + std::to_string(k) + ": " + members[k].failure);
    }
  }

  std::size_t rows = 0;
  for (const auto& m : members) rows = std::max(rows, m.error.size());

  // Members that stopped early contribute their final values to later rows.
  auto at = [](const std::vector<double>& v, std::size_t i) { return v.empty() ? 0.0 : v[std::min(i, v.size() - 1)]; };
  auto stats = [&](const std::vector<double>& x) {
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); })) return std::pair{x.front(), 0.0};
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    return std::pair{mean, std::sqrt(var / static_cast<double>(x.size() - 1))};
  };

  std::ostringstream csv;
  csv << "# noise-study/1\n"
      << "iteration,members_running,energy_error_mean,energy_error_std,norm_mean,norm_std\n";
  std::vector<double> e(n), g(n);
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t running = 0;
    for (std::size_t k = 0; k < n; ++k) {
      running += i < members[k].error.size();
      e[k] = at(members[k].error, i);
      g[k] = at(members[k].norm, i);
    }
    const auto [em, es] = stats(e);
    const auto [gm, gs] = stats(g);
    csv << i + 1 << ',' << running << ',' << sci(em) << ',' << sci(es) << ',' << sci(gm) << ',' << sci(gs) << '\n';
  }

  std::vector<double> finals(n);
  std::size_t converged = 0;
  json list = json::array();
  for (std::size_t k = 0; k < n; ++k) {
    finals[k] = members[k].final_energy - *fci;
    converged += members[k].converged;
    json m;
    m["seed"] = config.seed + k;
    m["iterations"] = members[k].error.size();
    m["converged"] = members[k].converged;
    m["final_energy"] = members[k].final_energy;
    list.push_back(m);
  }
  const auto [fm, fsd] = stats(finals);

  json s;
  s["schema"] = "pqe-noise-summary/1";
  s["method"] = method_name(config.method);
  s["fixture"] = config.fixture.filename().string();
  s["fci_energy"] = *fci;
  s["noise_sigma"] = config.noise_sigma;
  s["ensemble"] = n;
  s["members_converged"] = converged;
  s["final_energy_error_mean"] = fm;
  s["final_energy_error_std"] = fsd;
  s["num_parameters"] = start.size();
  s["noise_file"] = "noise.csv";
  s["noise_schema"] = "noise-study/1";
  s["members"] = list;
  s["provenance"] = provenance(config, hash);

  fs::create_directories(out);
  write_atomic(out / "noise.csv", csv.str());
  write_atomic(out / "summary.json", s.dump(2) + "\n");
  return 0;
}

int cmd_fci(const ExperimentConfig& config, const fs::path& out, std::ostream& os) {
  ExperimentConfig c = config;
  c.method = Method::kFci;
  c.settings["method"] = "fci";
  const RunArtifacts a = run_single(c);
  os << fix(a.energy) << '\n';
  if (!out.empty()) write_run(out, a);
  return 0;
}

}  // namespace pqe::experiment
