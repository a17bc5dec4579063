// Copyright 2026 The hamlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// hamlearn: run recovery experiments, recover Hamiltonians from measured
// constraint tables, list the available models.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hamlearn/config.hpp"
#include "hamlearn/errors.hpp"
#include "hamlearn/experiments.hpp"
#include "hamlearn/recovery.hpp"

#ifndef HAMLEARN_VERSION
#define HAMLEARN_VERSION "dev"
#endif

namespace fs = std::filesystem;
using hamlearn::ConfigError;
using hamlearn::NumericalError;
using hamlearn::ResourceError;
using hamlearn::UsageError;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kResource = 3,
  kNumerical = 4,
};

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

struct RunOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::optional<double> epsilon;
  std::optional<std::size_t> trials;
};

void write_atomically(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ResourceError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw ResourceError("failed writing " + tmp.string());
  }
  fs::rename(tmp, path);
}

int cmd_run(const RunOptions& opt) {
  std::ifstream in(opt.config_path);
  if (!in) throw UsageError("cannot open config " + opt.config_path);
  hamlearn::RunConfig run;
  try {
    run = hamlearn::parse_config(in);
  } catch (const ConfigError& e) {
    throw UsageError(opt.config_path + ":" + std::to_string(e.line()) +
                     std::string(e.what()).substr(std::string("line ").size() +
                                                  std::to_string(e.line()).size()));
  }
  if (opt.seed) run.seed = *opt.seed;
  if (opt.jobs) run.jobs = *opt.jobs;
  if (run.jobs < 1) throw UsageError("--jobs must be at least 1");
  for (auto& s : run.sweeps) {
    s.seed = run.seed;
    if (opt.epsilon) s.epsilon = *opt.epsilon;
    if (opt.trials) s.trials = *opt.trials;
    s.validate();
  }

  const fs::path out_dir(opt.out_dir);
  fs::create_directories(out_dir);
  nlohmann::ordered_json manifest;
  manifest["schema"] = 1;
  manifest["code_version"] = HAMLEARN_VERSION;
  manifest["config_path"] = fs::absolute(opt.config_path).string();
  manifest["output_directory"] = fs::absolute(out_dir).string();
  manifest["seed"] = run.seed;
  manifest["jobs"] = run.jobs;
  manifest["started_at"] = utc_now();
  manifest["sweeps"] = nlohmann::ordered_json::array();

  for (const auto& cfg : run.sweeps) {
    std::cerr << "hamlearn: sweep " << cfg.name << " (" << hamlearn::source_name(cfg.source)
              << ", " << cfg.trials << " trials)\n";
    const hamlearn::Sweep sweep = hamlearn::run_sweep(cfg, run.jobs);
    std::ostringstream csv;
    hamlearn::write_sweep_csv(csv, cfg, sweep, HAMLEARN_VERSION);
    const fs::path path = out_dir / (cfg.name + ".csv");
    write_atomically(path, csv.str());
    nlohmann::ordered_json entry;
    entry["name"] = cfg.name;
    entry["csv"] = path.filename().string();
    entry["records"] = sweep.size();
    entry["config"] = cfg.echo();
    manifest["sweeps"].push_back(entry);
  }
  manifest["finished_at"] = utc_now();
  write_atomically(out_dir / "manifest.json", manifest.dump(2) + "\n");
  std::cout << (out_dir / "manifest.json").string() << "\n";
  return kOk;
}

struct RecoverOptions {
  std::string k_path;
  std::string terms_path;
  double epsilon = 1e-12;
  std::string out_path;
  bool json = false;
};

int cmd_recover(const RecoverOptions& opt) {
  std::ifstream in(opt.k_path);
  if (!in) throw UsageError("cannot open " + opt.k_path);
  hamlearn::KTable table = hamlearn::read_k_table(in);
  std::vector<std::string> labels = table.labels;
  if (!opt.terms_path.empty()) {
    std::ifstream terms(opt.terms_path);
    if (!terms) throw UsageError("cannot open " + opt.terms_path);
    const auto listed = hamlearn::read_term_list(terms);
    if (!labels.empty() && labels != listed) {
      throw UsageError("term list does not match the matrix header");
    }
    labels = listed;
  }
  const auto cols = static_cast<std::size_t>(table.entries.cols());
  if (labels.empty()) {
    for (std::size_t i = 0; i < cols; ++i) labels.push_back("c" + std::to_string(i));
  }
  if (labels.size() != cols) {
    throw UsageError(std::to_string(labels.size()) + " term labels for " +
                     std::to_string(cols) + " matrix columns");
  }
  if (!(opt.epsilon >= 0.0)) throw UsageError("--epsilon must be non-negative");

  const hamlearn::RecoveryResult result = hamlearn::recover(table.entries);
  const hamlearn::ErrorEstimate est =
      cols >= 2 ? hamlearn::error_estimate(result.lambdas, opt.epsilon) : hamlearn::ErrorEstimate{};

  if (opt.json) {
    nlohmann::ordered_json report;
    report["schema"] = 1;
    report["rows"] = table.entries.rows();
    report["terms"] = labels;
    report["coeffs"] = std::vector<double>(result.coeffs.data(),
                                           result.coeffs.data() + result.coeffs.size());
    report["lambdas"] = std::vector<double>(result.lambdas.data(),
                                            result.lambdas.data() + result.lambdas.size());
    report["gap"] = result.gap;
    report["degenerate_kernel"] = result.degenerate_kernel;
    report["kernel_dimension"] = result.kernel_basis.cols();
    report["epsilon"] = opt.epsilon;
    report["delta_est"] = est.value;
    report["delta_est_degenerate_spectrum"] = est.degenerate_spectrum;
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << std::setprecision(10);
    std::cout << "rows " << table.entries.rows() << ", terms " << cols << "\n";
    std::cout << "gap " << result.gap << (result.degenerate_kernel ? " (degenerate kernel)" : "")
              << "\n";
    std::cout << "delta_est " << est.value << " at epsilon " << opt.epsilon
              << (est.degenerate_spectrum ? " (degenerate spectrum)" : "") << "\n";
    std::cout << "term,coeff,lambda\n";
    for (std::size_t i = 0; i < cols; ++i) {
      const auto j = static_cast<Eigen::Index>(i);
      std::cout << labels[i] << "," << result.coeffs(j) << "," << result.lambdas(j) << "\n";
    }
  }
  if (!opt.out_path.empty()) {
    std::ostringstream csv;
    std::map<std::string, std::string> meta{{"source", opt.k_path}};
    std::ostringstream eps;
    eps << std::setprecision(17) << opt.epsilon;
    meta["epsilon"] = eps.str();
    std::ostringstream de;
    de << std::setprecision(17) << est.value;
    meta["delta_est"] = de.str();
    hamlearn::write_csv(csv, result, labels, meta);
    write_atomically(opt.out_path, csv.str());
  }
  if (result.degenerate_kernel) {
    std::cerr << "hamlearn: warning: the kernel is degenerate; the coefficients are one "
                 "vector of a larger solution space\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_list_models(bool json) {
  const std::vector<std::size_t> localities{1, 2, 3, 4};
  if (json) {
    nlohmann::ordered_json out;
    out["models"] = nlohmann::ordered_json::array();
    for (auto m : hamlearn::all_models()) out["models"].push_back(hamlearn::model_name(m));
    out["constraint_localities"] = localities;
    out["sources"] = nlohmann::ordered_json::array();
    for (auto s : hamlearn::all_sources()) out["sources"].push_back(hamlearn::source_name(s));
    std::cout << out.dump(2) << "\n";
    return kOk;
  }
  std::cout << "models:\n";
  for (auto m : hamlearn::all_models()) std::cout << "  " << hamlearn::model_name(m) << "\n";
  std::cout << "constraint localities: 1 2 3 4 (any k >= 1 is accepted)\n";
  std::cout << "sources:\n";
  for (auto s : hamlearn::all_sources()) std::cout << "  " << hamlearn::source_name(s) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recover local Hamiltonians from local expectation values."};
  app.set_version_flag("--version", std::string(HAMLEARN_VERSION));
  app.require_subcommand(1);

  RunOptions run_opt;
  auto* run = app.add_subcommand("run", "Run the sweeps of a config file.");
  run->add_option("--config", run_opt.config_path, "Config file")->required();
  run->add_option("--out", run_opt.out_dir, "Output directory")->required();
  run->add_option("--seed", run_opt.seed, "Override the global seed");
  run->add_option("--jobs", run_opt.jobs, "Concurrent trials");
  run->add_option("--epsilon", run_opt.epsilon, "Override the noise level of every sweep");
  run->add_option("--trials", run_opt.trials, "Override the trial count of every sweep");

  RecoverOptions rec_opt;
  auto* rec = app.add_subcommand("recover", "Recover a Hamiltonian from a constraint-matrix CSV.");
  rec->add_option("k_matrix", rec_opt.k_path, "CSV with a header row of term labels")->required();
  rec->add_option("terms", rec_opt.terms_path, "Optional one-column term list");
  rec->add_option("--epsilon", rec_opt.epsilon, "Noise level for the error estimate");
  rec->add_option("--out", rec_opt.out_path, "Write the recovery as CSV");
  rec->add_flag("--json", rec_opt.json, "Machine-readable report");

  bool list_json = false;
  auto* list = app.add_subcommand("list-models", "List model families and sources.");
  list->add_flag("--json", list_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) return cmd_run(run_opt);
    if (*rec) return cmd_recover(rec_opt);
    if (*list) return cmd_list_models(list_json);
  } catch (const ResourceError& e) {
    std::cerr << "hamlearn: resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const UsageError& e) {
    std::cerr << "hamlearn: error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "hamlearn: numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "hamlearn: error: " << e.what() << "\n";
    return kResource;
  }
  return kUsage;
}
