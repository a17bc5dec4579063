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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamlearn/lattice.hpp"
#include "hamlearn/quantum_state.hpp"
#include "hamlearn/recovery.hpp"

namespace hamlearn {

enum class SourceKind {
  kGround,
  kGibbs,
  kMultistate,
  kQuench,
  kDriven,
  kXYGapScan,
};

std::string source_name(SourceKind kind);
SourceKind parse_source(const std::string& name);
std::vector<SourceKind> all_sources();

/// One sweep. Defaults follow the published protocol scaled to a desk.
struct ExperimentConfig {
  std::string name = "sweep";
  SourceKind source = SourceKind::kGround;
  ModelFamily model = ModelFamily::kGeneric2LocalChain;
  std::size_t n_sites = 12;
  /// |L|; L is placed in the middle of the chain.
  std::size_t region_size = 8;
  /// Constraint operators are k-local on the interior of L.
  std::size_t locality = 4;
  std::uint64_t seed = 1;
  std::size_t trials = 50;
  double epsilon = 1e-12;

  /// Ground-state sweeps record every `prefix_stride`-th constraint count
  /// (the count N = M - 1 and the last one are always included).
  std::size_t prefix_stride = 1;

  /// Gibbs sweep inverse temperatures.
  std::vector<double> betas = {0.01, 0.0316227766016838, 0.1,
                               0.316227766016838, 1.0};

  /// Multi-state recovery: k states use k log-spaced temperatures in
  /// [temperature_min, temperature_max], k = 1..max_states.
  double temperature_min = 1.0;
  double temperature_max = 100.0;
  std::size_t max_states = 8;

  /// Dynamics: grid spacing, horizon, and log-spaced recovery times in
  /// [t_min, t_max] snapped to the grid.
  double dt = 0.05;
  double t_min = 1.0;
  double t_max = 100.0;
  std::size_t checkpoints = 16;
  TimeAverage time_average = TimeAverage::kTrapezoid;

  double drive_amplitude = 0.5;
  double drive_omega = 0.05;

  /// XY scan subsystem sizes.
  std::vector<std::size_t> region_sizes = {5, 7, 9, 11};

  SimulationLimits limits;

  /// Throws UsageError or ResourceError.
  void validate() const;
  /// key=value echo used in CSV headers and manifests.
  std::map<std::string, std::string> echo() const;
};

/// Trial counts default to 50 for static sources and 20 for dynamics.
ExperimentConfig default_config(SourceKind source);

/// One recovery inside a sweep.
struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  /// Sweep coordinate: N, beta, number of states, t, or |L|.
  double coordinate = 0.0;
  std::size_t n_constraints = 0;
  std::size_t n_columns = 0;
  /// Spectrum of the noisy K the recovery used.
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  bool degenerate = false;
  double delta = 0.0;
  /// Same quantities for the noiseless K.
  double lambda0_exact = 0.0;
  double lambda1_exact = 0.0;
  bool degenerate_exact = false;
  double delta_exact = 0.0;
  /// Error estimate from the noiseless spectrum.
  double delta_est = 0.0;
  /// Errors of the two halves for driven recoveries; NaN otherwise, and
  /// NaN for a half whose true coefficients vanish.
  double delta_static = std::numeric_limits<double>::quiet_NaN();
  double delta_drive = std::numeric_limits<double>::quiet_NaN();
  /// ||K c_true|| of the noiseless K with unit c_true.
  double residual = 0.0;
  /// <H> of the source state for static sources; <H0> at time t for
  /// dynamics.
  double energy = 0.0;
};

/// Deterministic child seed for (stream, index) under a root seed.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream,
                          std::uint64_t index);

/// Runs body(0..count-1) on up to `jobs` threads; the first exception is
/// rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body);

using Sweep = std::vector<TrialRecord>;

Sweep run_groundstate_sweep(const ExperimentConfig& cfg, std::size_t jobs = 1);
Sweep run_gibbs_sweep(const ExperimentConfig& cfg, std::size_t jobs = 1);
Sweep run_multistate_recovery(const ExperimentConfig& cfg, std::size_t jobs = 1);
Sweep run_quench(const ExperimentConfig& cfg, std::size_t jobs = 1);
Sweep run_driven(const ExperimentConfig& cfg, std::size_t jobs = 1);
Sweep run_xy_gap_scan(const ExperimentConfig& cfg, std::size_t jobs = 1);
/// Dispatches on cfg.source.
Sweep run_sweep(const ExperimentConfig& cfg, std::size_t jobs = 1);

/// Name of the sweep coordinate ("N", "beta", "n_states", "t", "region_size").
std::string coordinate_name(SourceKind kind);

/// Recovery times of a dynamics sweep: grid indices of log-spaced times.
std::vector<std::size_t> checkpoint_indices(const ExperimentConfig& cfg);

struct PowerLawFit {
  double alpha = 0.0;
  double std_error = 0.0;
};

/// Least-squares slope of log(value) against log(time) over
/// t_lo <= t <= t_hi.
PowerLawFit fit_power_law(const Eigen::VectorXd& times,
                          const Eigen::VectorXd& values, double t_lo,
                          double t_hi);

/// exp(mean(log v)) and std(log v) of positive samples.
struct LogStats {
  double mean = 0.0;
  double log_std = 0.0;
};
LogStats log_stats(const std::vector<double>& values);

double median(std::vector<double> values);

/// Records grouped by coordinate, ascending.
std::map<double, std::vector<TrialRecord>> by_coordinate(const Sweep& sweep);

void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg,
                     const Sweep& sweep, const std::string& code_version);

}  // namespace hamlearn
