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
#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "hamlearn/hamiltonian.hpp"
#include "hamlearn/pauli.hpp"
#include "hamlearn/quantum_state.hpp"

namespace hamlearn {

/// Uniform grid 0, dt, ..., (count-1) dt.
struct TimeGrid {
  double dt = 0.05;
  std::size_t count = 1;

  /// Points up to floor(t_max / dt) * dt. Requires dt > 0 and t_max >= dt.
  static TimeGrid up_to(double t_max, double dt);
  double time(std::size_t k) const { return static_cast<double>(k) * dt; }
  double t_max() const { return time(count - 1); }
};

/// coeff * P, one recorded column.
struct Observable {
  double coeff = 1.0;
  PauliString pauli;
};

/// State after time t. Static Hamiltonians use the exact propagator
/// exp(-iHt) (step ignored); driven ones take midpoint-exponential steps of
/// at most `step`.
QuantumState evolve(const QuantumState& state, const HamiltonianSpec& h,
                    double t, double step, const SimulationLimits& limits = {});

/// Walks a state along a uniform time grid.
class Trajectory {
 public:
  Trajectory(const QuantumState& initial, const HamiltonianSpec& h, double dt,
             const SimulationLimits& limits = {});
  ~Trajectory();
  Trajectory(Trajectory&&) noexcept;
  Trajectory& operator=(Trajectory&&) noexcept;

  std::size_t index() const { return index_; }
  double time() const { return static_cast<double>(index_) * dt_; }
  /// f(t) at the current point, 0 for static Hamiltonians.
  double drive_value() const;
  const QuantumState& state() const { return state_; }
  void advance();

  /// Opaque stepping backend.
  struct Engine;

 private:
  std::unique_ptr<Engine> engine_;
  HamiltonianSpec h_;
  double dt_;
  std::size_t index_ = 0;
  QuantumState state_;
};

class TimeSeriesRecord {
 public:
  TimeSeriesRecord(TimeGrid grid, std::vector<Observable> observables,
                   Eigen::MatrixXd values, Eigen::VectorXd drive_samples);

  const TimeGrid& grid() const { return grid_; }
  Eigen::VectorXd times() const;
  const std::vector<Observable>& observables() const { return observables_; }
  /// (observable, time) instantaneous expectations.
  const Eigen::MatrixXd& values() const { return values_; }
  const Eigen::VectorXd& drive_samples() const { return drive_; }
  std::size_t n_times() const { return grid_.count; }

  /// First `count` time points.
  TimeSeriesRecord truncated(std::size_t count) const;

 private:
  TimeGrid grid_;
  std::vector<Observable> observables_;
  Eigen::MatrixXd values_;
  Eigen::VectorXd drive_;
};

TimeSeriesRecord record_time_series(const QuantumState& initial,
                                    const HamiltonianSpec& h,
                                    const std::vector<Observable>& observables,
                                    double t_max, double dt,
                                    const SimulationLimits& limits = {});

/// Expectations of many observables in one state, reducing to their joint
/// support first.
Eigen::VectorXd expectations(const QuantumState& state,
                             const std::vector<Observable>& observables);

/// CSV with a commented header block; columns time, f_t, obs_0, obs_1, ...
void write_csv(std::ostream& out, const TimeSeriesRecord& record);
TimeSeriesRecord read_time_series_csv(std::istream& in);

}  // namespace hamlearn
