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

#include "hamlearn/dynamics.hpp"

#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>

#include "hamlearn/errors.hpp"
#include "hamlearn/krylov.hpp"

namespace hamlearn {

namespace {

// Above this dimension static evolution switches from a full
// eigendecomposition to Krylov exponentials on the grid.
constexpr Eigen::Index kSpectralDimLimit = 2048;

SimulationLimits relaxed(const SimulationLimits& limits) {
  SimulationLimits out = limits;
  out.max_sites = 64;
  return out;
}

}  // namespace

TimeGrid TimeGrid::up_to(double t_max, double dt) {
  if (!(dt > 0.0)) throw UsageError("time step dt must be positive");
  if (!(t_max >= dt)) throw UsageError("t_max must be at least dt");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  return TimeGrid{dt, steps + 1};
}

struct Trajectory::Engine {
  virtual ~Engine() = default;
  virtual QuantumState at(std::size_t index) = 0;
};

namespace {

class SpectralEngine : public Trajectory::Engine {
 public:
  SpectralEngine(const QuantumState& initial, const HamiltonianSpec& h,
                 double dt, const SimulationLimits& limits)
      : dt_(dt), pure_(initial.is_pure()), limits_(relaxed(limits)) {
    Spectrum s = diagonalize(h, limits);
    energies_ = std::move(s.energies);
    vectors_ = std::move(s.vectors);
    if (pure_) {
      coeffs_ = vectors_.adjoint() * initial.amplitudes();
    } else {
      rho_eigen_ = vectors_.adjoint() * initial.density() * vectors_;
    }
  }

  QuantumState at(std::size_t index) override { return at_time(dt_ * index); }

  QuantumState at_time(double t) const {
    Eigen::VectorXcd phases(energies_.size());
    for (Eigen::Index i = 0; i < energies_.size(); ++i) {
      phases(i) = std::polar(1.0, -energies_(i) * t);
    }
    if (pure_) {
      Eigen::VectorXcd psi = vectors_ * phases.cwiseProduct(coeffs_);
      return QuantumState::pure(std::move(psi), limits_);
    }
    Eigen::MatrixXcd rotated =
        phases.asDiagonal() * rho_eigen_ * phases.conjugate().asDiagonal();
    Eigen::MatrixXcd rho = vectors_ * rotated * vectors_.adjoint();
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return QuantumState::mixed(std::move(rho), limits_);
  }

 private:
  double dt_;
  bool pure_;
  SimulationLimits limits_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd vectors_;
  Eigen::VectorXcd coeffs_;
  Eigen::MatrixXcd rho_eigen_;
};

// exp(-i H(t_mid) tau) applied to a state, H(t) = H0 + f(t) V.
class MidpointStepper {
 public:
  MidpointStepper(const HamiltonianSpec& h, const SimulationLimits& limits)
      : h0_(PauliOperator::static_part(h)),
        v_(PauliOperator::drive_part(h)),
        f_(h.drive() ? h.drive()->function : DriveFunction{0.0, 0.0}),
        limits_(relaxed(limits)) {}

  QuantumState step(const QuantumState& state, double t0, double tau) const {
    const double f_mid = f_(t0 + 0.5 * tau);
    if (state.is_pure()) {
      auto apply = [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
        h0_.apply(x, y);
        v_.apply_add(x, y, f_mid);
      };
      return QuantumState::pure(expm_multiply(apply, state.amplitudes(), tau),
                                limits_);
    }
    Eigen::MatrixXcd hm = h0_.dense() + f_mid * v_.dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hm);
    Eigen::VectorXcd phases(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
      phases(i) = std::polar(1.0, -es.eigenvalues()(i) * tau);
    }
    Eigen::MatrixXcd u =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    Eigen::MatrixXcd rho = u * state.density() * u.adjoint();
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return QuantumState::mixed(std::move(rho), limits_);
  }

  /// Evolves from t0 to t0 + duration in equal steps no longer than `step`.
  QuantumState advance(QuantumState state, double t0, double duration,
                       double step) const {
    if (duration == 0.0) return state;
    const auto n = static_cast<std::size_t>(std::ceil(duration / step - 1e-9));
    const double tau = duration / static_cast<double>(std::max<std::size_t>(n, 1));
    for (std::size_t k = 0; k < std::max<std::size_t>(n, 1); ++k) {
      state = step_(state, t0 + static_cast<double>(k) * tau, tau);
    }
    return state;
  }

 private:
  QuantumState step_(const QuantumState& s, double t0, double tau) const {
    return step(s, t0, tau);
  }

  PauliOperator h0_;
  PauliOperator v_;
  DriveFunction f_;
  SimulationLimits limits_;
};

class SteppingEngine : public Trajectory::Engine {
 public:
  SteppingEngine(const QuantumState& initial, const HamiltonianSpec& h,
                 double dt, const SimulationLimits& limits)
      : stepper_(h, limits), dt_(dt), state_(initial) {}

  QuantumState at(std::size_t index) override {
    while (index_ < index) {
      state_ = stepper_.advance(state_, dt_ * static_cast<double>(index_), dt_, dt_);
      ++index_;
    }
    return state_;
  }

 private:
  MidpointStepper stepper_;
  double dt_;
  std::size_t index_ = 0;
  QuantumState state_;
};

bool use_spectral(const QuantumState& state, const HamiltonianSpec& h) {
  return h.is_static() && state.dim() <= kSpectralDimLimit;
}

void check_compatible(const QuantumState& state, const HamiltonianSpec& h) {
  if (state.n_sites() != h.n_sites()) {
    throw UsageError("state has " + std::to_string(state.n_sites()) +
                     " sites but the Hamiltonian " + std::to_string(h.n_sites()));
  }
}

}  // namespace

QuantumState evolve(const QuantumState& state, const HamiltonianSpec& h,
                    double t, double step, const SimulationLimits& limits) {
  if (!(t >= 0.0)) throw UsageError("evolution time must be non-negative");
  if (!(step > 0.0)) throw UsageError("evolution step must be positive");
  check_compatible(state, h);
  check_site_cap(state.n_sites(), limits);
  if (t == 0.0) return state;
  if (use_spectral(state, h)) {
    return SpectralEngine(state, h, 1.0, limits).at_time(t);
  }
  // Static H reaches here only above the spectral size limit; the midpoint
  // rule is then exact up to the Krylov tolerance.
  return MidpointStepper(h, limits).advance(state, 0.0, t, step);
}

Trajectory::Trajectory(const QuantumState& initial, const HamiltonianSpec& h,
                       double dt, const SimulationLimits& limits)
    : h_(h), dt_(dt), state_(initial) {
  if (!(dt > 0.0)) throw UsageError("time step dt must be positive");
  check_compatible(initial, h);
  check_site_cap(initial.n_sites(), limits);
  if (use_spectral(initial, h)) {
    engine_ = std::make_unique<SpectralEngine>(initial, h, dt, limits);
  } else {
    engine_ = std::make_unique<SteppingEngine>(initial, h, dt, limits);
  }
}

Trajectory::~Trajectory() = default;
Trajectory::Trajectory(Trajectory&&) noexcept = default;
Trajectory& Trajectory::operator=(Trajectory&&) noexcept = default;

double Trajectory::drive_value() const {
  return h_.drive() ? h_.drive()->function(time()) : 0.0;
}

void Trajectory::advance() {
  ++index_;
  state_ = engine_->at(index_);
}

TimeSeriesRecord::TimeSeriesRecord(TimeGrid grid,
                                   std::vector<Observable> observables,
                                   Eigen::MatrixXd values,
                                   Eigen::VectorXd drive_samples)
    : grid_(grid),
      observables_(std::move(observables)),
      values_(std::move(values)),
      drive_(std::move(drive_samples)) {
  if (!(grid_.dt > 0.0) || grid_.count == 0) {
    throw UsageError("time grid must be non-empty with positive spacing");
  }
  const auto n_t = static_cast<Eigen::Index>(grid_.count);
  if (values_.rows() != static_cast<Eigen::Index>(observables_.size()) ||
      values_.cols() != n_t || drive_.size() != n_t) {
    throw UsageError("time series dimensions are inconsistent");
  }
  if (!values_.allFinite() || !drive_.allFinite()) {
    throw UsageError("time series contains non-finite values");
  }
}

Eigen::VectorXd TimeSeriesRecord::times() const {
  Eigen::VectorXd t(static_cast<Eigen::Index>(grid_.count));
  for (std::size_t k = 0; k < grid_.count; ++k) {
    t(static_cast<Eigen::Index>(k)) = grid_.time(k);
  }
  return t;
}

TimeSeriesRecord TimeSeriesRecord::truncated(std::size_t count) const {
  if (count == 0 || count > grid_.count) {
    throw UsageError("truncation length out of range");
  }
  const auto c = static_cast<Eigen::Index>(count);
  return TimeSeriesRecord(TimeGrid{grid_.dt, count}, observables_,
                          values_.leftCols(c), drive_.head(c));
}

Eigen::VectorXd expectations(const QuantumState& state,
                             const std::vector<Observable>& observables) {
  std::uint64_t mask = 0;
  for (const auto& o : observables) {
    if (o.pauli.n_sites() != state.n_sites()) {
      throw UsageError("observable " + o.pauli.letters() +
                       " does not match the state size");
    }
    mask |= o.pauli.support_mask();
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(observables.size()));
  const auto joint = static_cast<std::size_t>(std::popcount(mask));
  if (joint == state.n_sites() || observables.size() < 4) {
    for (std::size_t i = 0; i < observables.size(); ++i) {
      out(static_cast<Eigen::Index>(i)) =
          expectation(state, observables[i].coeff, observables[i].pauli);
    }
    return out;
  }
  std::vector<std::size_t> sites;
  for (std::uint64_t m = mask; m != 0; m &= m - 1) {
    sites.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  }
  const QuantumState local = state.reduced(sites);
  for (std::size_t i = 0; i < observables.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = expectation(
        local, observables[i].coeff, restrict_to_sites(observables[i].pauli, sites));
  }
  return out;
}

TimeSeriesRecord record_time_series(const QuantumState& initial,
                                    const HamiltonianSpec& h,
                                    const std::vector<Observable>& observables,
                                    double t_max, double dt,
                                    const SimulationLimits& limits) {
  const TimeGrid grid = TimeGrid::up_to(t_max, dt);
  const auto n_t = static_cast<Eigen::Index>(grid.count);
  Eigen::MatrixXd values(static_cast<Eigen::Index>(observables.size()), n_t);
  Eigen::VectorXd drive(n_t);
  Trajectory traj(initial, h, dt, limits);
  for (Eigen::Index k = 0; k < n_t; ++k) {
    if (k > 0) traj.advance();
    values.col(k) = expectations(traj.state(), observables);
    drive(k) = traj.drive_value();
  }
  return TimeSeriesRecord(grid, observables, std::move(values), std::move(drive));
}

void write_csv(std::ostream& out, const TimeSeriesRecord& record) {
  out << std::setprecision(17);
  out << "# schema=1\n# kind=time_series\n# dt=" << record.grid().dt << "\n";
  for (std::size_t i = 0; i < record.observables().size(); ++i) {
    out << "# observable obs_" << i << " coeff=" << record.observables()[i].coeff
        << " pauli=" << record.observables()[i].pauli.str() << "\n";
  }
  out << "time,f_t";
  for (std::size_t i = 0; i < record.observables().size(); ++i) out << ",obs_" << i;
  out << "\n";
  for (std::size_t k = 0; k < record.n_times(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    out << record.grid().time(k) << "," << record.drive_samples()(kk);
    for (Eigen::Index i = 0; i < record.values().rows(); ++i) {
      out << "," << record.values()(i, kk);
    }
    out << "\n";
  }
}

TimeSeriesRecord read_time_series_csv(std::istream& in) {
  std::string line;
  double dt = 0.0;
  bool schema = false;
  std::vector<Observable> observables;
  std::vector<std::vector<double>> rows;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string word;
      ls >> word;
      if (word == "schema=1") schema = true;
      if (word.rfind("dt=", 0) == 0) dt = std::stod(word.substr(3));
      if (word == "observable") {
        std::string name, coeff, pauli;
        ls >> name >> coeff >> pauli;
        if (coeff.rfind("coeff=", 0) != 0 || pauli.rfind("pauli=", 0) != 0) {
          throw UsageError("line " + std::to_string(line_no) +
                           ": malformed observable declaration");
        }
        observables.push_back(Observable{std::stod(coeff.substr(6)),
                                         PauliString::from_letters(pauli.substr(6))});
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != observables.size() + 2) {
      throw UsageError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(observables.size() + 2) + " columns");
    }
    rows.push_back(std::move(row));
  }
  if (!schema) throw UsageError("time series CSV lacks schema=1");
  if (rows.empty()) throw UsageError("time series CSV has no rows");
  const auto n_t = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd values(static_cast<Eigen::Index>(observables.size()), n_t);
  Eigen::VectorXd drive(n_t);
  for (Eigen::Index k = 0; k < n_t; ++k) {
    const auto& row = rows[static_cast<std::size_t>(k)];
    if (std::abs(row[0] - dt * static_cast<double>(k)) > 1e-12 * std::max(1.0, row[0])) {
      throw UsageError("time column is not the uniform grid k*dt");
    }
    drive(k) = row[1];
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      values(i, k) = row[static_cast<std::size_t>(i) + 2];
    }
  }
  return TimeSeriesRecord(TimeGrid{dt, rows.size()}, std::move(observables),
                          std::move(values), std::move(drive));
}

}  // namespace hamlearn
