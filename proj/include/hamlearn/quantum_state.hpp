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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hamlearn/hamiltonian.hpp"
#include "hamlearn/pauli.hpp"

namespace hamlearn {

/// Hard limits of the dense backend.
struct SimulationLimits {
  std::size_t max_sites = 14;
  /// Largest Hilbert-space dimension diagonalized densely; larger ground
  /// states go through Lanczos.
  Eigen::Index max_dense_dim = 1024;
};

/// Throws ResourceError when `n_sites` exceeds the cap.
void check_site_cap(std::size_t n_sites, const SimulationLimits& limits);

/// Applies sign * P to the computational basis, bit j of the index being
/// site j. (P psi)[i ^ x] = phase(i) psi[i].
std::complex<double> pauli_phase(const PauliString& p, std::uint64_t index);

/// Real linear combination of Pauli strings, applied matrix-free. Terms
/// sharing an X-pattern are merged into one diagonal.
class PauliOperator {
 public:
  PauliOperator() = default;
  PauliOperator(const OperatorBasis& basis, const Eigen::VectorXd& coeffs);

  static PauliOperator static_part(const HamiltonianSpec& spec);
  /// Zero operator when the spec has no drive.
  static PauliOperator drive_part(const HamiltonianSpec& spec);

  std::size_t n_sites() const { return n_sites_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_sites_; }

  /// y = A x.
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  /// y += scale * A x.
  void apply_add(const Eigen::VectorXcd& x, Eigen::VectorXcd& y,
                 double scale) const;
  Eigen::MatrixXcd dense() const;
  /// Sum of |coefficients|, an upper bound on the operator norm.
  double norm_bound() const { return norm_bound_; }

 private:
  struct Group {
    std::uint64_t x_bits;
    Eigen::VectorXcd diagonal;
  };
  std::size_t n_sites_ = 0;
  std::vector<Group> groups_;
  double norm_bound_ = 0.0;
};

/// Pure state vector or density matrix over at most `max_sites` spins.
class QuantumState {
 public:
  enum class Kind { kPure, kMixed };

  /// Requires unit norm within 1e-10.
  static QuantumState pure(Eigen::VectorXcd amplitudes,
                           const SimulationLimits& limits = {});
  /// Requires Hermitian, unit trace and (up to 8 sites) eigenvalues >= -1e-10.
  static QuantumState mixed(Eigen::MatrixXcd rho,
                            const SimulationLimits& limits = {});
  static QuantumState basis_state(std::size_t n_sites, std::uint64_t index);
  static QuantumState maximally_mixed(std::size_t n_sites);

  Kind kind() const { return kind_; }
  bool is_pure() const { return kind_ == Kind::kPure; }
  std::size_t n_sites() const { return n_sites_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_sites_; }
  const Eigen::VectorXcd& amplitudes() const;
  const Eigen::MatrixXcd& density() const;
  /// Density matrix, promoting pure states to projectors.
  Eigen::MatrixXcd density_matrix() const;

  /// Partial trace onto `sites` (sorted, distinct); the result has
  /// sites.size() spins with sites[j] mapped to bit j.
  QuantumState reduced(std::span<const std::size_t> sites) const;

 private:
  QuantumState(Kind kind, std::size_t n_sites) : kind_(kind), n_sites_(n_sites) {}

  Kind kind_ = Kind::kPure;
  std::size_t n_sites_ = 0;
  Eigen::VectorXcd psi_;
  Eigen::MatrixXcd rho_;
};

/// Re-indexes P onto `sites` (sorted); the support must lie inside.
PauliString restrict_to_sites(const PauliString& p,
                              std::span<const std::size_t> sites);

/// Tr(op * P) for an arbitrary (not necessarily Hermitian) square matrix.
std::complex<double> trace_with_pauli(const Eigen::MatrixXcd& op,
                                      const PauliString& p);

/// coeff * <P>. Throws NumericalError if the imaginary residue is >= 1e-9.
double expectation(const QuantumState& state, double coeff,
                   const PauliString& p);

/// Full spectrum of a static Hamiltonian (dense).
struct Spectrum {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXcd vectors;
};

Spectrum diagonalize(const HamiltonianSpec& h,
                     const SimulationLimits& limits = {});

struct GroundState {
  QuantumState state;
  double energy = 0.0;
  /// E1 - E0.
  double gap = 0.0;
  /// Set when the gap is below 1e-8 (degenerate ground space).
  bool gap_flag = false;
  /// ||H psi - E0 psi||.
  double residual = 0.0;
};

GroundState ground_state(const HamiltonianSpec& h,
                         const SimulationLimits& limits = {});

/// exp(-beta H) / Z. beta must be non-negative.
QuantumState gibbs_state(const HamiltonianSpec& h, double beta,
                         const SimulationLimits& limits = {});
QuantumState gibbs_state(const Spectrum& spectrum, double beta);

/// Trace norm of a matrix whose Hermitian or anti-Hermitian structure is
/// given by `anti_hermitian`.
double trace_norm_hermitian(const Eigen::MatrixXcd& m, bool anti_hermitian);

/// ||[rho, H]||_1 for a static H; pure states are promoted to projectors.
double steady_state_defect(const QuantumState& state, const HamiltonianSpec& h);
double steady_state_defect(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& h);

}  // namespace hamlearn
