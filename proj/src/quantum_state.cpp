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

#include "hamlearn/quantum_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "hamlearn/errors.hpp"
#include "hamlearn/krylov.hpp"

namespace hamlearn {

namespace {

constexpr double kStateTolerance = 1e-10;

// Scatters the low bits of `value` onto the positions listed in `sites`.
std::uint64_t deposit(std::uint64_t value, std::span<const std::size_t> sites) {
  std::uint64_t out = 0;
  for (std::size_t j = 0; j < sites.size(); ++j) {
    if ((value >> j) & 1U) out |= std::uint64_t{1} << sites[j];
  }
  return out;
}

std::vector<std::uint64_t> deposit_table(std::span<const std::size_t> sites) {
  std::vector<std::uint64_t> table(std::size_t{1} << sites.size());
  for (std::uint64_t v = 0; v < table.size(); ++v) table[v] = deposit(v, sites);
  return table;
}

}  // namespace

void check_site_cap(std::size_t n_sites, const SimulationLimits& limits) {
  if (n_sites > limits.max_sites) {
    throw ResourceError(std::to_string(n_sites) +
                        " sites exceed the dense simulation cap of " +
                        std::to_string(limits.max_sites));
  }
}

std::complex<double> pauli_phase(const PauliString& p, std::uint64_t index) {
  static constexpr std::complex<double> kPowers[4] = {
      {1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  int k = std::popcount(p.x_bits() & p.z_bits()) +
          2 * std::popcount(p.z_bits() & index);
  std::complex<double> phase = kPowers[k & 3];
  return p.sign() < 0 ? -phase : phase;
}

PauliOperator::PauliOperator(const OperatorBasis& basis,
                             const Eigen::VectorXd& coeffs)
    : n_sites_(basis.n_sites()) {
  if (static_cast<std::size_t>(coeffs.size()) != basis.size()) {
    throw UsageError("operator coefficients do not match the basis");
  }
  if (n_sites_ > 30) throw ResourceError("operator too large to apply densely");
  std::map<std::uint64_t, std::size_t> slot;
  const Eigen::Index d = dim();
  for (std::size_t t = 0; t < basis.size(); ++t) {
    const double c = coeffs(static_cast<Eigen::Index>(t));
    if (c == 0.0) continue;
    const PauliString& p = basis[t];
    auto [it, inserted] = slot.emplace(p.x_bits(), groups_.size());
    if (inserted) groups_.push_back({p.x_bits(), Eigen::VectorXcd::Zero(d)});
    Eigen::VectorXcd& diag = groups_[it->second].diagonal;
    for (Eigen::Index i = 0; i < d; ++i) {
      diag(i) += c * pauli_phase(p, static_cast<std::uint64_t>(i));
    }
    norm_bound_ += std::abs(c);
  }
}

PauliOperator PauliOperator::static_part(const HamiltonianSpec& spec) {
  return PauliOperator(spec.basis(), spec.coeffs());
}

PauliOperator PauliOperator::drive_part(const HamiltonianSpec& spec) {
  if (!spec.drive()) {
    return PauliOperator(
        spec.basis(),
        Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.basis().size())));
  }
  return PauliOperator(spec.basis(), spec.drive()->coeffs);
}

void PauliOperator::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  y.setZero(dim());
  apply_add(x, y, 1.0);
}

void PauliOperator::apply_add(const Eigen::VectorXcd& x, Eigen::VectorXcd& y,
                              double scale) const {
  if (x.size() != dim() || y.size() != dim()) {
    throw UsageError("vector dimension does not match the operator");
  }
  const Eigen::Index d = dim();
  for (const Group& g : groups_) {
    const std::complex<double>* diag = g.diagonal.data();
    const std::uint64_t flip = g.x_bits;
    if (scale == 1.0) {
      for (Eigen::Index i = 0; i < d; ++i) {
        y(static_cast<Eigen::Index>(static_cast<std::uint64_t>(i) ^ flip)) +=
            diag[i] * x(i);
      }
    } else {
      for (Eigen::Index i = 0; i < d; ++i) {
        y(static_cast<Eigen::Index>(static_cast<std::uint64_t>(i) ^ flip)) +=
            scale * diag[i] * x(i);
      }
    }
  }
}

Eigen::MatrixXcd PauliOperator::dense() const {
  const Eigen::Index d = dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (const Group& g : groups_) {
    for (Eigen::Index i = 0; i < d; ++i) {
      m(static_cast<Eigen::Index>(static_cast<std::uint64_t>(i) ^ g.x_bits), i) +=
          g.diagonal(i);
    }
  }
  return m;
}

QuantumState QuantumState::pure(Eigen::VectorXcd amplitudes,
                                const SimulationLimits& limits) {
  const Eigen::Index d = amplitudes.size();
  if (d == 0 || (d & (d - 1)) != 0) {
    throw UsageError("state dimension must be a power of two");
  }
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(
      static_cast<std::uint64_t>(d)));
  check_site_cap(n, limits);
  if (std::abs(amplitudes.norm() - 1.0) > kStateTolerance) {
    throw UsageError("pure state is not normalized");
  }
  QuantumState s(Kind::kPure, n);
  s.psi_ = std::move(amplitudes);
  return s;
}

QuantumState QuantumState::mixed(Eigen::MatrixXcd rho,
                                 const SimulationLimits& limits) {
  const Eigen::Index d = rho.rows();
  if (d == 0 || rho.cols() != d || (d & (d - 1)) != 0) {
    throw UsageError("density matrix must be square with power-of-two size");
  }
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(
      static_cast<std::uint64_t>(d)));
  check_site_cap(n, limits);
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance) {
    throw UsageError("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > kStateTolerance) {
    throw UsageError("density matrix trace differs from 1");
  }
  if (n <= 8) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kStateTolerance) {
      throw UsageError("density matrix has a negative eigenvalue");
    }
  }
  QuantumState s(Kind::kMixed, n);
  s.rho_ = std::move(rho);
  return s;
}

QuantumState QuantumState::basis_state(std::size_t n_sites, std::uint64_t index) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_sites);
  psi(static_cast<Eigen::Index>(index)) = 1.0;
  return pure(std::move(psi));
}

QuantumState QuantumState::maximally_mixed(std::size_t n_sites) {
  const Eigen::Index d = Eigen::Index{1} << n_sites;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d);
  return mixed(std::move(rho));
}

const Eigen::VectorXcd& QuantumState::amplitudes() const {
  if (kind_ != Kind::kPure) throw UsageError("state is mixed");
  return psi_;
}

const Eigen::MatrixXcd& QuantumState::density() const {
  if (kind_ != Kind::kMixed) throw UsageError("state is pure");
  return rho_;
}

Eigen::MatrixXcd QuantumState::density_matrix() const {
  if (kind_ == Kind::kMixed) return rho_;
  return psi_ * psi_.adjoint();
}

QuantumState QuantumState::reduced(std::span<const std::size_t> sites) const {
  for (std::size_t j = 0; j < sites.size(); ++j) {
    if (sites[j] >= n_sites_ || (j > 0 && sites[j] <= sites[j - 1])) {
      throw UsageError("reduced(): sites must be sorted, distinct and in range");
    }
  }
  std::vector<std::size_t> rest;
  for (std::size_t s = 0; s < n_sites_; ++s) {
    if (!std::binary_search(sites.begin(), sites.end(), s)) rest.push_back(s);
  }
  const auto keep = deposit_table(sites);
  const auto env = deposit_table(rest);
  const Eigen::Index dk = static_cast<Eigen::Index>(keep.size());
  const Eigen::Index de = static_cast<Eigen::Index>(env.size());

  Eigen::MatrixXcd out;
  if (kind_ == Kind::kPure) {
    Eigen::MatrixXcd psi(dk, de);
    for (Eigen::Index e = 0; e < de; ++e) {
      for (Eigen::Index r = 0; r < dk; ++r) {
        psi(r, e) = psi_(static_cast<Eigen::Index>(keep[r] | env[e]));
      }
    }
    out = psi * psi.adjoint();
  } else {
    out = Eigen::MatrixXcd::Zero(dk, dk);
    for (Eigen::Index e = 0; e < de; ++e) {
      for (Eigen::Index c = 0; c < dk; ++c) {
        const Eigen::Index col = static_cast<Eigen::Index>(keep[c] | env[e]);
        for (Eigen::Index r = 0; r < dk; ++r) {
          out(r, c) += rho_(static_cast<Eigen::Index>(keep[r] | env[e]), col);
        }
      }
    }
  }
  out = (0.5 * (out + out.adjoint())).eval();
  QuantumState s(Kind::kMixed, sites.size());
  s.rho_ = std::move(out);
  return s;
}

PauliString restrict_to_sites(const PauliString& p,
                              std::span<const std::size_t> sites) {
  std::uint64_t covered = 0;
  std::uint64_t x = 0, z = 0;
  for (std::size_t j = 0; j < sites.size(); ++j) {
    covered |= std::uint64_t{1} << sites[j];
    if ((p.x_bits() >> sites[j]) & 1U) x |= std::uint64_t{1} << j;
    if ((p.z_bits() >> sites[j]) & 1U) z |= std::uint64_t{1} << j;
  }
  if ((p.support_mask() & ~covered) != 0) {
    throw UsageError("Pauli string " + p.letters() +
                     " is not supported on the requested sites");
  }
  return PauliString(sites.size(), x, z, p.sign());
}

std::complex<double> trace_with_pauli(const Eigen::MatrixXcd& op,
                                      const PauliString& p) {
  const Eigen::Index d = op.rows();
  if (d != (Eigen::Index{1} << p.n_sites()) || op.cols() != d) {
    throw UsageError("operator size does not match the Pauli string");
  }
  std::complex<double> acc = 0.0;
  for (Eigen::Index a = 0; a < d; ++a) {
    const auto ua = static_cast<std::uint64_t>(a);
    acc += op(a, static_cast<Eigen::Index>(ua ^ p.x_bits())) * pauli_phase(p, ua);
  }
  return acc;
}

double expectation(const QuantumState& state, double coeff,
                   const PauliString& p) {
  if (p.n_sites() != state.n_sites()) {
    throw UsageError("observable acts on " + std::to_string(p.n_sites()) +
                     " sites but the state has " +
                     std::to_string(state.n_sites()));
  }
  std::complex<double> value;
  if (state.is_pure()) {
    const Eigen::VectorXcd& psi = state.amplitudes();
    const Eigen::Index d = psi.size();
    value = 0.0;
    for (Eigen::Index a = 0; a < d; ++a) {
      const auto ua = static_cast<std::uint64_t>(a);
      value += std::conj(psi(static_cast<Eigen::Index>(ua ^ p.x_bits()))) *
               pauli_phase(p, ua) * psi(a);
    }
  } else {
    value = trace_with_pauli(state.density(), p);
  }
  if (std::abs(value.imag()) >= 1e-9) {
    throw NumericalError("expectation value of " + p.str() +
                         " has imaginary part " + std::to_string(value.imag()));
  }
  return coeff * value.real();
}

Spectrum diagonalize(const HamiltonianSpec& h, const SimulationLimits& limits) {
  if (!h.is_static()) throw UsageError("diagonalize() needs a static Hamiltonian");
  check_site_cap(h.n_sites(), limits);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      PauliOperator::static_part(h).dense());
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

GroundState ground_state(const HamiltonianSpec& h, const SimulationLimits& limits) {
  if (!h.is_static()) throw UsageError("ground_state() needs a static Hamiltonian");
  check_site_cap(h.n_sites(), limits);
  const PauliOperator op = PauliOperator::static_part(h);
  const Eigen::Index d = op.dim();
  Eigen::VectorXcd psi;
  double e0 = 0.0, e1 = 0.0;
  if (d <= limits.max_dense_dim) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op.dense());
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver failed");
    psi = es.eigenvectors().col(0);
    e0 = es.eigenvalues()(0);
    e1 = d > 1 ? es.eigenvalues()(1) : e0;
  } else {
    Eigenpairs pairs = lowest_eigenpairs(
        [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { op.apply(x, y); },
        d, 2);
    if (!pairs.converged) throw NumericalError("Lanczos did not converge");
    psi = pairs.vectors.col(0);
    e0 = pairs.values(0);
    e1 = pairs.values(1);
  }
  psi /= psi.norm();
  Eigen::VectorXcd hpsi;
  op.apply(psi, hpsi);
  GroundState gs{QuantumState::pure(std::move(psi), limits), e0, e1 - e0,
                 e1 - e0 < 1e-8, 0.0};
  gs.residual = (hpsi - e0 * gs.state.amplitudes()).norm();
  return gs;
}

QuantumState gibbs_state(const Spectrum& spectrum, double beta) {
  if (!(beta >= 0.0)) throw UsageError("inverse temperature must be non-negative");
  const Eigen::VectorXd& e = spectrum.energies;
  // Shift by the lowest energy so the largest weight is exactly 1.
  Eigen::VectorXd w = (-beta * (e.array() - e(0))).exp();
  w /= w.sum();
  Eigen::MatrixXcd scaled = spectrum.vectors * w.cwiseSqrt().asDiagonal();
  Eigen::MatrixXcd rho = scaled * scaled.adjoint();
  rho = (0.5 * (rho + rho.adjoint())).eval();
  rho /= rho.trace().real();
  SimulationLimits unlimited;
  unlimited.max_sites = 64;
  return QuantumState::mixed(std::move(rho), unlimited);
}

QuantumState gibbs_state(const HamiltonianSpec& h, double beta,
                         const SimulationLimits& limits) {
  if (!(beta >= 0.0)) throw UsageError("inverse temperature must be non-negative");
  return gibbs_state(diagonalize(h, limits), beta);
}

double trace_norm_hermitian(const Eigen::MatrixXcd& m, bool anti_hermitian) {
  Eigen::MatrixXcd herm = anti_hermitian
                              ? Eigen::MatrixXcd(std::complex<double>(0, 1) * m)
                              : m;
  herm = (0.5 * (herm + herm.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double steady_state_defect(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& h) {
  return trace_norm_hermitian(rho * h - h * rho, true);
}

double steady_state_defect(const QuantumState& state, const HamiltonianSpec& h) {
  if (!h.is_static()) {
    throw UsageError("steady_state_defect() needs a static Hamiltonian");
  }
  if (h.n_sites() != state.n_sites()) {
    throw UsageError("state and Hamiltonian sizes differ");
  }
  return steady_state_defect(state.density_matrix(),
                             PauliOperator::static_part(h).dense());
}

}  // namespace hamlearn
