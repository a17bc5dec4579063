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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "hamlearn/lattice.hpp"
#include "hamlearn/operator_basis.hpp"

namespace hamlearn {

/// f(t) = amplitude * cos(omega t).
struct DriveFunction {
  double amplitude = 1.0;
  double omega = 0.0;

  double operator()(double t) const;
  std::string str() const;
};

/// Time-dependent part f(t) * sum_m coeffs[m] S_m over the spec's basis.
struct Drive {
  Eigen::VectorXd coeffs;
  DriveFunction function;
};

/// H(t) = sum_m c_m S_m + f(t) sum_m v_m S_m, with the drive optional.
class HamiltonianSpec {
 public:
  HamiltonianSpec() = default;
  HamiltonianSpec(OperatorBasis basis, Eigen::VectorXd coeffs,
                  std::optional<Drive> drive = std::nullopt);

  const OperatorBasis& basis() const { return basis_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  const std::optional<Drive>& drive() const { return drive_; }
  bool is_static() const { return !drive_.has_value(); }
  std::size_t n_sites() const { return basis_.n_sites(); }

  /// Free-form provenance (model, seed, disorder distribution, ...).
  const std::map<std::string, std::string>& metadata() const {
    return metadata_;
  }
  HamiltonianSpec& set_metadata(const std::string& key, std::string value);

  HamiltonianSpec static_part() const;
  HamiltonianSpec with_drive(Drive drive) const;
  /// Coefficient-wise sum; both specs must share a basis. Drives are dropped.
  HamiltonianSpec operator+(const HamiltonianSpec& other) const;

  /// Coefficients of the static part on `sub` (zero for absent terms).
  Eigen::VectorXd coeffs_on(const OperatorBasis& sub) const;
  /// Drive coefficients on `sub`; zero vector when static.
  Eigen::VectorXd drive_coeffs_on(const OperatorBasis& sub) const;

 private:
  OperatorBasis basis_;
  Eigen::VectorXd coeffs_;
  std::optional<Drive> drive_;
  std::map<std::string, std::string> metadata_;
};

/// Random 2-local chain: every single-site and nearest-neighbor Pauli term
/// with an i.i.d. standard normal coefficient.
HamiltonianSpec sample_generic_chain(std::size_t n_sites, std::uint64_t seed);

/// H = 1/2 sum_l [2 g_l Z_l + (1+gamma_l) X_l X_{l+1} + (1-gamma_l) Y_l Y_{l+1}]
/// with open boundaries; `g` has n entries, `gamma` n-1.
HamiltonianSpec xy_chain(std::span<const double> g,
                         std::span<const double> gamma);

/// xy_chain with g_l, gamma_l i.i.d. standard normal.
HamiltonianSpec sample_xy_chain(std::size_t n_sites, std::uint64_t seed);

/// Samples a chain of the given family.
HamiltonianSpec sample_chain(ModelFamily model, std::size_t n_sites,
                             std::uint64_t seed);

void write_spec(std::ostream& out, const HamiltonianSpec& spec);
HamiltonianSpec read_spec(std::istream& in);

}  // namespace hamlearn
