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
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace hamlearn {

/// y = A x for a Hermitian A given only through its action.
using LinearMap =
    std::function<void(const Eigen::VectorXcd& x, Eigen::VectorXcd& y)>;

struct KrylovOptions {
  /// Largest Krylov basis kept before a thick restart.
  int max_basis = 60;
  int max_restarts = 500;
  /// Residual target relative to the largest Ritz value magnitude.
  double relative_tolerance = 1e-14;
  /// Once progress stalls, the lowest pair is accepted at 1e-11 relative and
  /// the higher pairs, which only supply eigenvalues, at this residual.
  double stalled_tolerance = 1e-8;
  std::uint64_t start_seed = 0x5eed;
};

struct Eigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors; // columns
  Eigen::VectorXd residuals;
  bool converged = false;
};

/// Lowest `count` eigenpairs of a Hermitian operator by thick-restart
/// Lanczos with full reorthogonalization.
Eigenpairs lowest_eigenpairs(const LinearMap& apply, Eigen::Index dim,
                             int count, const KrylovOptions& options = {});

/// exp(-i tau A) v for Hermitian A, by a Lanczos projection grown until the
/// truncation estimate drops below `tolerance`.
Eigen::VectorXcd expm_multiply(const LinearMap& apply, const Eigen::VectorXcd& v,
                               double tau, double tolerance = 1e-14);

}  // namespace hamlearn
