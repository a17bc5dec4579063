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
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hamlearn/dynamics.hpp"
#include "hamlearn/operator_basis.hpp"
#include "hamlearn/pauli.hpp"
#include "hamlearn/quantum_state.hpp"

namespace hamlearn {

using Provenance = std::map<std::string, std::string>;

/// Real N x M matrix of commutator expectations <i[A_n, S_m]>, or N x 2M
/// when `extended` (time-averaged block, then drive-weighted block).
class ConstraintMatrix {
 public:
  ConstraintMatrix(Eigen::MatrixXd entries, OperatorBasis constraints,
                   OperatorBasis terms, bool extended, Provenance provenance = {});
  /// Stacked form: rows are the concatenated blocks, each with its own
  /// provenance.
  ConstraintMatrix(Eigen::MatrixXd entries, std::vector<OperatorBasis> blocks,
                   OperatorBasis terms, bool extended,
                   std::vector<Provenance> provenance);

  const Eigen::MatrixXd& entries() const { return entries_; }
  /// Constraint operators per stacked block; a single block unless stacked.
  const std::vector<OperatorBasis>& constraint_blocks() const { return constraints_; }
  /// Row labels, block after block.
  std::vector<PauliString> constraint_rows() const;
  const OperatorBasis& term_basis() const { return terms_; }
  bool extended() const { return extended_; }
  /// One entry per stacked block.
  const std::vector<Provenance>& provenance() const { return provenance_; }
  Eigen::Index rows() const { return entries_.rows(); }
  Eigen::Index cols() const { return entries_.cols(); }

  /// First `count` rows.
  ConstraintMatrix top_rows(Eigen::Index count) const;
  /// Same bases and provenance with different entries of the same shape.
  ConstraintMatrix with_entries(Eigen::MatrixXd entries) const;
  /// Column labels; drive columns carry a "drive:" prefix.
  std::vector<std::string> column_labels() const;

 private:
  Eigen::MatrixXd entries_;
  std::vector<OperatorBasis> constraints_;
  OperatorBasis terms_;
  bool extended_;
  std::vector<Provenance> provenance_;
};

struct RecoveryResult {
  /// Unit-norm right-singular vector of the smallest singular value, with
  /// its largest-magnitude entry positive.
  Eigen::VectorXd coeffs;
  /// Squared singular values, ascending, zero-padded when N < columns.
  Eigen::VectorXd lambdas;
  double gap = 0.0;
  /// lambda_1 - lambda_0 below the numerical floor.
  bool degenerate_kernel = false;
  /// Orthonormal columns spanning every right-singular direction whose
  /// lambda is below the floor (at least the recovered vector).
  Eigen::MatrixXd kernel_basis;
};

/// Expectation value <P> of a sign +1 Pauli string.
using ExpectationFn = std::function<double(const PauliString&)>;

/// Distinct observables P (sign +1, coefficient 1) needed for the
/// non-zero entries i[A_n, S_m] = +-2 P.
std::vector<Observable> commutator_observables(const OperatorBasis& constraints,
                                               const OperatorBasis& terms);

/// K from a generic expectation source; each distinct P is queried once and
/// commuting pairs are exactly 0.
ConstraintMatrix build_constraint_matrix(const ExpectationFn& expect,
                                         const OperatorBasis& constraints,
                                         const OperatorBasis& terms,
                                         Provenance provenance = {});

/// K in a state. The state is first reduced to the joint support of the
/// needed observables.
ConstraintMatrix build_constraint_matrix(const QuantumState& state,
                                         const OperatorBasis& constraints,
                                         const OperatorBasis& terms,
                                         Provenance provenance = {});

/// How a record's samples are combined into a time average.
enum class TimeAverage {
  /// Plain mean over all grid points, endpoints included.
  kGridMean,
  /// Trapezoidal rule, the endpoints weighted by one half.
  kTrapezoid,
};

std::string time_average_name(TimeAverage rule);

/// Per-sample weights summing to one.
Eigen::VectorXd time_average_weights(std::size_t count, TimeAverage rule);

/// Extended K from a recorded time series: left block averages
/// <i[A_n,S_m]>(t'), right block averages <i[A_n,S_m]>(t') f(t').
ConstraintMatrix build_extended_constraint_matrix(
    const TimeSeriesRecord& record, const OperatorBasis& constraints,
    const OperatorBasis& terms, TimeAverage rule = TimeAverage::kGridMean,
    Provenance provenance = {});

/// Extended K from precomputed averages of <P> and of <P> f(t').
ConstraintMatrix build_extended_constraint_matrix(
    const ExpectationFn& mean, const ExpectationFn& drive_weighted_mean,
    const OperatorBasis& constraints, const OperatorBasis& terms,
    Provenance provenance = {});

/// Vertical concatenation of blocks sharing the term basis.
ConstraintMatrix stack(const std::vector<ConstraintMatrix>& parts);

/// Adds i.i.d. Normal(0, epsilon^2) to every entry.
ConstraintMatrix inject_noise(const ConstraintMatrix& k, double epsilon,
                              std::uint64_t seed);

/// 1e3 * machine epsilon * lambda_max.
double lambda_floor(const Eigen::VectorXd& lambdas);

RecoveryResult recover(const Eigen::MatrixXd& k);
RecoveryResult recover(const ConstraintMatrix& k);

/// min_s || c_true/|c_true| - s c_rec/|c_rec| ||, s = +-1.
double reconstruction_error(const Eigen::VectorXd& c_true,
                            const Eigen::VectorXd& c_rec);

struct ErrorEstimate {
  double value = 0.0;
  /// Some lambda_i with i >= 1 fell below the floor; those terms are left
  /// out of `value`.
  bool degenerate_spectrum = false;
};

/// epsilon * sqrt(sum_{i >= 1} 1 / lambda_i) for ascending lambdas.
ErrorEstimate error_estimate(const Eigen::VectorXd& lambdas, double epsilon);

/// 2^n Tr([S_i, rho]^dagger [S_j, rho]) from dense matrices. Limited to
/// six sites.
Eigen::MatrixXd full_system_correlation_matrix(const QuantumState& state,
                                               const OperatorBasis& terms);

/// Every non-identity Pauli string on the lattice of `terms`.
OperatorBasis complete_constraint_basis(std::size_t n_sites);

/// CSV: commented metadata, a header row of column labels, one row per
/// constraint.
void write_csv(std::ostream& out, const ConstraintMatrix& k);

/// Parsed external K table.
struct KTable {
  std::vector<std::string> labels;
  Eigen::MatrixXd entries;
  std::map<std::string, std::string> metadata;
};

/// Reads a K table. The header row is optional when the file has only
/// numeric rows; '#' lines are metadata "key=value" pairs.
KTable read_k_table(std::istream& in);

/// One-column list of term labels (a header "term" line is skipped).
std::vector<std::string> read_term_list(std::istream& in);

void write_csv(std::ostream& out, const RecoveryResult& result,
               const std::vector<std::string>& labels,
               const std::map<std::string, std::string>& metadata);

}  // namespace hamlearn
