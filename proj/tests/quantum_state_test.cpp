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

#include <gtest/gtest.h>

#include <cmath>

#include "dense_oracle.hpp"
#include "hamlearn/errors.hpp"
#include "hamlearn/krylov.hpp"

namespace hamlearn {
namespace {

using testing::cd;
using testing::dense;

HamiltonianSpec spec_from(const std::vector<std::string>& letters,
                          const std::vector<double>& coeffs) {
  std::vector<PauliString> terms;
  std::size_t locality = 1;
  for (const auto& l : letters) {
    terms.push_back(PauliString::from_letters(l));
    locality = std::max(locality, span(terms.back()));
  }
  const Lattice lattice = Lattice::chain(letters.front().size());
  return HamiltonianSpec(OperatorBasis(std::move(terms), Region::whole(lattice), locality),
                         Eigen::Map<const Eigen::VectorXd>(coeffs.data(),
                                                           static_cast<Eigen::Index>(coeffs.size())));
}

double dense_defect(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& h) {
  const Eigen::MatrixXcd c = rho * h - h * rho;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(c);
  return svd.singularValues().sum();
}

TEST(GroundState, SingleSiteExamples) {
  const GroundState z = ground_state(spec_from({"Z"}, {-1.0}));
  EXPECT_NEAR(z.energy, -1.0, 1e-14);
  EXPECT_NEAR(std::abs(z.state.amplitudes()(0)), 1.0, 1e-14);
  EXPECT_FALSE(z.gap_flag);
  EXPECT_NEAR(z.gap, 2.0, 1e-14);

  const GroundState x = ground_state(spec_from({"X"}, {1.0}));
  EXPECT_NEAR(x.energy, -1.0, 1e-14);
  const Eigen::VectorXcd& psi = x.state.amplitudes();
  // (|0> - |1>)/sqrt(2) up to a global phase.
  EXPECT_NEAR(std::abs(psi(0)), M_SQRT1_2, 1e-14);
  EXPECT_NEAR(std::abs(psi(0) + psi(1)), 0.0, 1e-14);
}

TEST(GroundState, DegenerateGroundSpaceIsFlagged) {
  const GroundState g = ground_state(spec_from({"ZI"}, {-1.0}));
  EXPECT_TRUE(g.gap_flag);
}

TEST(GroundState, RandomChainResidual) {
  const HamiltonianSpec h = sample_generic_chain(8, 21);
  const GroundState g = ground_state(h);
  EXPECT_LT(g.residual, 1e-9);
  const Eigen::MatrixXcd hd = dense(h);
  const Eigen::VectorXcd& psi = g.state.amplitudes();
  EXPECT_LT((hd * psi - g.energy * psi).norm(), 1e-9);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hd);
  EXPECT_NEAR(g.energy, es.eigenvalues()(0), 1e-10);
  EXPECT_NEAR(g.gap, es.eigenvalues()(1) - es.eigenvalues()(0), 1e-9);
}

TEST(GroundState, LanczosMatchesDense) {
  const HamiltonianSpec h = sample_generic_chain(9, 5);
  SimulationLimits lanczos;
  lanczos.max_dense_dim = 16;
  const GroundState a = ground_state(h, lanczos);
  const GroundState b = ground_state(h);
  EXPECT_NEAR(a.energy, b.energy, 1e-10);
  EXPECT_NEAR(a.gap, b.gap, 1e-8);
  EXPECT_LT(a.residual, 1e-9);
  EXPECT_NEAR(std::abs(a.state.amplitudes().dot(b.state.amplitudes())), 1.0, 1e-9);
}

TEST(GroundState, RejectsDriveAndCap) {
  const HamiltonianSpec h = sample_generic_chain(4, 1);
  EXPECT_THROW(ground_state(h.with_drive(Drive{h.coeffs(), {1.0, 1.0}})), UsageError);
  SimulationLimits tight;
  tight.max_sites = 3;
  EXPECT_THROW(ground_state(h, tight), ResourceError);
  EXPECT_THROW(check_site_cap(15, SimulationLimits{}), ResourceError);
  EXPECT_NO_THROW(check_site_cap(14, SimulationLimits{}));
}

TEST(GibbsState, InfiniteTemperatureIsMaximallyMixed) {
  const QuantumState rho = gibbs_state(sample_generic_chain(4, 2), 0.0);
  EXPECT_TRUE(rho.density().isApprox(Eigen::MatrixXcd::Identity(16, 16) / 16.0, 1e-13));
}

TEST(GibbsState, SingleSpinClosedForm) {
  const QuantumState rho = gibbs_state(spec_from({"Z"}, {1.0}), 1.0);
  const double z = std::exp(-1.0) + std::exp(1.0);
  EXPECT_NEAR(rho.density()(0, 0).real(), std::exp(-1.0) / z, 1e-14);
  EXPECT_NEAR(rho.density()(1, 1).real(), std::exp(1.0) / z, 1e-14);
  EXPECT_NEAR(std::abs(rho.density()(0, 1)), 0.0, 1e-15);
  EXPECT_THROW(gibbs_state(spec_from({"Z"}, {1.0}), -0.1), UsageError);
}

TEST(GibbsState, LowTemperatureApproachesGroundState) {
  const HamiltonianSpec h = sample_generic_chain(6, 7);
  const GroundState g = ground_state(h);
  ASSERT_FALSE(g.gap_flag);
  const QuantumState rho = gibbs_state(h, 1e3);
  const Eigen::VectorXcd& psi = g.state.amplitudes();
  const double fidelity = psi.dot(rho.density() * psi).real();
  EXPECT_GT(fidelity, 1.0 - 1e-6);
  EXPECT_NEAR(rho.density().trace().real(), 1.0, 1e-10);
}

TEST(GibbsState, CommutesWithHamiltonian) {
  const HamiltonianSpec h = sample_generic_chain(5, 3);
  for (double beta : {0.01, 0.3, 1.0, 10.0}) {
    const QuantumState rho = gibbs_state(h, beta);
    EXPECT_LT(steady_state_defect(rho, h), 1e-9) << beta;
    EXPECT_LT(dense_defect(rho.density(), dense(h)), 1e-9) << beta;
  }
}

TEST(Expectation, Examples) {
  const QuantumState zero = QuantumState::basis_state(3, 0);
  EXPECT_DOUBLE_EQ(expectation(zero, 1.0, PauliString::from_letters("ZII")), 1.0);
  EXPECT_DOUBLE_EQ(expectation(QuantumState::basis_state(3, 1), 2.0,
                               PauliString::from_letters("ZII")),
                   -2.0);
  const QuantumState mixed = QuantumState::maximally_mixed(3);
  for (const char* p : {"XII", "IYZ", "ZZZ"}) {
    EXPECT_NEAR(expectation(mixed, 1.0, PauliString::from_letters(p)), 0.0, 1e-15);
  }
  EXPECT_THROW(expectation(zero, 1.0, PauliString::from_letters("ZI")), UsageError);
}

TEST(Expectation, MatchesDenseTrace) {
  const PauliString p = PauliString::from_letters("IIXYII");
  const QuantumState pure = testing::random_pure(6, 11);
  const QuantumState mixed = testing::random_mixed(6, 12);
  const Eigen::MatrixXcd pd = dense(p);
  const Eigen::VectorXcd& psi = pure.amplitudes();
  EXPECT_NEAR(expectation(pure, 1.0, p), psi.dot(pd * psi).real(), 1e-10);
  EXPECT_NEAR(expectation(mixed, 0.5, p), 0.5 * (mixed.density() * pd).trace().real(), 1e-10);
  const PauliString neg = PauliString::from_letters("-ZIXIIY");
  EXPECT_NEAR(expectation(pure, 1.0, neg), psi.dot(dense(neg) * psi).real(), 1e-10);
}

TEST(TraceWithPauli, MatchesDense) {
  const QuantumState rho = testing::random_mixed(3, 4);
  Eigen::MatrixXcd m = rho.density();
  m(0, 5) += cd(0.3, -0.1);
  for (const auto& letters : testing::all_letter_strings(3)) {
    const PauliString p = PauliString::from_letters(letters);
    const cd expected = (m * dense(p)).trace();
    EXPECT_NEAR(std::abs(trace_with_pauli(m, p) - expected), 0.0, 1e-12) << letters;
  }
}

TEST(QuantumState, Validation) {
  EXPECT_THROW(QuantumState::pure(Eigen::VectorXcd::Ones(4)), UsageError);
  EXPECT_THROW(QuantumState::pure(Eigen::VectorXcd::Ones(3).normalized()), UsageError);
  Eigen::MatrixXcd not_hermitian = Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  not_hermitian(0, 1) = 0.1;
  EXPECT_THROW(QuantumState::mixed(not_hermitian), UsageError);
  EXPECT_THROW(QuantumState::mixed(Eigen::MatrixXcd::Identity(2, 2)), UsageError);
  Eigen::MatrixXcd negative(2, 2);
  negative << 1.5, 0, 0, -0.5;
  EXPECT_THROW(QuantumState::mixed(negative), UsageError);
  EXPECT_THROW(QuantumState::pure(testing::random_vector(4, 0)).density(), UsageError);
  SimulationLimits tight;
  tight.max_sites = 2;
  EXPECT_THROW(QuantumState::pure(testing::random_vector(3, 0), tight), ResourceError);
}

TEST(QuantumState, ReducedMatchesDensePartialTrace) {
  const QuantumState psi = testing::random_pure(5, 9);
  const std::vector<std::size_t> keep{1, 3};
  const QuantumState r = psi.reduced(keep);
  ASSERT_EQ(r.n_sites(), 2u);
  // Every two-site Pauli on the kept sites has the same expectation.
  for (const auto& letters : testing::all_letter_strings(2)) {
    std::string full = "IIIII";
    full[1] = letters[0];
    full[3] = letters[1];
    EXPECT_NEAR(expectation(r, 1.0, PauliString::from_letters(letters)),
                expectation(psi, 1.0, PauliString::from_letters(full)), 1e-12)
        << full;
  }
  const std::vector<std::size_t> unsorted{3, 1};
  EXPECT_THROW(psi.reduced(unsorted), UsageError);
  EXPECT_EQ(restrict_to_sites(PauliString::from_letters("IXIZI"), keep).letters(), "XZ");
  EXPECT_THROW(restrict_to_sites(PauliString::from_letters("XXIII"), keep), UsageError);
}

TEST(PauliOperator, ApplyMatchesDense) {
  const HamiltonianSpec h = sample_generic_chain(5, 13);
  const PauliOperator op = PauliOperator::static_part(h);
  const Eigen::MatrixXcd hd = dense(h);
  EXPECT_LT((op.dense() - hd).norm(), 1e-12);
  const Eigen::VectorXcd v = testing::random_vector(5, 1);
  Eigen::VectorXcd y;
  op.apply(v, y);
  EXPECT_LT((y - hd * v).norm(), 1e-12);
  Eigen::VectorXcd acc = v;
  op.apply_add(v, acc, -2.0);
  EXPECT_LT((acc - (v - 2.0 * hd * v)).norm(), 1e-12);
  EXPECT_EQ(PauliOperator::drive_part(h).dense().norm(), 0.0);
  EXPECT_NEAR(op.norm_bound(), h.coeffs().cwiseAbs().sum(), 1e-12);
}

TEST(SteadyStateDefect, Examples) {
  const HamiltonianSpec h = sample_generic_chain(5, 31);
  const Spectrum s = diagonalize(h);
  const QuantumState eig = QuantumState::pure(s.vectors.col(3));
  EXPECT_LT(steady_state_defect(eig, h), 1e-9);
  const QuantumState generic = testing::random_mixed(5, 2);
  const double d = steady_state_defect(generic, h);
  EXPECT_GT(d, 0.0);
  EXPECT_NEAR(d, dense_defect(generic.density(), dense(h)), 1e-9);
  const QuantumState pure = testing::random_pure(5, 3);
  EXPECT_NEAR(steady_state_defect(pure, h),
              dense_defect(pure.density_matrix(), dense(h)), 1e-9);
}

TEST(Krylov, LowestEigenpairsMatchDense) {
  const HamiltonianSpec h = sample_generic_chain(7, 17);
  const PauliOperator op = PauliOperator::static_part(h);
  const Eigenpairs pairs = lowest_eigenpairs(
      [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { op.apply(x, y); }, op.dim(), 3);
  ASSERT_TRUE(pairs.converged);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense(h));
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(pairs.values(i), es.eigenvalues()(i), 1e-10);
    EXPECT_LT(pairs.residuals(i), 1e-9);
  }
  EXPECT_THROW(lowest_eigenpairs([](const Eigen::VectorXcd&, Eigen::VectorXcd&) {}, 0, 1),
               UsageError);
}

// The second pair of this XY chain stalls near 5e-10 while the ground pair
// converges to round-off.
TEST(Krylov, StalledExcitedPairStillConverges) {
  const HamiltonianSpec h = sample_chain(ModelFamily::kXYChain, 14, 8454319320170725822ULL);
  const PauliOperator op = PauliOperator::static_part(h);
  const Eigenpairs pairs = lowest_eigenpairs(
      [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { op.apply(x, y); }, op.dim(), 2);
  ASSERT_TRUE(pairs.converged);
  EXPECT_LT(pairs.residuals(0), 1e-9);
  EXPECT_LT(pairs.residuals(1), 1e-6);
  EXPECT_GT(pairs.values(1) - pairs.values(0), 0.1);
}

TEST(Krylov, ExpmMultiplyMatchesDense) {
  const HamiltonianSpec h = sample_generic_chain(6, 19);
  const PauliOperator op = PauliOperator::static_part(h);
  const Eigen::VectorXcd v = testing::random_vector(6, 4);
  for (double tau : {0.0, 0.05, 1.0, 7.5}) {
    const Eigen::VectorXcd got = expm_multiply(
        [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { op.apply(x, y); }, v, tau);
    const Eigen::VectorXcd want = testing::dense_expm_hermitian(dense(h), tau) * v;
    EXPECT_LT((got - want).norm(), 1e-10) << tau;
  }
}

}  // namespace
}  // namespace hamlearn
