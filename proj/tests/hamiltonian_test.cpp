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

#include "hamlearn/hamiltonian.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "hamlearn/errors.hpp"

namespace hamlearn {
namespace {

double coeff_of(const HamiltonianSpec& h, const std::string& letters) {
  const auto i = h.basis().index_of(PauliString::from_letters(letters));
  return i ? h.coeffs()(static_cast<Eigen::Index>(*i)) : 0.0;
}

TEST(GenericChain, TermCountAndDeterminism) {
  const HamiltonianSpec h = sample_generic_chain(12, 3);
  EXPECT_EQ(h.coeffs().size(), 3 * 12 + 9 * 11);
  EXPECT_EQ(h.basis().size(), 135u);
  EXPECT_TRUE(h.is_static());
  const HamiltonianSpec again = sample_generic_chain(12, 3);
  EXPECT_EQ(h.coeffs(), again.coeffs());
  EXPECT_EQ(h.basis(), again.basis());
  EXPECT_NE(h.coeffs(), sample_generic_chain(12, 4).coeffs());
  EXPECT_EQ(h.metadata().at("model"), "generic-2-local-chain");
  EXPECT_EQ(h.metadata().at("seed"), "3");
  EXPECT_THROW(sample_generic_chain(1, 0), UsageError);
}

TEST(GenericChain, CoefficientsAreStandardNormal) {
  constexpr int kDraws = 10000;
  for (Eigen::Index term : {0, 17, 38}) {
    double sum = 0.0, sum_sq = 0.0;
    for (int seed = 0; seed < kDraws; ++seed) {
      const double c = sample_generic_chain(4, static_cast<std::uint64_t>(seed)).coeffs()(term);
      sum += c;
      sum_sq += c * c;
    }
    const double mean = sum / kDraws;
    const double sd = std::sqrt(sum_sq / kDraws - mean * mean);
    EXPECT_NEAR(mean, 0.0, 0.05);
    EXPECT_NEAR(sd, 1.0, 0.05);
  }
}

TEST(XYChain, ForcedParameters) {
  const std::vector<double> g0{0.0, 0.0, 0.0, 0.0};
  const std::vector<double> gamma0{0.0, 0.0, 0.0};
  const HamiltonianSpec flat = xy_chain(g0, gamma0);
  EXPECT_EQ(flat.basis().size(), 10u);
  EXPECT_DOUBLE_EQ(coeff_of(flat, "XXII"), 0.5);
  EXPECT_DOUBLE_EQ(coeff_of(flat, "IYYI"), 0.5);

  const std::vector<double> gamma1{1.0, 1.0, 1.0};
  const HamiltonianSpec ising = xy_chain(g0, gamma1);
  EXPECT_DOUBLE_EQ(coeff_of(ising, "IIXX"), 1.0);
  EXPECT_DOUBLE_EQ(coeff_of(ising, "IIYY"), 0.0);
  EXPECT_DOUBLE_EQ(coeff_of(ising, "ZIII"), 0.0);

  const std::vector<double> g{0.3, -1.0, 2.0, 0.5};
  EXPECT_DOUBLE_EQ(coeff_of(xy_chain(g, gamma0), "IZII"), -1.0);
  EXPECT_THROW(xy_chain(g, std::vector<double>{1.0}), UsageError);
}

TEST(XYChain, SampledHasOnlyXYShapes) {
  const HamiltonianSpec h = sample_xy_chain(6, 9);
  EXPECT_EQ(h.basis().size(), 6u + 2u * 5u);
  EXPECT_EQ(h.metadata().at("model"), "xy-chain");
  EXPECT_EQ(h.metadata().count("disorder"), 1u);
  EXPECT_EQ(h.coeffs(), sample_xy_chain(6, 9).coeffs());
  EXPECT_THROW(sample_xy_chain(1, 0), UsageError);
  // XX and YY on a bond share (1 +- gamma)/2 and sum to one.
  EXPECT_NEAR(coeff_of(h, "XXIIII") + coeff_of(h, "YYIIII"), 1.0, 1e-15);
}

TEST(HamiltonianSpec, ValidatesCoefficients) {
  const OperatorBasis b = model_terms(ModelFamily::kGeneric2LocalChain, Lattice::chain(2));
  EXPECT_THROW(HamiltonianSpec(b, Eigen::VectorXd::Zero(3)), UsageError);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.size()));
  bad(0) = std::nan("");
  EXPECT_THROW(HamiltonianSpec(b, bad), UsageError);
  const Eigen::VectorXd ok = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(b.size()));
  EXPECT_THROW(HamiltonianSpec(b, ok, Drive{Eigen::VectorXd::Ones(2), {}}), UsageError);
}

TEST(HamiltonianSpec, SumSubsetAndDrive) {
  const HamiltonianSpec a = sample_generic_chain(5, 1);
  const HamiltonianSpec b = sample_generic_chain(5, 2);
  const HamiltonianSpec s = a + b;
  EXPECT_TRUE(s.coeffs().isApprox(a.coeffs() + b.coeffs()));

  const Lattice l = Lattice::chain(5);
  const OperatorBasis sub = term_basis_for_model(ModelFamily::kGeneric2LocalChain, l,
                                                 Region::interval(l, 2, 2));
  const Eigen::VectorXd on = a.coeffs_on(sub);
  for (std::size_t i = 0; i < sub.size(); ++i) {
    EXPECT_EQ(on(static_cast<Eigen::Index>(i)), coeff_of(a, sub[i].letters()));
  }
  EXPECT_TRUE(a.drive_coeffs_on(sub).isZero());

  const HamiltonianSpec d = a.with_drive(Drive{b.coeffs(), DriveFunction{0.5, 0.05}});
  EXPECT_FALSE(d.is_static());
  EXPECT_EQ(d.drive_coeffs_on(sub), b.coeffs_on(sub));
  EXPECT_TRUE(d.static_part().is_static());
  EXPECT_DOUBLE_EQ(d.drive()->function(0.0), 0.5);
  EXPECT_NEAR(d.drive()->function(M_PI / 0.05), -0.5, 1e-12);
}

TEST(HamiltonianSpec, TextRoundTrip) {
  HamiltonianSpec h = sample_generic_chain(4, 8);
  h = h.with_drive(Drive{sample_generic_chain(4, 9).coeffs(), DriveFunction{1.0, 0.1}});
  h.set_metadata("note", "round trip");
  std::stringstream text;
  write_spec(text, h);
  const HamiltonianSpec back = read_spec(text);
  EXPECT_EQ(back.basis(), h.basis());
  EXPECT_EQ(back.coeffs(), h.coeffs());
  ASSERT_TRUE(back.drive());
  EXPECT_EQ(back.drive()->coeffs, h.drive()->coeffs);
  EXPECT_EQ(back.drive()->function.omega, 0.1);
  EXPECT_EQ(back.metadata().at("note"), "round trip");
  EXPECT_EQ(back.metadata().at("seed"), "8");

  std::stringstream broken("# hamlearn hamiltonian\nschema=1\nn_sites=2\nterm XQ 1\n");
  EXPECT_THROW(read_spec(broken), UsageError);
}

}  // namespace
}  // namespace hamlearn
