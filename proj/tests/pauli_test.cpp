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

#include "hamlearn/pauli.hpp"

#include <gtest/gtest.h>

#include <random>

#include "dense_oracle.hpp"
#include "hamlearn/errors.hpp"

namespace hamlearn {
namespace {

using testing::cd;
using testing::dense;

cd phase_value(Phase p) { return to_complex(p); }

TEST(PauliString, ParsesAndPrintsLetters) {
  const PauliString p = PauliString::from_letters("-XIZY");
  EXPECT_EQ(p.n_sites(), 4u);
  EXPECT_EQ(p.sign(), -1);
  EXPECT_EQ(p.letters(), "XIZY");
  EXPECT_EQ(p.str(), "-XIZY");
  EXPECT_EQ(PauliString::from_letters("X_Z").letters(), "XIZ");
  EXPECT_EQ(p.letter(3), PauliLetter::Y);
  EXPECT_THROW(PauliString::from_letters("XQ"), UsageError);
  EXPECT_THROW(PauliString::from_letters(""), UsageError);
}

TEST(PauliString, SupportAndWeight) {
  const PauliString p = PauliString::from_letters("IXIZ");
  EXPECT_EQ(p.support(), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(p.weight(), 2u);
  EXPECT_TRUE(PauliString(5).is_identity());
  EXPECT_TRUE(PauliString(5).support().empty());
  PauliString q(3);
  q.set_letter(2, PauliLetter::Y);
  EXPECT_EQ(q.letters(), "IIY");
  EXPECT_EQ(PauliString::single(3, 0, PauliLetter::Z).letters(), "ZII");
}

TEST(PauliString, DenseMatrixIsHermitianUnitaryInvolution) {
  for (const auto& letters : testing::all_letter_strings(3)) {
    for (int sign : {+1, -1}) {
      const auto p = PauliString::from_letters(letters).with_sign(sign);
      const Eigen::MatrixXcd m = dense(p);
      EXPECT_LT((m * m - Eigen::MatrixXcd::Identity(8, 8)).norm(), 1e-15);
      EXPECT_LT((m - m.adjoint()).norm(), 1e-15);
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
      EXPECT_NEAR(svd.singularValues().maxCoeff(), 1.0, 1e-15);
      const PauliProduct sq = multiply(p, p);
      EXPECT_EQ(sq.phase, Phase::kPlusOne);
      EXPECT_TRUE(sq.result.is_identity());
      EXPECT_EQ(sq.result.sign(), +1);
    }
  }
}

TEST(Multiply, SingleQubitTable) {
  const auto x = PauliString::from_letters("X");
  const auto z = PauliString::from_letters("Z");
  PauliProduct xx = multiply(x, x);
  EXPECT_EQ(xx.phase, Phase::kPlusOne);
  EXPECT_TRUE(xx.result.is_identity());
  PauliProduct xz = multiply(x, z);
  EXPECT_EQ(xz.phase, Phase::kMinusI);
  EXPECT_EQ(xz.result.letters(), "Y");
  EXPECT_EQ(xz.result.sign(), +1);
}

TEST(Multiply, TwoQubitExample) {
  const PauliProduct r = multiply(PauliString::from_letters("XZ"),
                                  PauliString::from_letters("ZZ"));
  EXPECT_EQ(r.phase, Phase::kMinusI);
  EXPECT_EQ(r.result.letters(), "YI");
  const Eigen::MatrixXcd lhs = dense("XZ") * dense("ZZ");
  EXPECT_LT((lhs - phase_value(r.phase) * dense(r.result)).norm(), 1e-15);
}

TEST(Multiply, ExhaustiveAgainstDenseMatrices) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto all = testing::all_letter_strings(n);
    for (const auto& a : all) {
      for (const auto& b : all) {
        for (int sa : {+1, -1}) {
          const auto p = PauliString::from_letters(a).with_sign(sa);
          const auto q = PauliString::from_letters(b);
          const PauliProduct r = multiply(p, q);
          const Eigen::MatrixXcd expect = dense(p) * dense(q);
          ASSERT_EQ((expect - phase_value(r.phase) * dense(r.result)).cwiseAbs().maxCoeff(), 0.0)
              << p.str() << " * " << q.str();
        }
      }
    }
  }
}

TEST(Multiply, CommutationMatchesSymplecticOverlap) {
  for (const auto& a : testing::all_letter_strings(3)) {
    for (const auto& b : testing::all_letter_strings(3)) {
      const auto p = PauliString::from_letters(a);
      const auto q = PauliString::from_letters(b);
      const auto pq = multiply(p, q);
      const auto qp = multiply(q, p);
      ASSERT_TRUE(pq.result == qp.result);
      const cd ratio = phase_value(pq.phase) / phase_value(qp.phase);
      EXPECT_EQ(ratio, p.commutes_with(q) ? cd(1.0) : cd(-1.0));
      const Eigen::MatrixXcd comm = dense(p) * dense(q) - dense(q) * dense(p);
      EXPECT_EQ(comm.cwiseAbs().maxCoeff() == 0.0, p.commutes_with(q));
    }
  }
}

TEST(Multiply, Associative) {
  std::mt19937_64 rng(11);
  const auto all = testing::all_letter_strings(4);
  std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = PauliString::from_letters(all[pick(rng)]);
    const auto b = PauliString::from_letters(all[pick(rng)]).with_sign(-1);
    const auto c = PauliString::from_letters(all[pick(rng)]);
    const auto ab = multiply(a, b);
    const auto ab_c = multiply(ab.result, c);
    const auto bc = multiply(b, c);
    const auto a_bc = multiply(a, bc.result);
    EXPECT_TRUE(ab_c.result == a_bc.result);
    EXPECT_EQ(phase_value(ab.phase) * phase_value(ab_c.phase),
              phase_value(bc.phase) * phase_value(a_bc.phase));
  }
}

TEST(Multiply, RejectsMismatchedSizes) {
  EXPECT_THROW(multiply(PauliString::from_letters("X"), PauliString::from_letters("XX")),
               UsageError);
  EXPECT_THROW(commutator_observable(PauliString::from_letters("X"),
                                     PauliString::from_letters("XX")),
               UsageError);
}

TEST(CommutatorObservable, Examples) {
  EXPECT_FALSE(commutator_observable(PauliString::from_letters("ZI"),
                                     PauliString::from_letters("ZZ")));
  const auto xz = commutator_observable(PauliString::from_letters("X"),
                                        PauliString::from_letters("Z"));
  ASSERT_TRUE(xz);
  EXPECT_EQ(xz->coeff, 2.0);
  EXPECT_EQ(xz->observable.letters(), "Y");

  const auto a = PauliString::from_letters("XY");
  const auto s = PauliString::from_letters("ZI");
  const auto t = commutator_observable(a, s);
  ASSERT_TRUE(t);
  const Eigen::MatrixXcd expect = cd(0, 1) * (dense(a) * dense(s) - dense(s) * dense(a));
  EXPECT_LT((expect - t->coeff * dense(t->observable)).norm(), 1e-15);
}

TEST(CommutatorObservable, ExhaustiveAgainstDenseCommutators) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto all = testing::all_letter_strings(n);
    for (const auto& x : all) {
      for (const auto& y : all) {
        for (int sign : {+1, -1}) {
          const auto a = PauliString::from_letters(x).with_sign(sign);
          const auto s = PauliString::from_letters(y);
          const Eigen::MatrixXcd expect =
              cd(0, 1) * (dense(a) * dense(s) - dense(s) * dense(a));
          const auto t = commutator_observable(a, s);
          if (!t) {
            ASSERT_EQ(expect.cwiseAbs().maxCoeff(), 0.0) << a.str() << ", " << s.str();
            continue;
          }
          EXPECT_TRUE(t->coeff == 2.0 || t->coeff == -2.0);
          EXPECT_EQ(t->observable.sign(), +1);
          ASSERT_EQ((expect - t->coeff * dense(t->observable)).cwiseAbs().maxCoeff(), 0.0)
              << a.str() << ", " << s.str();
        }
      }
    }
  }
}

TEST(LettersLess, OrdersSiteZeroFirst) {
  EXPECT_TRUE(letters_less(PauliString::from_letters("IZ"), PauliString::from_letters("XI")));
  EXPECT_TRUE(letters_less(PauliString::from_letters("XZ"), PauliString::from_letters("YI")));
  EXPECT_FALSE(letters_less(PauliString::from_letters("-XI"), PauliString::from_letters("XI")));
}

}  // namespace
}  // namespace hamlearn
