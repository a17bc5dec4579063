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

#include "hamlearn/operator_basis.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "dense_oracle.hpp"
#include "hamlearn/errors.hpp"

namespace hamlearn {
namespace {

// Every non-identity string on the lattice, filtered by region and window
// length directly from its letters.
std::set<std::string> brute_force(std::size_t n, const Region& region, std::size_t k) {
  std::set<std::string> out;
  for (const auto& letters : testing::all_letter_strings(n)) {
    std::size_t first = n, last = 0;
    bool inside = true;
    for (std::size_t s = 0; s < n; ++s) {
      if (letters[s] == 'I') continue;
      first = std::min(first, s);
      last = std::max(last, s);
      inside = inside && region.contains(s);
    }
    if (first == n || !inside || last - first + 1 > k) continue;
    out.insert(letters);
  }
  return out;
}

std::set<std::string> as_set(const OperatorBasis& b) {
  auto labels = b.labels();
  return {labels.begin(), labels.end()};
}

TEST(EnumerateBasis, SingleSiteAndAdjacentPair) {
  const Lattice l = Lattice::chain(4);
  EXPECT_EQ(enumerate_basis(l, Region(l, {2}), 1).size(), 3u);
  EXPECT_EQ(enumerate_basis(l, Region(l, {1, 2}), 2).size(), 15u);
}

TEST(EnumerateBasis, MatchesBruteForce) {
  const Lattice l = Lattice::chain(7);
  for (std::size_t k = 1; k <= 5; ++k) {
    for (const Region& r : {Region::interval(l, 1, 5), Region(l, {0, 1, 3, 4, 6}),
                            Region::whole(l)}) {
      const OperatorBasis b = enumerate_basis(l, r, k);
      EXPECT_EQ(b.size(), as_set(b).size());
      EXPECT_EQ(as_set(b), brute_force(7, r, k)) << "k=" << k << " region " << r.str();
    }
  }
}

TEST(EnumerateBasis, FourLocalOnSixSites) {
  const Lattice l = Lattice::chain(12);
  const Region inner = Region::interval(l, 3, 8);
  const OperatorBasis b = enumerate_basis(l, inner, 4);
  EXPECT_EQ(b.size(), brute_force(12, inner, 4).size());
  std::map<std::size_t, std::size_t> by_span;
  for (const auto& p : b.elements()) ++by_span[span(p)];
  EXPECT_EQ(by_span[1], 18u);
  EXPECT_EQ(by_span[2], 45u);
  EXPECT_EQ(by_span[3], 144u);
  EXPECT_EQ(by_span[4], 432u);
}

TEST(EnumerateBasis, CanonicalOrderAndInvariants) {
  const Lattice l = Lattice::chain(6);
  const Region r = Region::interval(l, 1, 4);
  const OperatorBasis b = enumerate_basis(l, r, 3);
  EXPECT_TRUE(std::is_sorted(b.elements().begin(), b.elements().end(), canonical_less));
  for (std::size_t i = 1; i < b.size(); ++i) EXPECT_LE(span(b[i - 1]), span(b[i]));
  for (const auto& p : b.elements()) {
    EXPECT_FALSE(p.is_identity());
    EXPECT_EQ(p.support_mask() & ~r.mask(), 0u);
    EXPECT_LE(span(p), 3u);
    EXPECT_EQ(b.index_of(p).value(), &p - b.elements().data());
  }
  EXPECT_THROW(enumerate_basis(l, Region(), 2), UsageError);
  EXPECT_THROW(enumerate_basis(l, r, 0), UsageError);
}

TEST(OperatorBasis, RejectsInvalidElements) {
  const Lattice l = Lattice::chain(4);
  const Region r = Region::interval(l, 0, 2);
  auto p = [](const char* s) { return PauliString::from_letters(s); };
  EXPECT_NO_THROW(OperatorBasis({p("XIII"), p("IZZI")}, r, 2));
  EXPECT_THROW(OperatorBasis({p("XIII"), p("XIII")}, r, 2), UsageError);
  EXPECT_THROW(OperatorBasis({p("IIII")}, r, 2), UsageError);
  EXPECT_THROW(OperatorBasis({p("IIIX")}, r, 2), UsageError);
  EXPECT_THROW(OperatorBasis({p("XIZI")}, r, 2), UsageError);
  EXPECT_THROW(OperatorBasis({p("XII")}, r, 2), UsageError);
}

TEST(OperatorBasis, ShuffleWithinLocalityIsDeterministicPermutation) {
  const Lattice l = Lattice::chain(8);
  const OperatorBasis b = enumerate_basis(l, Region::interval(l, 1, 6), 4);
  const OperatorBasis s1 = b.shuffled_within_locality(5);
  const OperatorBasis s2 = b.shuffled_within_locality(5);
  const OperatorBasis s3 = b.shuffled_within_locality(6);
  EXPECT_EQ(s1, s2);
  EXPECT_FALSE(s1 == s3);
  EXPECT_FALSE(s1 == b);
  EXPECT_EQ(as_set(s1), as_set(b));
  EXPECT_EQ(s1.ordering(), BasisOrdering::kShuffledWithinLocality);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(span(s1[i]), span(b[i]));
}

TEST(OperatorBasis, PrefixKeepsOrder) {
  const Lattice l = Lattice::chain(4);
  const OperatorBasis b = enumerate_basis(l, Region::whole(l), 2);
  const OperatorBasis p = b.prefix(5);
  ASSERT_EQ(p.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_TRUE(p[i] == b[i]);
  EXPECT_THROW(b.prefix(b.size() + 1), UsageError);
}

TEST(TermBasis, GenericChainOnMiddleSix) {
  const Lattice l = Lattice::chain(12);
  const Region inner = Region::interval(l, 3, 8);
  const OperatorBasis terms = term_basis_for_model(ModelFamily::kGeneric2LocalChain, l, inner);
  // 6 sites x 3 letters plus 7 bonds touching the interior x 9 letter pairs.
  std::set<std::string> expect;
  const OperatorBasis all = model_terms(ModelFamily::kGeneric2LocalChain, l);
  for (const auto& p : all.elements()) {
    if (p.support_mask() & inner.mask()) expect.insert(p.letters());
  }
  EXPECT_EQ(terms.size(), 81u);
  EXPECT_EQ(as_set(terms), expect);
  EXPECT_EQ(terms.region(), Region::interval(l, 2, 9));
}

TEST(TermBasis, ModelTermCounts) {
  const Lattice l = Lattice::chain(12);
  EXPECT_EQ(model_terms(ModelFamily::kGeneric2LocalChain, l).size(), 3u * 12 + 9u * 11);
  EXPECT_EQ(model_terms(ModelFamily::kXYChain, Lattice::chain(4)).size(), 10u);
  const Lattice two = Lattice::chain(2);
  EXPECT_EQ(term_basis_for_model(ModelFamily::kGeneric2LocalChain, two, Region::whole(two)).size(),
            15u);
  EXPECT_THROW(term_basis_for_model(ModelFamily::kGeneric2LocalChain, l, Region()), UsageError);
}

TEST(TermBasis, XYChainShapes) {
  const Lattice l = Lattice::chain(8);
  const OperatorBasis terms =
      term_basis_for_model(ModelFamily::kXYChain, l, Region::interval(l, 2, 5));
  std::set<std::string> shapes;
  for (const auto& p : terms.elements()) {
    std::string s;
    for (char c : p.letters()) {
      if (c != 'I') s += c;
    }
    shapes.insert(s);
  }
  EXPECT_EQ(shapes, (std::set<std::string>{"Z", "XX", "YY"}));
  EXPECT_EQ(terms.size(), 4u + 2u * 5u);
}

}  // namespace
}  // namespace hamlearn
