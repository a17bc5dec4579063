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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hamlearn/lattice.hpp"
#include "hamlearn/pauli.hpp"

namespace hamlearn {

enum class BasisOrdering {
  kSupportSizeAscending,
  kShuffledWithinLocality,
};

/// Length of the smallest contiguous window containing the support (0 for
/// the identity).
std::size_t span(const PauliString& p);

/// (span, first support site, letters) ordering used for every basis.
bool canonical_less(const PauliString& a, const PauliString& b);

/// Ordered list of distinct, non-identity Pauli strings, each supported in
/// `region` within a window of at most `locality` consecutive sites.
class OperatorBasis {
 public:
  OperatorBasis() = default;
  OperatorBasis(std::vector<PauliString> elements, Region region,
                std::size_t locality,
                BasisOrdering ordering = BasisOrdering::kSupportSizeAscending);

  const std::vector<PauliString>& elements() const { return elements_; }
  const PauliString& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  std::size_t n_sites() const { return region_.lattice_sites(); }
  const Region& region() const { return region_; }
  std::size_t locality() const { return locality_; }
  BasisOrdering ordering() const { return ordering_; }

  /// Position of the element with the same letters, if present.
  std::optional<std::size_t> index_of(const PauliString& p) const;

  /// Shuffles each equal-span block with a generator seeded by `seed`;
  /// blocks stay in ascending span order.
  OperatorBasis shuffled_within_locality(std::uint64_t seed) const;

  /// First `count` elements.
  OperatorBasis prefix(std::size_t count) const;

  std::vector<std::string> labels() const;

  friend bool operator==(const OperatorBasis& a, const OperatorBasis& b) {
    return a.region_ == b.region_ && a.elements_ == b.elements_;
  }

 private:
  std::vector<PauliString> elements_;
  Region region_;
  std::size_t locality_ = 0;
  BasisOrdering ordering_ = BasisOrdering::kSupportSizeAscending;
  std::unordered_map<PauliString, std::size_t, PauliStringHash,
                     PauliLettersEqual>
      index_;
};

/// Every non-identity Pauli string supported in `region` and inside some
/// window of `k` consecutive lattice sites, in canonical order.
OperatorBasis enumerate_basis(const Lattice& lattice, const Region& region,
                              std::size_t k);

/// All terms of `model` on the whole lattice, canonical order.
OperatorBasis model_terms(ModelFamily model, const Lattice& lattice);

/// Terms of `model` whose support intersects `interior`.
OperatorBasis term_basis_for_model(ModelFamily model, const Lattice& lattice,
                                   const Region& interior);

}  // namespace hamlearn
