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
#include <string>
#include <string_view>
#include <vector>

namespace hamlearn {

/// Finite lattice with explicit neighbor lists. Only open 1-D chains are
/// constructed today.
class Lattice {
 public:
  static Lattice chain(std::size_t n_sites);

  std::size_t n_sites() const { return neighbors_.size(); }
  int dimension() const { return dimension_; }
  const std::vector<std::size_t>& neighbors(std::size_t site) const;
  bool adjacent(std::size_t a, std::size_t b) const;

 private:
  Lattice(int dimension, std::vector<std::vector<std::size_t>> neighbors);

  int dimension_ = 1;
  std::vector<std::vector<std::size_t>> neighbors_;
};

/// Sorted, duplicate-free subset of a lattice's sites.
class Region {
 public:
  Region() = default;
  Region(const Lattice& lattice, std::vector<std::size_t> sites);

  /// Sites [first, last] inclusive.
  static Region interval(const Lattice& lattice, std::size_t first,
                         std::size_t last);
  static Region whole(const Lattice& lattice);
  /// `size` consecutive sites placed in the middle of the chain (rounded
  /// towards site 0 when the leftover is odd).
  static Region centered(const Lattice& lattice, std::size_t size);

  const std::vector<std::size_t>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }
  bool empty() const { return sites_.empty(); }
  std::size_t lattice_sites() const { return lattice_sites_; }
  bool contains(std::size_t site) const;
  bool contains(const Region& other) const;
  std::uint64_t mask() const;

  std::string str() const;

  friend bool operator==(const Region&, const Region&) = default;

 private:
  std::size_t lattice_sites_ = 0;
  std::vector<std::size_t> sites_;
};

/// Hamiltonian families with explicitly enumerated term shapes.
enum class ModelFamily {
  /// All single-site and nearest-neighbor two-site Pauli terms.
  kGeneric2LocalChain,
  /// sigma^z on sites, sigma^x sigma^x and sigma^y sigma^y on bonds.
  kXYChain,
};

std::string_view model_name(ModelFamily model);
ModelFamily parse_model(std::string_view name);
std::vector<ModelFamily> all_models();

/// Sites of `region` whose every model term stays inside `region`.
Region interior(const Lattice& lattice, const Region& region,
                ModelFamily model);
/// region \ interior(region).
Region boundary(const Lattice& lattice, const Region& region,
                ModelFamily model);

}  // namespace hamlearn
