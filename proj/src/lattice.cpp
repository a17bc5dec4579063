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

#include "hamlearn/lattice.hpp"

#include <algorithm>
#include <cstdint>

#include "hamlearn/errors.hpp"

namespace hamlearn {

Lattice::Lattice(int dimension, std::vector<std::vector<std::size_t>> neighbors)
    : dimension_(dimension), neighbors_(std::move(neighbors)) {}

Lattice Lattice::chain(std::size_t n_sites) {
  if (n_sites == 0) throw UsageError("lattice needs at least one site");
  std::vector<std::vector<std::size_t>> nb(n_sites);
  for (std::size_t i = 0; i + 1 < n_sites; ++i) {
    nb[i].push_back(i + 1);
    nb[i + 1].push_back(i);
  }
  for (auto& list : nb) std::sort(list.begin(), list.end());
  return Lattice(1, std::move(nb));
}

const std::vector<std::size_t>& Lattice::neighbors(std::size_t site) const {
  if (site >= n_sites()) throw UsageError("site index out of range");
  return neighbors_[site];
}

bool Lattice::adjacent(std::size_t a, std::size_t b) const {
  const auto& nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

Region::Region(const Lattice& lattice, std::vector<std::size_t> sites)
    : lattice_sites_(lattice.n_sites()), sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
  if (!sites_.empty() && sites_.back() >= lattice_sites_) {
    throw UsageError("region site " + std::to_string(sites_.back()) +
                     " outside lattice of " + std::to_string(lattice_sites_) +
                     " sites");
  }
}

Region Region::interval(const Lattice& lattice, std::size_t first,
                        std::size_t last) {
  if (first > last) throw UsageError("empty interval");
  std::vector<std::size_t> sites;
  for (std::size_t i = first; i <= last; ++i) sites.push_back(i);
  return Region(lattice, std::move(sites));
}

Region Region::whole(const Lattice& lattice) {
  return interval(lattice, 0, lattice.n_sites() - 1);
}

Region Region::centered(const Lattice& lattice, std::size_t size) {
  if (size == 0 || size > lattice.n_sites()) {
    throw UsageError("centered region size " + std::to_string(size) +
                     " does not fit a lattice of " +
                     std::to_string(lattice.n_sites()) + " sites");
  }
  std::size_t first = (lattice.n_sites() - size) / 2;
  return interval(lattice, first, first + size - 1);
}

bool Region::contains(std::size_t site) const {
  return std::binary_search(sites_.begin(), sites_.end(), site);
}

bool Region::contains(const Region& other) const {
  return std::includes(sites_.begin(), sites_.end(), other.sites_.begin(),
                       other.sites_.end());
}

std::uint64_t Region::mask() const {
  std::uint64_t m = 0;
  for (std::size_t s : sites_) m |= std::uint64_t{1} << s;
  return m;
}

std::string Region::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(sites_[i]);
  }
  return out + "}";
}

std::string_view model_name(ModelFamily model) {
  switch (model) {
    case ModelFamily::kGeneric2LocalChain:
      return "generic-2-local-chain";
    case ModelFamily::kXYChain:
      return "xy-chain";
  }
  return "unknown";
}

ModelFamily parse_model(std::string_view name) {
  for (ModelFamily m : all_models()) {
    if (model_name(m) == name) return m;
  }
  throw UsageError("unknown model family '" + std::string(name) + "'");
}

std::vector<ModelFamily> all_models() {
  return {ModelFamily::kGeneric2LocalChain, ModelFamily::kXYChain};
}

Region interior(const Lattice& lattice, const Region& region,
                ModelFamily /*model*/) {
  if (region.lattice_sites() != lattice.n_sites()) {
    throw UsageError("region belongs to a different lattice");
  }
  // Both families couple exactly the lattice's nearest neighbors, so a site
  // is interior when all of its neighbors lie in the region.
  std::vector<std::size_t> inner;
  for (std::size_t s : region.sites()) {
    const auto& nb = lattice.neighbors(s);
    if (std::all_of(nb.begin(), nb.end(),
                    [&](std::size_t t) { return region.contains(t); })) {
      inner.push_back(s);
    }
  }
  return Region(lattice, std::move(inner));
}

Region boundary(const Lattice& lattice, const Region& region,
                ModelFamily model) {
  Region inner = interior(lattice, region, model);
  std::vector<std::size_t> edge;
  for (std::size_t s : region.sites()) {
    if (!inner.contains(s)) edge.push_back(s);
  }
  return Region(lattice, std::move(edge));
}

}  // namespace hamlearn
