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

#include <algorithm>
#include <bit>
#include <random>
#include <string>

#include "hamlearn/errors.hpp"

namespace hamlearn {

std::size_t span(const PauliString& p) {
  std::uint64_t m = p.support_mask();
  if (m == 0) return 0;
  return static_cast<std::size_t>(63 - std::countl_zero(m) -
                                  std::countr_zero(m) + 1);
}

bool canonical_less(const PauliString& a, const PauliString& b) {
  std::size_t sa = span(a), sb = span(b);
  if (sa != sb) return sa < sb;
  int fa = std::countr_zero(a.support_mask());
  int fb = std::countr_zero(b.support_mask());
  if (fa != fb) return fa < fb;
  return letters_less(a, b);
}

OperatorBasis::OperatorBasis(std::vector<PauliString> elements, Region region,
                             std::size_t locality, BasisOrdering ordering)
    : elements_(std::move(elements)),
      region_(std::move(region)),
      locality_(locality),
      ordering_(ordering) {
  const std::uint64_t allowed = region_.mask();
  index_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    PauliString& p = elements_[i];
    if (p.n_sites() != region_.lattice_sites()) {
      throw UsageError("basis element " + p.letters() +
                       " does not match the lattice size");
    }
    if (p.is_identity()) throw UsageError("basis contains the identity");
    if ((p.support_mask() & ~allowed) != 0) {
      throw UsageError("basis element " + p.letters() + " leaves region " +
                       region_.str());
    }
    if (span(p) > locality_) {
      throw UsageError("basis element " + p.letters() + " exceeds locality " +
                       std::to_string(locality_));
    }
    p = p.with_sign(+1);
    if (!index_.emplace(p, i).second) {
      throw UsageError("duplicate basis element " + p.letters());
    }
  }
}

std::optional<std::size_t> OperatorBasis::index_of(const PauliString& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

OperatorBasis OperatorBasis::shuffled_within_locality(std::uint64_t seed) const {
  std::vector<PauliString> out = elements_;
  std::mt19937_64 rng(seed);
  auto begin = out.begin();
  while (begin != out.end()) {
    std::size_t k = span(*begin);
    auto end = std::find_if(begin, out.end(),
                            [k](const PauliString& p) { return span(p) != k; });
    std::shuffle(begin, end, rng);
    begin = end;
  }
  return OperatorBasis(std::move(out), region_, locality_,
                       BasisOrdering::kShuffledWithinLocality);
}

OperatorBasis OperatorBasis::prefix(std::size_t count) const {
  if (count > elements_.size()) {
    throw UsageError("prefix of " + std::to_string(count) + " exceeds basis size " +
                     std::to_string(elements_.size()));
  }
  return OperatorBasis(
      std::vector<PauliString>(elements_.begin(), elements_.begin() + count),
      region_, locality_, ordering_);
}

std::vector<std::string> OperatorBasis::labels() const {
  std::vector<std::string> out;
  out.reserve(elements_.size());
  for (const auto& p : elements_) out.push_back(p.letters());
  return out;
}

namespace {

constexpr PauliLetter kNonTrivial[] = {PauliLetter::X, PauliLetter::Y,
                                       PauliLetter::Z};
constexpr PauliLetter kAllLetters[] = {PauliLetter::I, PauliLetter::X,
                                       PauliLetter::Y, PauliLetter::Z};

// Fills sites (first, last) exclusive with every letter allowed by `region`.
void fill_window(const Region& region, std::size_t site, std::size_t last,
                 PauliString& current, std::vector<PauliString>& out) {
  if (site == last) {
    for (PauliLetter end : kNonTrivial) {
      current.set_letter(last, end);
      out.push_back(current);
    }
    current.set_letter(last, PauliLetter::I);
    return;
  }
  if (!region.contains(site)) {
    fill_window(region, site + 1, last, current, out);
    return;
  }
  for (PauliLetter l : kAllLetters) {
    current.set_letter(site, l);
    fill_window(region, site + 1, last, current, out);
  }
  current.set_letter(site, PauliLetter::I);
}

}  // namespace

OperatorBasis enumerate_basis(const Lattice& lattice, const Region& region,
                              std::size_t k) {
  if (region.empty()) throw UsageError("cannot enumerate on an empty region");
  if (k == 0) throw UsageError("locality k must be at least 1");
  if (region.lattice_sites() != lattice.n_sites()) {
    throw UsageError("region belongs to a different lattice");
  }
  if (lattice.dimension() != 1) {
    throw UsageError("only 1-D lattices are supported");
  }
  std::vector<PauliString> out;
  const std::size_t n = lattice.n_sites();
  for (std::size_t first : region.sites()) {
    for (std::size_t w = 1; w <= k && first + w - 1 < n; ++w) {
      std::size_t last = first + w - 1;
      if (!region.contains(last)) continue;
      PauliString current(n);
      if (w == 1) {
        for (PauliLetter l : kNonTrivial) {
          out.push_back(PauliString::single(n, first, l));
        }
        continue;
      }
      for (PauliLetter l : kNonTrivial) {
        current.set_letter(first, l);
        fill_window(region, first + 1, last, current, out);
      }
    }
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return OperatorBasis(std::move(out), region, k);
}

namespace {

std::vector<PauliString> site_terms(ModelFamily model, std::size_t n,
                                    std::size_t site) {
  std::vector<PauliString> out;
  if (model == ModelFamily::kGeneric2LocalChain) {
    for (PauliLetter l : kNonTrivial) out.push_back(PauliString::single(n, site, l));
  } else {
    out.push_back(PauliString::single(n, site, PauliLetter::Z));
  }
  return out;
}

std::vector<PauliString> bond_terms(ModelFamily model, std::size_t n,
                                    std::size_t a, std::size_t b) {
  std::vector<PauliString> out;
  auto pair = [&](PauliLetter la, PauliLetter lb) {
    PauliString p(n);
    p.set_letter(a, la);
    p.set_letter(b, lb);
    out.push_back(p);
  };
  if (model == ModelFamily::kGeneric2LocalChain) {
    for (PauliLetter la : kNonTrivial) {
      for (PauliLetter lb : kNonTrivial) pair(la, lb);
    }
  } else {
    pair(PauliLetter::X, PauliLetter::X);
    pair(PauliLetter::Y, PauliLetter::Y);
  }
  return out;
}

std::vector<PauliString> all_terms(ModelFamily model, const Lattice& lattice) {
  std::vector<PauliString> out;
  const std::size_t n = lattice.n_sites();
  for (std::size_t s = 0; s < n; ++s) {
    for (auto& p : site_terms(model, n, s)) out.push_back(p);
  }
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t : lattice.neighbors(s)) {
      if (t <= s) continue;
      for (auto& p : bond_terms(model, n, s, t)) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

Region support_region(const Lattice& lattice,
                      const std::vector<PauliString>& terms) {
  std::vector<std::size_t> sites;
  for (const auto& p : terms) {
    for (std::size_t s : p.support()) sites.push_back(s);
  }
  return Region(lattice, std::move(sites));
}

}  // namespace

OperatorBasis model_terms(ModelFamily model, const Lattice& lattice) {
  return OperatorBasis(all_terms(model, lattice), Region::whole(lattice), 2);
}

OperatorBasis term_basis_for_model(ModelFamily model, const Lattice& lattice,
                                   const Region& interior) {
  if (interior.empty()) throw UsageError("interior region is empty");
  const std::uint64_t inner = interior.mask();
  std::vector<PauliString> terms;
  for (auto& p : all_terms(model, lattice)) {
    if ((p.support_mask() & inner) != 0) terms.push_back(p);
  }
  Region region = support_region(lattice, terms);
  return OperatorBasis(std::move(terms), std::move(region), 2);
}

}  // namespace hamlearn
