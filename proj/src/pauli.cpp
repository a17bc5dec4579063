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

#include <bit>

#include "hamlearn/errors.hpp"

namespace hamlearn {

namespace {

std::uint64_t site_bit(std::size_t site) { return std::uint64_t{1} << site; }

std::uint64_t low_mask(std::size_t n_sites) {
  return n_sites >= 64 ? ~std::uint64_t{0} : site_bit(n_sites) - 1;
}

void require_same_size(const PauliString& a, const PauliString& b) {
  if (a.n_sites() != b.n_sites()) {
    throw UsageError("Pauli strings act on different numbers of sites (" +
                     std::to_string(a.n_sites()) + " vs " +
                     std::to_string(b.n_sites()) + ")");
  }
}

int letter_rank(bool x, bool z) {
  if (x) return z ? 2 : 1;
  return z ? 3 : 0;
}

}  // namespace

char to_char(PauliLetter letter) { return "IXYZ"[static_cast<int>(letter)]; }

PauliString::PauliString(std::size_t n_sites) : n_sites_(n_sites) {
  if (n_sites > kMaxSites) {
    throw UsageError("Pauli strings support at most 64 sites");
  }
}

PauliString::PauliString(std::size_t n_sites, std::uint64_t x_bits,
                         std::uint64_t z_bits, int sign)
    : PauliString(n_sites) {
  if (((x_bits | z_bits) & ~low_mask(n_sites)) != 0) {
    throw UsageError("Pauli bits set beyond n_sites");
  }
  if (sign != 1 && sign != -1) throw UsageError("Pauli sign must be +1 or -1");
  x_ = x_bits;
  z_ = z_bits;
  sign_ = sign;
}

PauliString PauliString::from_letters(std::string_view text) {
  int sign = +1;
  if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
    sign = text.front() == '-' ? -1 : +1;
    text.remove_prefix(1);
  }
  if (text.empty()) throw UsageError("Pauli string has no letters");
  PauliString p(text.size());
  p.sign_ = sign;
  for (std::size_t j = 0; j < text.size(); ++j) {
    switch (text[j]) {
      case 'I':
      case '_':
        break;
      case 'X':
        p.x_ |= site_bit(j);
        break;
      case 'Y':
        p.x_ |= site_bit(j);
        p.z_ |= site_bit(j);
        break;
      case 'Z':
        p.z_ |= site_bit(j);
        break;
      default:
        throw UsageError("invalid Pauli letter '" + std::string(1, text[j]) +
                         "' in \"" + std::string(text) + "\"");
    }
  }
  return p;
}

PauliString PauliString::single(std::size_t n_sites, std::size_t site,
                                PauliLetter letter) {
  PauliString p(n_sites);
  p.set_letter(site, letter);
  return p;
}

PauliLetter PauliString::letter(std::size_t site) const {
  if (site >= n_sites_) throw UsageError("site index out of range");
  bool x = (x_ >> site) & 1U;
  bool z = (z_ >> site) & 1U;
  return static_cast<PauliLetter>(letter_rank(x, z));
}

void PauliString::set_letter(std::size_t site, PauliLetter letter) {
  if (site >= n_sites_) throw UsageError("site index out of range");
  x_ &= ~site_bit(site);
  z_ &= ~site_bit(site);
  if (letter == PauliLetter::X || letter == PauliLetter::Y) x_ |= site_bit(site);
  if (letter == PauliLetter::Z || letter == PauliLetter::Y) z_ |= site_bit(site);
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> sites;
  for (std::uint64_t m = support_mask(); m != 0; m &= m - 1) {
    sites.push_back(static_cast<std::size_t>(std::countr_zero(m)));
  }
  return sites;
}

std::size_t PauliString::weight() const {
  return static_cast<std::size_t>(std::popcount(support_mask()));
}

std::string PauliString::letters() const {
  std::string out(n_sites_, 'I');
  for (std::size_t j = 0; j < n_sites_; ++j) out[j] = to_char(letter(j));
  return out;
}

std::string PauliString::str() const {
  return (sign_ < 0 ? "-" : "+") + letters();
}

bool PauliString::commutes_with(const PauliString& other) const {
  require_same_size(*this, other);
  return (std::popcount((x_ & other.z_) ^ (z_ & other.x_)) & 1) == 0;
}

PauliString PauliString::with_sign(int sign) const {
  return PauliString(n_sites_, x_, z_, sign);
}

bool letters_less(const PauliString& a, const PauliString& b) {
  std::size_t n = std::min(a.n_sites(), b.n_sites());
  for (std::size_t j = 0; j < n; ++j) {
    int ra = static_cast<int>(a.letter(j));
    int rb = static_cast<int>(b.letter(j));
    if (ra != rb) return ra < rb;
  }
  return a.n_sites() < b.n_sites();
}

std::complex<double> to_complex(Phase phase) {
  switch (phase) {
    case Phase::kPlusOne:
      return {1.0, 0.0};
    case Phase::kPlusI:
      return {0.0, 1.0};
    case Phase::kMinusOne:
      return {-1.0, 0.0};
    case Phase::kMinusI:
      return {0.0, -1.0};
  }
  return {1.0, 0.0};
}

PauliProduct multiply(const PauliString& p, const PauliString& q) {
  require_same_size(p, q);
  // With P = i^{x.z} X^x Z^z per site:
  //   P1 P2 = i^{x1.z1 + x2.z2 + 2 z1.x2 - x3.z3} P3,  x3 = x1^x2, z3 = z1^z2.
  std::uint64_t x3 = p.x_bits() ^ q.x_bits();
  std::uint64_t z3 = p.z_bits() ^ q.z_bits();
  int k = std::popcount(p.x_bits() & p.z_bits()) +
          std::popcount(q.x_bits() & q.z_bits()) +
          2 * std::popcount(p.z_bits() & q.x_bits()) -
          std::popcount(x3 & z3);
  k = ((k % 4) + 4) % 4;
  return {static_cast<Phase>(k),
          PauliString(p.n_sites(), x3, z3, p.sign() * q.sign())};
}

std::optional<CommutatorTerm> commutator_observable(const PauliString& a,
                                                    const PauliString& s) {
  require_same_size(a, s);
  if (a.commutes_with(s)) return std::nullopt;
  // Anticommuting: i[A,S] = 2i AS = 2 i^{k+1} sign R, and k is odd.
  PauliProduct prod = multiply(a, s);
  int k = static_cast<int>(prod.phase);
  double real_part = ((k + 1) % 4 == 0) ? 1.0 : -1.0;
  return CommutatorTerm{2.0 * real_part * prod.result.sign(),
                        prod.result.with_sign(+1)};
}

}  // namespace hamlearn
