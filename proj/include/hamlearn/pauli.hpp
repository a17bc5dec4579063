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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hamlearn {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(PauliLetter letter);

/// Signed tensor product of single-site Pauli operators.
///
/// Stored symplectically: bit j of `x_bits` / `z_bits` holds the X / Z
/// component on site j, with Y = i X Z. The represented operator is
/// sign * prod_j i^{x_j z_j} X_j^{x_j} Z_j^{z_j}, which is Hermitian and
/// squares to the identity. Chains are limited to 64 sites.
class PauliString {
 public:
  static constexpr std::size_t kMaxSites = 64;

  PauliString() = default;
  /// Identity on `n_sites` sites.
  explicit PauliString(std::size_t n_sites);
  PauliString(std::size_t n_sites, std::uint64_t x_bits, std::uint64_t z_bits,
              int sign = +1);

  /// Parses "XIZY", optionally prefixed by '+' or '-'. '_' is accepted for I.
  static PauliString from_letters(std::string_view text);
  static PauliString single(std::size_t n_sites, std::size_t site,
                            PauliLetter letter);

  std::size_t n_sites() const { return n_sites_; }
  std::uint64_t x_bits() const { return x_; }
  std::uint64_t z_bits() const { return z_; }
  std::uint64_t support_mask() const { return x_ | z_; }
  int sign() const { return sign_; }

  PauliLetter letter(std::size_t site) const;
  void set_letter(std::size_t site, PauliLetter letter);

  std::vector<std::size_t> support() const;
  std::size_t weight() const;
  bool is_identity() const { return (x_ | z_) == 0; }

  /// Letters only, site 0 first, e.g. "XIZ".
  std::string letters() const;
  /// Signed form, e.g. "+XIZ".
  std::string str() const;

  bool commutes_with(const PauliString& other) const;
  bool same_letters(const PauliString& other) const {
    return n_sites_ == other.n_sites_ && x_ == other.x_ && z_ == other.z_;
  }
  PauliString with_sign(int sign) const;

  friend bool operator==(const PauliString& a, const PauliString& b) {
    return a.same_letters(b) && a.sign_ == b.sign_;
  }

 private:
  std::size_t n_sites_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;
  int sign_ = +1;
};

/// Lexicographic order on letter strings, site 0 most significant,
/// I < X < Y < Z. Signs are ignored.
bool letters_less(const PauliString& a, const PauliString& b);

struct PauliStringHash {
  std::size_t operator()(const PauliString& p) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}(p.x_bits());
    h ^= std::hash<std::uint64_t>{}(p.z_bits()) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
    return h ^ (p.n_sites() * 0x100000001b3ULL);
  }
};

/// Letter-only equality, for hash containers keyed on the operator shape.
struct PauliLettersEqual {
  bool operator()(const PauliString& a, const PauliString& b) const noexcept {
    return a.same_letters(b);
  }
};

/// Power of i: phase = i^k.
enum class Phase : std::uint8_t { kPlusOne = 0, kPlusI = 1, kMinusOne = 2, kMinusI = 3 };

std::complex<double> to_complex(Phase phase);

struct PauliProduct {
  Phase phase = Phase::kPlusOne;
  PauliString result;
};

/// phase * result == P Q as matrices; result.sign() == P.sign() * Q.sign().
PauliProduct multiply(const PauliString& p, const PauliString& q);

/// i[A, S] == coeff * observable, with coeff in {+2, -2} and observable
/// carrying sign +1.
struct CommutatorTerm {
  double coeff = 0.0;
  PauliString observable;
};

/// Returns std::nullopt when A and S commute.
std::optional<CommutatorTerm> commutator_observable(const PauliString& a,
                                                    const PauliString& s);

}  // namespace hamlearn
