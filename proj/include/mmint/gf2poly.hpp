// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mmint::gf2 {

// Polynomial over GF(2) stored as a packed little-endian coefficient vector:
// bit i is the coefficient of x^i, so bit 0 is the constant term.  The word
// vector is kept trimmed (no high zero words), which makes equality and
// hashing independent of how a value was produced.  The zero polynomial is
// the empty vector and has no degree.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::uint64_t bits);

  static Poly one() { return Poly(1); }
  static Poly monomial(int degree);
  // Parses an MSB-first binary string such as "10101100101100".
  static Poly from_binary(std::string_view msb_first);
  // Big-endian byte image (byte 0 holds the highest coefficients).
  static Poly from_bytes_be(std::span<const std::uint8_t> bytes);

  bool is_zero() const { return words_.empty(); }
  bool is_one() const { return words_.size() == 1 && words_[0] == 1; }

  // Index of the highest set coefficient; nullopt for the zero polynomial.
  std::optional<int> degree() const;

  bool bit(int i) const;
  void set_bit(int i, bool value);
  std::uint64_t low_bits() const { return words_.empty() ? 0 : words_[0]; }

  std::string to_binary() const;  // MSB-first; "0" for the zero polynomial
  void to_bytes_be(std::span<std::uint8_t> out) const;

  friend bool operator==(const Poly&, const Poly&) = default;

  Poly& operator^=(const Poly& rhs);
  friend Poly operator^(Poly lhs, const Poly& rhs) {
    lhs ^= rhs;
    return lhs;
  }
  // Multiplies by x^k.
  Poly shifted_left(int k) const;

  std::span<const std::uint64_t> words() const { return words_; }

 private:
  void trim();
  std::vector<std::uint64_t> words_;
};

Poly add(const Poly& a, const Poly& b);
Poly mul(const Poly& a, const Poly& b);

struct DivMod {
  Poly quotient;
  Poly remainder;
};

// Polynomial division with remainder; throws std::invalid_argument when the
// divisor is the zero polynomial.
DivMod divmod(const Poly& a, const Poly& m);
Poly mod(const Poly& a, const Poly& m);

// Greatest common divisor.  Over GF(2) the nonzero gcd representative is
// unique, so no normalization step is needed.  Throws when both inputs are
// zero.
Poly gcd(Poly a, Poly b);

struct Egcd {
  Poly g;
  Poly u;
  Poly v;  // u*a + v*b = g
};
Egcd egcd(const Poly& a, const Poly& b);

// Modular inverse; throws std::invalid_argument naming the common factor
// when gcd(a, m) != 1.
Poly inv_mod(const Poly& a, const Poly& m);

// Irreducibility by exhaustive trial division up to degree/2.  Throws for
// constant or zero input.
bool is_irreducible(const Poly& p);

std::size_t count_irreducibles(int degree);

// Deterministic ascending enumeration of irreducible polynomials of exactly
// the given degree; throws (stating how many exist) when count exceeds the
// available supply.
std::vector<Poly> enumerate_irreducibles(int degree, std::size_t count);

// Chinese-Remainder combination over GF(2)[x].  Input pairs are
// (modulus, residue); moduli must be pairwise coprime and each residue must
// have degree below its modulus.  The result R is the unique polynomial with
// degree(R) < sum of moduli degrees and R mod m_i = r_i for every pair.
Poly crt_combine(std::span<const std::pair<Poly, Poly>> systems);

}  // namespace mmint::gf2

template <>
struct std::hash<mmint::gf2::Poly> {
  std::size_t operator()(const mmint::gf2::Poly& p) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t w : p.words()) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};
