// SPDX-FileCopyrightText: © 2026 mmint contributors
// SPDX-License-Identifier: Apache-2.0

#include "mmint/gf2poly.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace mmint::gf2 {

namespace {
constexpr int kWordBits = 64;
}

Poly::Poly(std::uint64_t bits) {
  if (bits != 0) words_.push_back(bits);
}

Poly Poly::monomial(int degree) {
  if (degree < 0) throw std::invalid_argument("monomial degree must be non-negative");
  Poly p;
  p.set_bit(degree, true);
  return p;
}

Poly Poly::from_binary(std::string_view msb_first) {
  if (msb_first.empty()) throw std::invalid_argument("empty binary polynomial string");
  Poly p;
  const int n = static_cast<int>(msb_first.size());
  for (int i = 0; i < n; ++i) {
    const char c = msb_first[static_cast<std::size_t>(i)];
    if (c != '0' && c != '1')
      throw std::invalid_argument(std::string("invalid character '") + c + "' in binary polynomial string");
    if (c == '1') p.set_bit(n - 1 - i, true);
  }
  return p;
}

Poly Poly::from_bytes_be(std::span<const std::uint8_t> bytes) {
  Poly p;
  const int n = static_cast<int>(bytes.size());
  for (int i = 0; i < n; ++i) {
    const std::uint8_t byte = bytes[static_cast<std::size_t>(n - 1 - i)];
    for (int b = 0; b < 8; ++b)
      if (byte & (1u << b)) p.set_bit(i * 8 + b, true);
  }
  return p;
}

std::optional<int> Poly::degree() const {
  if (words_.empty()) return std::nullopt;
  const std::uint64_t top = words_.back();
  return static_cast<int>(words_.size() - 1) * kWordBits + (kWordBits - 1 - std::countl_zero(top));
}

bool Poly::bit(int i) const {
  if (i < 0) return false;
  const std::size_t w = static_cast<std::size_t>(i) / kWordBits;
  if (w >= words_.size()) return false;
  return (words_[w] >> (static_cast<std::size_t>(i) % kWordBits)) & 1u;
}

void Poly::set_bit(int i, bool value) {
  if (i < 0) throw std::invalid_argument("negative coefficient index");
  const std::size_t w = static_cast<std::size_t>(i) / kWordBits;
  const std::uint64_t mask = 1ull << (static_cast<std::size_t>(i) % kWordBits);
  if (value) {
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] |= mask;
  } else if (w < words_.size()) {
    words_[w] &= ~mask;
    trim();
  }
}

std::string Poly::to_binary() const {
  const auto d = degree();
  if (!d) return "0";
  std::string out;
  out.reserve(static_cast<std::size_t>(*d) + 1);
  for (int i = *d; i >= 0; --i) out.push_back(bit(i) ? '1' : '0');
  return out;
}

void Poly::to_bytes_be(std::span<std::uint8_t> out) const {
  const auto d = degree();
  if (d && *d >= static_cast<int>(out.size()) * 8)
    throw std::invalid_argument("polynomial too wide for byte buffer");
  std::fill(out.begin(), out.end(), 0);
  const int n = static_cast<int>(out.size());
  if (!d) return;
  for (int i = 0; i <= *d; ++i)
    if (bit(i)) out[static_cast<std::size_t>(n - 1 - i / 8)] |= static_cast<std::uint8_t>(1u << (i % 8));
}

Poly& Poly::operator^=(const Poly& rhs) {
  if (rhs.words_.size() > words_.size()) words_.resize(rhs.words_.size(), 0);
  for (std::size_t i = 0; i < rhs.words_.size(); ++i) words_[i] ^= rhs.words_[i];
  trim();
  return *this;
}

Poly Poly::shifted_left(int k) const {
  if (k < 0) throw std::invalid_argument("negative shift");
  if (words_.empty() || k == 0) return *this;
  Poly out;
  const int wordShift = k / kWordBits;
  const int bitShift = k % kWordBits;
  out.words_.assign(words_.size() + static_cast<std::size_t>(wordShift) + 1, 0);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out.words_[i + static_cast<std::size_t>(wordShift)] |= words_[i] << bitShift;
    if (bitShift != 0)
      out.words_[i + static_cast<std::size_t>(wordShift) + 1] |= words_[i] >> (kWordBits - bitShift);
  }
  out.trim();
  return out;
}

void Poly::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

Poly add(const Poly& a, const Poly& b) { return a ^ b; }

Poly mul(const Poly& a, const Poly& b) {
  Poly out;
  const auto db = b.degree();
  if (a.is_zero() || !db) return out;
  for (int i = 0; i <= *db; ++i)
    if (b.bit(i)) out ^= a.shifted_left(i);
  return out;
}

DivMod divmod(const Poly& a, const Poly& m) {
  const auto dm = m.degree();
  if (!dm) throw std::invalid_argument("division by zero polynomial");
  DivMod r{Poly{}, a};
  auto dr = r.remainder.degree();
  while (dr && *dr >= *dm) {
    const int k = *dr - *dm;
    r.remainder ^= m.shifted_left(k);
    r.quotient.set_bit(k, true);
    dr = r.remainder.degree();
  }
  return r;
}

Poly mod(const Poly& a, const Poly& m) { return divmod(a, m).remainder; }

Poly gcd(Poly a, Poly b) {
  if (a.is_zero() && b.is_zero())
    throw std::invalid_argument("gcd of two zero polynomials is undefined");
  while (!b.is_zero()) {
    Poly r = mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Egcd egcd(const Poly& a, const Poly& b) {
  if (a.is_zero() && b.is_zero())
    throw std::invalid_argument("egcd of two zero polynomials is undefined");
  Poly r0 = a, r1 = b;
  Poly u0 = Poly::one(), u1;
  Poly v0, v1 = Poly::one();
  while (!r1.is_zero()) {
    const DivMod d = divmod(r0, r1);
    r0 = r1;
    r1 = d.remainder;
    Poly u2 = u0 ^ mul(d.quotient, u1);
    u0 = u1;
    u1 = std::move(u2);
    Poly v2 = v0 ^ mul(d.quotient, v1);
    v0 = v1;
    v1 = std::move(v2);
  }
  return {r0, u0, v0};
}

Poly inv_mod(const Poly& a, const Poly& m) {
  if (m.is_zero()) throw std::invalid_argument("inverse modulo zero polynomial");
  const Poly ar = mod(a, m);
  if (ar.is_zero())
    throw std::invalid_argument("no inverse: common factor " + m.to_binary());
  const Egcd e = egcd(ar, m);
  if (!e.g.is_one())
    throw std::invalid_argument("no inverse: common factor " + e.g.to_binary());
  return mod(e.u, m);
}

bool is_irreducible(const Poly& p) {
  const auto d = p.degree();
  if (!d || *d < 1)
    throw std::invalid_argument("irreducibility is defined for degree >= 1");
  if (*d > 24) throw std::invalid_argument("trial division limited to degree <= 24");
  if (*d == 1) return true;
  const std::uint64_t limit = 1ull << (*d / 2 + 1);
  for (std::uint64_t v = 2; v < limit; ++v) {
    if (mod(p, Poly(v)).is_zero()) return false;
  }
  return true;
}

std::size_t count_irreducibles(int degree) {
  if (degree < 1 || degree > 20)
    throw std::invalid_argument("irreducible enumeration supported for degrees 1..20");
  std::size_t n = 0;
  for (std::uint64_t v = 1ull << degree; v < (2ull << degree); ++v)
    if (is_irreducible(Poly(v))) ++n;
  return n;
}

std::vector<Poly> enumerate_irreducibles(int degree, std::size_t count) {
  if (degree < 1 || degree > 20)
    throw std::invalid_argument("irreducible enumeration supported for degrees 1..20");
  std::vector<Poly> out;
  out.reserve(count);
  for (std::uint64_t v = 1ull << degree; v < (2ull << degree) && out.size() < count; ++v) {
    Poly p(v);
    if (is_irreducible(p)) out.push_back(std::move(p));
  }
  if (out.size() < count)
    throw std::invalid_argument("only " + std::to_string(count_irreducibles(degree)) +
                                " irreducible polynomials of degree " + std::to_string(degree) +
                                " exist (requested " + std::to_string(count) + ")");
  return out;
}

Poly crt_combine(std::span<const std::pair<Poly, Poly>> systems) {
  if (systems.empty()) throw std::invalid_argument("empty residue system");
  for (std::size_t i = 0; i < systems.size(); ++i) {
    const auto& [m, r] = systems[i];
    const auto dm = m.degree();
    if (!dm || *dm < 1)
      throw std::invalid_argument("modulus " + std::to_string(i) + " must have degree >= 1");
    const auto dr = r.degree();
    if (dr && *dr >= *dm)
      throw std::invalid_argument("residue " + r.to_binary() + " too large for modulus " + m.to_binary());
    for (std::size_t j = i + 1; j < systems.size(); ++j) {
      const Poly g = gcd(m, systems[j].first);
      if (!g.is_one())
        throw std::invalid_argument("moduli " + m.to_binary() + " and " + systems[j].first.to_binary() +
                                    " are not coprime (gcd " + g.to_binary() + ")");
    }
  }
  Poly big = Poly::one();
  for (const auto& [m, r] : systems) big = mul(big, m);
  Poly out;
  for (const auto& [m, r] : systems) {
    if (r.is_zero()) continue;
    const DivMod d = divmod(big, m);
    const Poly inv = inv_mod(d.quotient, m);
    out ^= mul(mul(r, d.quotient), inv);
  }
  return mod(out, big);
}

}  // namespace mmint::gf2
