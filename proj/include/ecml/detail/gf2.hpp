#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define ECML_HAVE_X86 1
#endif

namespace ecml::detail {

struct Clmul {
  std::uint64_t lo, hi;
};

inline Clmul clmul_soft(std::uint64_t a, std::uint64_t b) {
  std::uint64_t lo = 0, hi = 0;
  for (int i = 0; i < 64; ++i) {
    if (!((b >> i) & 1)) continue;
    lo ^= a << i;
    if (i) hi ^= a >> (64 - i);
  }
  return {lo, hi};
}

#ifdef ECML_HAVE_X86
__attribute__((target("pclmul,sse4.1"))) inline Clmul clmul_hw(std::uint64_t a, std::uint64_t b) {
  __m128i r = _mm_clmulepi64_si128(_mm_set_epi64x(0, static_cast<long long>(a)), _mm_set_epi64x(0, static_cast<long long>(b)), 0);
  return {static_cast<std::uint64_t>(_mm_cvtsi128_si64(r)), static_cast<std::uint64_t>(_mm_extract_epi64(r, 1))};
}

inline bool have_pclmul() {
  static const bool yes = __builtin_cpu_supports("pclmul");
  return yes;
}
#endif

// Carry-less 64x64 -> 128 product.
inline Clmul clmul(std::uint64_t a, std::uint64_t b) {
#ifdef ECML_HAVE_X86
  if (have_pclmul()) return clmul_hw(a, b);
#endif
  return clmul_soft(a, b);
}

// GF(2^64) = GF(2)[x] / (x^64 + x^4 + x^3 + x + 1).
struct Gf64 {
  std::uint64_t v = 0;

  static Gf64 zero() { return {0}; }
  static Gf64 one() { return {1}; }
  bool is_zero() const { return v == 0; }

  friend Gf64 operator+(Gf64 a, Gf64 b) { return {a.v ^ b.v}; }
  Gf64& operator+=(Gf64 b) {
    v ^= b.v;
    return *this;
  }
  friend Gf64 operator*(Gf64 a, Gf64 b) {
    auto [lo, hi] = clmul(a.v, b.v);
    // fold hi * x^64 = hi * (x^4 + x^3 + x + 1)
    auto [l2, h2] = clmul(hi, 0x1B);
    auto [l3, h3] = clmul(h2, 0x1B);
    (void)h3;
    return {lo ^ l2 ^ l3};
  }
  friend bool operator==(Gf64 a, Gf64 b) { return a.v == b.v; }

  Gf64 pow(std::uint64_t e) const {
    Gf64 base = *this, acc = one();
    for (; e; e >>= 1) {
      if (e & 1) acc = acc * base;
      base = base * base;
    }
    return acc;
  }
};

// Dense polynomial over GF(2); bit i of the word vector is the coefficient of z^i.
struct Gf2Poly {
  std::vector<std::uint64_t> w;

  static Gf2Poly zero() { return {}; }
  static Gf2Poly one() { return {{1}}; }
  static Gf2Poly monomial(std::size_t degree) {
    Gf2Poly p;
    p.w.assign(degree / 64 + 1, 0);
    p.w.back() = 1ULL << (degree % 64);
    return p;
  }

  bool is_zero() const { return w.empty(); }
  bool coeff(std::size_t i) const { return i / 64 < w.size() && ((w[i / 64] >> (i % 64)) & 1); }

  void trim() {
    while (!w.empty() && w.back() == 0) w.pop_back();
  }

  Gf2Poly& operator+=(const Gf2Poly& o) {
    if (o.w.size() > w.size()) w.resize(o.w.size(), 0);
    for (std::size_t i = 0; i < o.w.size(); ++i) w[i] ^= o.w[i];
    trim();
    return *this;
  }
  friend Gf2Poly operator+(Gf2Poly a, const Gf2Poly& b) { return a += b; }

  friend Gf2Poly operator*(const Gf2Poly& a, const Gf2Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Gf2Poly r;
    r.w.assign(a.w.size() + b.w.size(), 0);
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < b.w.size(); ++j)
      if (b.w[j]) nz.push_back(j);
    for (std::size_t i = 0; i < a.w.size(); ++i) {
      if (!a.w[i]) continue;
      for (std::size_t j : nz) {
        auto [lo, hi] = clmul(a.w[i], b.w[j]);
        r.w[i + j] ^= lo;
        r.w[i + j + 1] ^= hi;
      }
    }
    r.trim();
    return r;
  }
  friend bool operator==(const Gf2Poly&, const Gf2Poly&) = default;

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::uint64_t x = w[i]; x; x &= x - 1) out.push_back(i * 64 + static_cast<std::size_t>(__builtin_ctzll(x)));
    return out;
  }
};

}  // namespace ecml::detail
