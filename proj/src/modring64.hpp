#pragma once

#include <cstdint>

namespace venq::detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Montgomery arithmetic modulo an odd modulus < 2^63.
struct Mont64 {
  u64 mod;
  u64 ninv;  // -mod^{-1} mod 2^64
  u64 r1;    // 2^64 mod mod
  u64 r2;    // 2^128 mod mod

  explicit Mont64(u64 m) : mod(m) {
    u64 inv = m;  // Newton: inv *= 2 - m*inv, five rounds suffice for 64 bits
    for (int i = 0; i < 5; ++i) inv *= 2 - m * inv;
    ninv = ~inv + 1;
    r1 = static_cast<u64>((u128(1) << 64) % m);
    r2 = static_cast<u64>((u128(r1) * r1) % m);
  }

  u64 reduce(u128 t) const {
    u64 q = static_cast<u64>(t) * ninv;
    u64 r = static_cast<u64>((t + u128(q) * mod) >> 64);
    return r >= mod ? r - mod : r;
  }
  u64 mul(u64 a, u64 b) const { return reduce(u128(a) * b); }
  u64 to(u64 a) const { return mul(a % mod, r2); }
  u64 from(u64 a) const { return reduce(u128(a)); }
  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= mod ? s - mod : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + (mod - b); }
  u64 pow(u64 aMont, u64 e) const {
    u64 r = r1, b = aMont;
    while (e) {
      if (e & 1ULL) r = mul(r, b);
      e >>= 1ULL;
      if (e) b = mul(b, b);
    }
    return r;
  }
};

// Inverse of an odd value modulo 2^64 (for exact division by odd constants).
inline u64 invOddU64(u64 m) {
  u64 inv = m;
  for (int i = 0; i < 5; ++i) inv *= 2 - m * inv;
  return inv;
}

}  // namespace venq::detail
